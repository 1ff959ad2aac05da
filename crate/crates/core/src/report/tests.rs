use super::*;

fn quick() -> NumConfig {
    NumConfig {
        samples: 3,
        ..NumConfig::default()
    }
}

#[test]
fn n2_plus_passes() {
    let r = run_pipeline(2, Branch::Plus, &quick()).unwrap();
    for s in &r.stages {
        assert!(s.passed, "{s:?}");
    }
    assert!(r.numeric.iter().all(|c| c.passed), "{:?}", r.numeric);
    assert!(r.passed);
    assert!(r.flag("regularity_matrix").is_some());
    assert!(r.flag("minus_charge").is_none());
}

#[test]
fn n5_minus_flags_charge() {
    let r = run_pipeline(5, Branch::Minus, &quick()).unwrap();
    assert!(r.passed, "{:?}", r.stages);
    let f = r.flag("minus_charge").unwrap();
    assert_eq!(f.computed, expected_charge(5, Branch::Minus).to_string());
    assert_ne!(f.computed, f.printed);
}

#[test]
fn n1_is_rejected() {
    assert!(run_pipeline(1, Branch::Plus, &quick()).is_err());
    assert!(run_all(1, &[Branch::Plus], &quick()).is_err());
}

#[test]
fn emitters() {
    let set = run_all(2, &[Branch::Plus, Branch::Minus], &quick()).unwrap();
    assert_eq!(set.runs[0].branch, Branch::Plus);
    let text = emit(&set, Format::Text);
    assert!(text.contains("[PASS] group"));
    assert!(text.contains("overall: PASS"));
    let json: serde_json::Value = serde_json::from_str(&emit(&set, Format::Json)).unwrap();
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["runs"].as_array().unwrap().len(), 2);
    let tex = emit(&set, Format::Latex);
    assert!(tex.contains("\\frac{4}{3} u_1"));
    assert!(tex.contains("t_1"));
    assert!(!tex.contains("w1"));
}

#[test]
fn reports_are_deterministic() {
    let a = emit(&run_all(3, &[Branch::Minus], &quick()).unwrap(), Format::Json);
    let b = emit(&run_all(3, &[Branch::Minus], &quick()).unwrap(), Format::Json);
    assert_eq!(a, b);
}
