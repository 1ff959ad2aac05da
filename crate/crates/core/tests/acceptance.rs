//! Acceptance criteria, one test and one printed line each, over n = 2..=8
//! and both branches.

use std::io::Write;

use dicyclic_frobenius::dicyclic::{
    branch_pencil, closure, group_relations_check, hessian_pushforward, invariants_check, lie_jet_check, ode_check,
    syzygy_check, Branch,
};
use dicyclic_frobenius::diffgeo::{euler_fields, is_flat, pencil_check, quasihom_check};
use dicyclic_frobenius::exactnum::QuadExt;
use dicyclic_frobenius::frobenius::{
    constant_matrix, degrees_and_charge, expected_k, flat_coordinates, flat_regularity, normal_form,
    potential_claimed, reconstruct_potential, verify_potential, FlatCoordinates,
};
use dicyclic_frobenius::numcheck::{fd_backstop, NumConfig};
use dicyclic_frobenius::report::{expected_charge, printed_minus_charge, printed_regularity, run_all, FD_STEP_LOG2};

const NS: std::ops::RangeInclusive<i64> = 2..=8;
const BRANCHES: [Branch; 2] = [Branch::Plus, Branch::Minus];

/// Prints past the test harness's output capture so every line lands in the
/// log whether the criterion passes or not.
fn verdict(id: u32, title: &str, failures: &[String]) {
    let mut err = std::io::stderr().lock();
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    let _ = writeln!(err, "criterion {id:>2} [{status}] {title}");
    for f in failures {
        let _ = writeln!(err, "             {f}");
    }
    assert!(failures.is_empty(), "criterion {id} failed: {failures:?}");
}

struct Flat {
    fc: FlatCoordinates,
    d: QuadExt,
    degrees: Vec<QuadExt>,
}

fn flat(n: i64, branch: Branch) -> Flat {
    let bp = branch_pencil(n, branch).unwrap();
    let qh = quasihom_check(&bp.g1, &bp.g2, &bp.tau).unwrap();
    let (e, euler) = euler_fields(&bp.g1, &bp.g2, &bp.tau).unwrap();
    let fc = flat_coordinates(&bp, &euler, &e).unwrap();
    let (degrees, _) = degrees_and_charge(&fc.euler, &fc.frame).unwrap();
    Flat {
        fc,
        d: qh.charge.unwrap(),
        degrees,
    }
}

#[test]
fn criterion_01_group_and_invariants() {
    let mut failures = Vec::new();
    for n in NS {
        let g = group_relations_check(n).unwrap();
        let inv = invariants_check(n).unwrap();
        let order = closure(n as u64).len();
        if !g.passed() || order != 4 * n as usize || !inv.passed() {
            failures.push(format!("n={n}: relations {g:?}, order {order}, invariants {}", inv.passed()));
        }
    }
    verdict(1, "group relations, order 4n and invariance of u1, u2, u3 (exact)", &failures);
}

#[test]
fn criterion_02_syzygy() {
    let failures: Vec<String> = NS
        .filter(|&n| !syzygy_check(n).unwrap())
        .map(|n| format!("n={n}: syzygy does not vanish"))
        .collect();
    verdict(2, "u3^2 - u1 u2^2 + 4 u1^(n+1) expands to zero (exact)", &failures);
}

#[test]
fn criterion_03_hessian_metric() {
    let mut failures = Vec::new();
    for n in NS {
        let pf = hessian_pushforward(n).unwrap();
        let flat = is_flat(&pf.metric).unwrap();
        if !pf.verified || !flat.flat {
            failures.push(format!("n={n}: pushforward {:?}, curvature {:?}", pf.witness, flat.witness));
        }
    }
    verdict(3, "J h^-1 J^T equals the u-chart matrix and is flat (exact)", &failures);
}

#[test]
fn criterion_04_lie_derivative_metric() {
    let failures: Vec<String> = NS
        .filter_map(|n| {
            let r = lie_jet_check(n).unwrap();
            (!r.matches).then(|| format!("n={n}: entry {:?}", r.witness))
        })
        .collect();
    verdict(4, "Lie_{f d/du2} Omega2 equals the displayed jet matrix (exact)", &failures);
}

#[test]
fn criterion_05_ode() {
    let mut failures = Vec::new();
    for n in NS {
        let r = ode_check(n).unwrap();
        let scalar = r.multiplier.is_some() && r.factors;
        if !(scalar && r.plus_solves && r.minus_solves && !r.u1_pow_n_solves) {
            failures.push(format!(
                "n={n}: multiple {scalar}, f+ {}, f- {}, u1^n {}",
                r.plus_solves, r.minus_solves, r.u1_pow_n_solves
            ));
        }
    }
    verdict(5, "Lie_e Omega1 = 0 is a scalar multiple of the ODE; f+ and f- solve it, u1^n does not", &failures);
}

#[test]
fn criterion_06_flat_pencil() {
    let mut failures = Vec::new();
    for n in NS {
        for br in BRANCHES {
            let bp = branch_pencil(n, br).unwrap();
            let r = pencil_check(&bp.g1, &bp.g2).unwrap();
            if !r.passed() {
                failures.push(format!("n={n} {br}: {:?}", r.witness));
            }
        }
    }
    verdict(6, "g2 + lambda g1 flat in lambda with additive Christoffel symbols (exact)", &failures);
}

#[test]
fn criterion_07_quasihomogeneity_and_regularity() {
    let mut failures = Vec::new();
    for n in NS {
        for br in BRANCHES {
            let bp = branch_pencil(n, br).unwrap();
            let qh = quasihom_check(&bp.g1, &bp.g2, &bp.tau).unwrap();
            if !qh.passed() {
                failures.push(format!("n={n} {br}: relations {:?}", qh.witness));
                continue;
            }
            let f = flat(n, br);
            let r = constant_matrix(&flat_regularity(&f.fc.frame, &f.fc.euler, &f.d).unwrap()).unwrap();
            let det = &(&r[0][0] * &r[1][1]) - &(&r[0][1] * &r[1][0]);
            if det.sign() == 0 {
                failures.push(format!("n={n} {br}: R degenerate"));
            }
            if br == Branch::Plus {
                if f.d != expected_charge(n, br) {
                    failures.push(format!("n={n} plus: charge {}", f.d));
                }
                let printed = printed_regularity(n);
                if r != printed {
                    failures.push(format!(
                        "n={n} plus: R = diag({}, {}) but expected diag({}, {})",
                        r[0][0], r[1][1], printed[0][0], printed[1][1]
                    ));
                }
            }
        }
    }
    verdict(7, "quasihomogeneity relations, plus charge, plus R = diag(-1/(sqrt3 n), (1-n)/(sqrt3 n)), nondegenerate R", &failures);
}

#[test]
fn criterion_08_minus_charge() {
    let cfg = NumConfig {
        samples: 2,
        ..NumConfig::default()
    };
    let mut failures = Vec::new();
    for n in NS {
        let f = flat(n, Branch::Minus);
        if f.d != expected_charge(n, Branch::Minus) {
            failures.push(format!("n={n}: computed charge {}", f.d));
        }
        let run = &run_all(n, &[Branch::Minus], &cfg).unwrap().runs[0];
        match run.flag("minus_charge") {
            Some(flag) if flag.printed == printed_minus_charge(n).to_string() && flag.computed == f.d.to_string() => {}
            other => failures.push(format!("n={n}: flag {other:?}")),
        }
    }
    verdict(8, "minus charge is (sqrt3 n - 2)/(sqrt3 n) and the printed-sign flag is raised for every n", &failures);
}

#[test]
fn criterion_09_flat_coordinates() {
    let mut failures = Vec::new();
    for n in NS {
        for br in BRANCHES {
            let f = flat(n, br);
            if !f.fc.omega1_antidiagonal || f.fc.omega2_matches_display == Some(false) {
                failures.push(format!(
                    "n={n} {br}: Omega1 antidiagonal {}, Omega2 display {:?}",
                    f.fc.omega1_antidiagonal, f.fc.omega2_matches_display
                ));
            }
        }
    }
    verdict(9, "flat coordinates give Omega1 = [[0,1],[1,0]] and the displayed flat Omega2 (exact)", &failures);
}

#[test]
fn criterion_10_potentials() {
    let mut failures = Vec::new();
    for n in NS {
        for br in BRANCHES {
            let f = flat(n, br);
            let fc = &f.fc;
            let rec = reconstruct_potential(&fc.frame, &fc.omega1, &fc.omega2, &f.degrees, &f.d).unwrap();
            let claimed = potential_claimed(&fc.frame.table, n, br).unwrap();
            let eta = constant_matrix(&fc.omega1).unwrap();
            let ax = verify_potential(&fc.frame, &rec.potential, &eta, &f.degrees, &f.d).unwrap();
            if !rec.passed() || rec.potential != claimed || !ax.passed() {
                failures.push(format!(
                    "n={n} {br}: reconstruction {}, matches {}, axioms {:?}",
                    rec.passed(),
                    rec.potential == claimed,
                    ax.witness
                ));
            }
        }
    }
    verdict(10, "reconstructed potentials equal F+ and F-; unity, Euler, WDVV, commutativity (exact)", &failures);
}

#[test]
fn criterion_11_normal_form() {
    let mut failures = Vec::new();
    for n in NS {
        for br in BRANCHES {
            let f = flat(n, br);
            let rec = reconstruct_potential(&f.fc.frame, &f.fc.omega1, &f.fc.omega2, &f.degrees, &f.d).unwrap();
            let nf = normal_form(&f.fc.frame, &rec.potential, &f.d).unwrap();
            let k = QuadExt::from_parts(1, 1, -br.sign() * n, 1);
            if !nf.passed() || nf.k != k || expected_k(&f.d).unwrap() != k {
                failures.push(format!("n={n} {br}: k = {}, shape {}", nf.k, nf.shape_ok));
            }
        }
    }
    verdict(11, "scaling gives z1^k + z2^2 z1/2 with k = 1 -/+ sqrt3 n = (3-d)/(1-d)", &failures);
}

#[test]
fn criterion_12_numeric_backstop() {
    let cfg = NumConfig::default();
    assert_eq!((cfg.precision_bits, cfg.samples, cfg.tolerance_log10), (256, 10, -60));
    let mut failures = Vec::new();
    for n in NS {
        let set = run_all(n, &BRANCHES, &cfg).unwrap();
        for run in &set.runs {
            for c in run.numeric.iter().filter(|c| !c.passed) {
                failures.push(format!("n={n} {}: {} residual {}", run.branch, c.label, c.max_residual));
            }
        }
    }
    let fd = fd_backstop(2, FD_STEP_LOG2, &cfg).unwrap();
    if !fd.check.passed || !(3.0..5.0).contains(&fd.richardson_ratio) {
        failures.push(format!(
            "finite differences: relative error {}, halved step {}, ratio {:.3}",
            fd.rel_error, fd.rel_error_half_step, fd.richardson_ratio
        ));
    }
    verdict(12, "every zero verdict confirmed below 1e-60 at 256 bits with 10 seeded samples; FD Christoffel error below 1e-8", &failures);
}
