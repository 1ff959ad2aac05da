use proptest::prelude::*;

use dicyclic_frobenius::dicyclic::{branch_pencil, Branch};
use dicyclic_frobenius::diffgeo::quasihom_check;
use dicyclic_frobenius::exactnum::QuadExt;
use dicyclic_frobenius::frobenius::{expected_k, flat_table, third_derivatives, wdvv_witness, FlatFrame};
use dicyclic_frobenius::numcheck::NumConfig;
use dicyclic_frobenius::report::{expected_charge, printed_minus_charge, run_pipeline};
use dicyclic_frobenius::symexpr::GenExpr;

fn quad() -> impl Strategy<Value = QuadExt> {
    (-6i64..=6, 1i64..=4, -3i64..=3, 1i64..=4).prop_map(|(p, q, r, s)| QuadExt::from_parts(p, q, r, s))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn wdvv_is_vacuous_in_two_dimensions(terms in prop::collection::vec((quad(), quad()), 1..4), sign in prop::bool::ANY) {
        let t = flat_table();
        let frame = FlatFrame::new(&t, vec![if sign { 1 } else { -1 }, 1]).unwrap();
        let mut f = GenExpr::mono(&t, QuadExt::ratio(1, 2), &[("w1", QuadExt::one()), ("t2", QuadExt::int(2))]).unwrap();
        for (c, e) in terms {
            f = &f + &GenExpr::mono(&t, c, &[("w1", e)]).unwrap();
        }
        let c = third_derivatives(&frame, &f).unwrap();
        let eta = vec![vec![QuadExt::zero(), QuadExt::one()], vec![QuadExt::one(), QuadExt::zero()]];
        prop_assert!(wdvv_witness(&c, &eta).is_none());
    }

    #[test]
    fn k_formula_matches_leading_exponent(n in 2i64..40) {
        for br in [Branch::Plus, Branch::Minus] {
            let d = expected_charge(n, br);
            prop_assert_eq!(expected_k(&d).unwrap(), QuadExt::from_parts(1, 1, -br.sign() * n, 1));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn minus_charge_flag_is_raised(n in 9i64..14) {
        let cfg = NumConfig { samples: 1, ..NumConfig::default() };
        let r = run_pipeline(n, Branch::Minus, &cfg).unwrap();
        prop_assert!(r.passed);
        let flag = r.flag("minus_charge").unwrap();
        prop_assert_eq!(&flag.printed, &printed_minus_charge(n).to_string());
        prop_assert_ne!(&flag.printed, &flag.computed);
    }

    #[test]
    fn charge_is_computed_not_assumed(n in 9i64..20) {
        for br in [Branch::Plus, Branch::Minus] {
            let bp = branch_pencil(n, br).unwrap();
            let qh = quasihom_check(&bp.g1, &bp.g2, &bp.tau).unwrap();
            prop_assert_eq!(qh.charge, Some(expected_charge(n, br)));
        }
    }
}
