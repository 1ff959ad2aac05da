use std::collections::HashMap;
use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::exactnum::QuadExt;
use crate::radconst::{RadicalConstant, RingOp};

fn q(p: i64, qd: i64, r: i64, s: i64) -> QuadExt {
    QuadExt::from_parts(p, qd, r, s)
}

fn xt() -> Arc<VarTable> {
    VarTable::chart(&[("x1", false), ("x2", false)])
}

fn ut() -> Arc<VarTable> {
    VarTable::builder()
        .chart("u1", true)
        .chart("u2", false)
        .jets("u1", &["J0", "J1", "J2"])
        .build()
}

fn mono(t: &Arc<VarTable>, c: i64, p: &[(&str, i64)]) -> GenExpr {
    let p: Vec<(&str, QuadExt)> = p.iter().map(|(n, e)| (*n, QuadExt::int(*e))).collect();
    GenExpr::mono(t, QuadExt::int(c), &p).unwrap()
}

#[test]
fn product_of_monomials() {
    let t = xt();
    let u1 = mono(&t, 1, &[("x1", 2), ("x2", 2)]);
    assert_eq!(&u1 * &u1, mono(&t, 1, &[("x1", 4), ("x2", 4)]));
}

/// Integer polynomials in two variables, multiplied term by term.
type Brute = HashMap<(i64, i64), i64>;

fn brute_mul(a: &Brute, b: &Brute) -> Brute {
    let mut out = Brute::new();
    for ((i, j), c) in a {
        for ((k, l), d) in b {
            *out.entry((i + k, j + l)).or_insert(0) += c * d;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn brute_add(a: &Brute, b: &Brute, s: i64) -> Brute {
    let mut out = a.clone();
    for (k, c) in b {
        *out.entry(*k).or_insert(0) += s * c;
    }
    out.retain(|_, c| *c != 0);
    out
}

#[test]
fn syzygy_vanishes_in_x_for_n2() {
    let t = xt();
    let n = 2;
    let u1 = mono(&t, 1, &[("x1", 2), ("x2", 2)]);
    let u2 = &mono(&t, 1, &[("x1", 2 * n)]) + &mono(&t, 1, &[("x2", 2 * n)]);
    let u3 = &mono(&t, 1, &[("x1", 2 * n + 1), ("x2", 1)]) - &mono(&t, 1, &[("x1", 1), ("x2", 2 * n + 1)]);
    let rel = &(&(&u3 * &u3) - &(&u1 * &(&u2 * &u2))) + &u1.pow(n as u32 + 1).scale_quad(&QuadExt::int(4));
    assert!(rel.is_zero());

    let b1: Brute = [((2, 2), 1)].into();
    let b2: Brute = [((4, 0), 1), ((0, 4), 1)].into();
    let b3: Brute = [((5, 1), 1), ((1, 5), -1)].into();
    let mut b1n = b1.clone();
    for _ in 0..n {
        b1n = brute_mul(&b1n, &b1);
    }
    let lhs = brute_add(&brute_mul(&b3, &b3), &brute_mul(&b1, &brute_mul(&b2, &b2)), -1);
    let lhs = brute_add(&lhs, &b1n, 4);
    assert!(lhs.is_empty());
}

#[test]
fn conjugate_exponents_add_to_n() {
    let t = ut();
    let n = 3;
    let a = GenExpr::mono(&t, QuadExt::one(), &[("u1", q(n, 2, n, 2))]).unwrap();
    let b = GenExpr::mono(&t, QuadExt::one(), &[("u1", q(n, 2, -n, 2))]).unwrap();
    assert_eq!(&a * &b, mono(&t, 1, &[("u1", n)]));
}

#[test]
fn irrational_power_rule() {
    let t = ut();
    let e = q(2, 2, 2, 2);
    let f = GenExpr::mono(&t, QuadExt::one(), &[("u1", e.clone())]).unwrap();
    let expect = GenExpr::mono(&t, e.clone(), &[("u1", &e - &QuadExt::one())]).unwrap();
    assert_eq!(expr_diff(&f, "u1").unwrap(), expect);
}

#[test]
fn jet_chain_rule() {
    let t = ut();
    let j0sq = mono(&t, 1, &[("J0", 2)]);
    assert_eq!(j0sq.diff_name("u1").unwrap(), mono(&t, 2, &[("J0", 1), ("J1", 1)]));
    let j2 = mono(&t, 1, &[("J2", 1)]);
    assert!(matches!(j2.diff_name("u1"), Err(crate::Error::JetDepthExceeded(_))));
    assert!(matches!(j0sq.diff_name("J0"), Err(crate::Error::NotChartVariable(_))));
}

#[test]
fn hessian_off_diagonal() {
    let t = xt();
    let u1 = mono(&t, 1, &[("x1", 2), ("x2", 2)]);
    let h12 = u1.diff_name("x1").unwrap().diff_name("x2").unwrap();
    assert_eq!(h12, mono(&t, 4, &[("x1", 1), ("x2", 1)]));
}

#[test]
fn inverse_substitution_round_trip() {
    let t = ut();
    let n = 2;
    let a = q(n, 2, n, 2);
    let flat = VarTable::chart(&[("u1", true), ("t2", false)]);
    let x = GenExpr::mono(&t, QuadExt::one(), &[("u2", QuadExt::one()), ("u1", -&a)]).unwrap();
    let img = MonoImage::build(&flat, RadicalConstant::one(), &[("t2", QuadExt::one()), ("u1", a.clone())]).unwrap();
    let got = expr_subst_monomial(&x, &flat, &[("u2", img)]).unwrap();
    assert_eq!(got, GenExpr::var(&flat, "t2").unwrap());
}

#[test]
fn scaling_substitution() {
    let t = ut();
    let n = 2;
    let w = VarTable::chart(&[("w1", true), ("u2", false)]);
    let x = GenExpr::mono(&t, QuadExt::ratio(4, 3), &[("u1", QuadExt::one())]).unwrap();
    let img = MonoImage::build(&w, RadicalConstant::from_quad(q(0, 1, 2 * n, 3)), &[("w1", QuadExt::one())]).unwrap();
    let got = expr_subst_monomial(&x, &w, &[("u1", img)]).unwrap();
    // 8n/(3√3) = 8n√3/9
    let expect = GenExpr::mono(&w, q(0, 1, 8 * n, 9), &[("w1", QuadExt::one())]).unwrap();
    assert_eq!(got, expect);
}

#[test]
fn jet_substitution_solves_the_ode() {
    let t = ut();
    let n = 2;
    let a = q(n, 2, n, 2);
    let ode = &(&mono(&t, n * n, &[("J0", 2)]) + &mono(&t, 2 * n, &[("u1", 1), ("J0", 1), ("J1", 1)]))
        - &mono(&t, 2, &[("u1", 2), ("J1", 2)]);
    let target = VarTable::chart(&[("u1", true), ("u2", false)]);
    let j0 = MonoImage::build(&target, RadicalConstant::one(), &[("u1", a.clone())]).unwrap();
    let j1 = MonoImage::build(&target, RadicalConstant::from_quad(a.clone()), &[("u1", &a - &QuadExt::one())]).unwrap();
    let got = expr_subst_monomial(&ode, &target, &[("J0", j0), ("J1", j1)]).unwrap();
    assert!(got.is_zero());
}

#[test]
fn integration_examples() {
    let flat = VarTable::chart(&[("w1", true), ("t2", false)]);
    let t2 = GenExpr::var(&flat, "t2").unwrap();
    assert_eq!(
        expr_integrate(&t2, "t2").unwrap(),
        GenExpr::mono(&flat, QuadExt::ratio(1, 2), &[("t2", QuadExt::int(2))]).unwrap()
    );
    let n = 2;
    let e = q(-1, 1, -n, 1);
    let x = GenExpr::mono(&flat, QuadExt::one(), &[("w1", e)]).unwrap();
    let expect = GenExpr::mono(&flat, q(0, 1, -n, 1).inv().unwrap(), &[("w1", q(0, 1, -n, 1))]).unwrap();
    assert_eq!(expr_integrate(&x, "w1").unwrap(), expect);
    let inv = GenExpr::mono(&flat, QuadExt::one(), &[("t2", QuadExt::int(-1))]).unwrap();
    assert!(matches!(expr_integrate(&inv, "t2"), Err(crate::Error::LogarithmicIntegral(_))));
}

#[test]
fn irrational_exponent_on_non_positive_variable_is_rejected() {
    let t = xt();
    assert!(GenExpr::mono(&t, QuadExt::one(), &[("x1", QuadExt::sqrt3())]).is_err());
}

#[test]
fn table_mismatch_is_an_error() {
    let a = GenExpr::var(&xt(), "x1").unwrap();
    let b = GenExpr::var(&ut(), "u1").unwrap();
    assert!(matches!(expr_arith(&a, &b, RingOp::Add), Err(crate::Error::TableMismatch)));
}

#[test]
fn rational_expressions() {
    let t = ut();
    let u1 = RatExpr::var(&t, "u1").unwrap();
    let u2 = RatExpr::var(&t, "u2").unwrap();
    let p = &(&u2 * &u2) - &(&u1 * &u1).scale_quad(&QuadExt::int(4));
    let r = RatExpr::one(&t).checked_div(&p).unwrap();
    assert_eq!(r.den_factors().len(), 1);
    assert!((&(&r * &p) - &RatExpr::one(&t)).is_zero());
    // d/du1 (1/p) = 8u1/p²
    let d = r.diff_name("u1").unwrap();
    let expect = u1.scale_quad(&QuadExt::int(8)).checked_div(&(&p * &p)).unwrap();
    assert_eq!(d, expect);
    let c = p.scale_quad(&QuadExt::int(3)).checked_div(&p).unwrap();
    assert_eq!(c.as_quad(), Some(QuadExt::int(3)));
    assert!(matches!(RatExpr::zero(&t).inv(), Err(crate::Error::DivisionByZero)));
}

#[test]
fn composition_with_polynomials() {
    let u = VarTable::chart(&[("u1", true), ("u2", false)]);
    let x = xt();
    let u1 = RatExpr::from(mono(&x, 1, &[("x1", 2), ("x2", 2)]));
    let u2 = RatExpr::from(&mono(&x, 1, &[("x1", 4)]) + &mono(&x, 1, &[("x2", 4)]));
    let e = RatExpr::from(mono(&u, 1, &[("u2", 2), ("u1", -1)]));
    let images: HashMap<usize, RatExpr> = [(0, u1.clone()), (1, u2.clone())].into();
    let got = e.compose(&x, &images).unwrap();
    assert_eq!(got, (&u2 * &u2).checked_div(&u1).unwrap());
}

#[test]
fn text_serialization_is_deterministic() {
    let t = ut();
    let x = &mono(&t, 3, &[("u1", 2)]) + &GenExpr::mono(&t, QuadExt::one(), &[("u1", QuadExt::sqrt3()), ("u2", QuadExt::one())]).unwrap();
    assert_eq!(x.to_string(), "3*u1^2 + u1^(1*sqrt3)*u2");
}

fn small_quad() -> impl Strategy<Value = QuadExt> {
    (-3i64..=3, 1i64..=3, -2i64..=2, 1i64..=2).prop_map(|(p, qd, r, s)| QuadExt::from_parts(p, qd, r, s))
}

fn arb_expr() -> impl Strategy<Value = GenExpr> {
    prop::collection::vec((-5i64..=5, small_quad(), -3i64..=3), 0..4).prop_map(|terms| {
        let t = table();
        let mut acc = GenExpr::zero(&t);
        for (c, e1, e2) in terms {
            let m = GenExpr::mono(&t, QuadExt::int(c), &[("u1", e1), ("u2", QuadExt::int(e2))]).unwrap();
            acc = &acc + &m;
        }
        acc
    })
}

thread_local! {
    static TABLE: Arc<VarTable> = VarTable::chart(&[("u1", true), ("u2", false)]);
}

fn table() -> Arc<VarTable> {
    TABLE.with(|t| t.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in arb_expr(), b in arb_expr(), c in arb_expr()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn diff_inverts_integrate(a in arb_expr()) {
        match a.integrate_name("u2") {
            Ok(i) => prop_assert_eq!(i.diff_name("u2").unwrap(), a),
            Err(e) => prop_assert!(matches!(e, crate::Error::LogarithmicIntegral(_))),
        }
    }

    #[test]
    fn product_rule(a in arb_expr(), b in arb_expr()) {
        let lhs = (&a * &b).diff_name("u1").unwrap();
        let rhs = &(&a.diff_name("u1").unwrap() * &b) + &(&a * &b.diff_name("u1").unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_is_a_homomorphism(a in arb_expr(), b in arb_expr(), k in 1i64..4, e in small_quad()) {
        let t = table();
        let target = VarTable::chart(&[("w1", true), ("v2", false)]);
        let images = [
            ("u1", MonoImage::build(&target, RadicalConstant::int(k), &[("w1", e)]).unwrap()),
            ("u2", MonoImage::build(&target, RadicalConstant::int(-k), &[("v2", QuadExt::one()), ("w1", QuadExt::int(1))]).unwrap()),
        ];
        let s = |x: &GenExpr| x.subst_named(&target, &images).unwrap();
        prop_assert!(same_table(a.table(), &t));
        prop_assert_eq!(s(&(&a * &b)), &s(&a) * &s(&b));
        prop_assert_eq!(s(&(&a + &b)), &s(&a) + &s(&b));
    }

    #[test]
    fn rational_field_laws(a in arb_expr(), b in arb_expr(), c in arb_expr()) {
        prop_assume!(!b.is_zero() && !c.is_zero());
        let ra = RatExpr::from(a.clone());
        let rb = RatExpr::from(&b + &GenExpr::var(&table(), "u2").unwrap());
        prop_assume!(!rb.is_zero());
        let rc = RatExpr::from(c);
        let q = ra.checked_div(&rb).unwrap();
        prop_assert_eq!(&(&q * &rb), &ra);
        prop_assert_eq!(&(&q + &rc) - &rc, q.clone());
        prop_assert!(q.equals(&q));
    }
}
