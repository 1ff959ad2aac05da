use num_bigint::BigInt;
use num_rational::BigRational;

use super::*;
use crate::dicyclic::{f_exponent, omega2_claimed, syzygy_expr, u_chart, x_chart, Branch};
use crate::diffgeo::ContraMetric;

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn cfg() -> NumConfig {
    NumConfig::default()
}

#[test]
fn evaluation_examples() {
    let xt = x_chart();
    let u1 = GenExpr::mono(&xt, QuadExt::one(), &[("x1", QuadExt::int(2)), ("x2", QuadExt::int(2))]).unwrap();
    let v = eval(&RatExpr::from(u1), &[r(1, 1), r(2, 1)], 256).unwrap();
    let ctx = RealCtx::new(256);
    assert!(ctx.is_zero(&ctx.sub(&v, &ctx.int(4))));

    let ut = u_chart();
    let om = omega2_claimed(&ut, 2);
    let v = eval(&om[0][0], &[r(4, 1), r(1, 1)], 256).unwrap();
    let d = ctx.sub(&v, &ctx.from_rational_parts(16, 3));
    assert!(ctx.lt(&ctx.abs(&d), &ctx.pow10(-70)));

    let f = RatExpr::from(GenExpr::mono(&ut, QuadExt::one(), &[("u1", f_exponent(2, Branch::Plus))]).unwrap());
    let v = eval(&f, &[r(2, 1), r(1, 1)], 256).unwrap();
    let oracle = 2f64.powf(1.0 + 3f64.sqrt());
    assert!((ctx.to_f64(&v) - oracle).abs() < 1e-12);
    assert!((ctx.to_f64(&v) - 6.6440).abs() < 1e-4);
}

#[test]
fn sampling_is_deterministic_and_in_range() {
    let d = SampleDomain::standard();
    let t = u_chart();
    let a = d.sample_points(&t, 10, 0).unwrap();
    let b = d.sample_points(&t, 10, 0).unwrap();
    let c = d.sample_points(&t, 10, 1).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    for p in &a {
        assert!(d.contains("u1", &p[0]) && d.contains("u2", &p[1]));
    }
}

#[test]
fn positive_variables_need_positive_intervals() {
    let d = SampleDomain::new(&[("u1", (-1, 1), (1, 1)), ("u2", (1, 1), (2, 1))]).unwrap();
    assert!(matches!(d.sample_points(&u_chart(), 1, 0), Err(Error::Domain(_))));
    assert!(SampleDomain::new(&[("u1", (2, 1), (1, 1))]).is_err());
}

#[test]
fn zero_checks() {
    let x = RatExpr::from(syzygy_expr(3, 4).unwrap());
    assert!(zero_check_random(&x, &SampleDomain::standard(), &cfg()).unwrap().passed);
    assert!(syzygy_backstop(3, &cfg()).unwrap().passed);
    assert!(ode_backstop("f-", 4, &f_exponent(4, Branch::Minus), &cfg()).unwrap().passed);
    assert!(!ode_backstop("u1^n", 2, &QuadExt::int(2), &cfg()).unwrap().passed);
}

#[test]
fn perturbed_syzygy_is_nonzero() {
    // u₃² − u₁u₂² + 3u₁ⁿ⁺¹ in x: the symbolic kernel keeps a nonzero
    // remainder and the evaluator sees it.
    let xt = x_chart();
    let x = RatExpr::from(syzygy_expr(3, 3).unwrap());
    assert_eq!(x.table().len(), xt.len());
    assert!(!zero_check_random(&x, &SampleDomain::standard(), &cfg()).unwrap().passed);
}

#[test]
fn jets_agree_with_symbolic_derivatives() {
    let ut = u_chart();
    let e = f_exponent(3, Branch::Plus);
    let x = &GenExpr::mono(&ut, QuadExt::ratio(2, 7), &[("u1", e.clone()), ("u2", QuadExt::int(3))]).unwrap()
        + &GenExpr::mono(&ut, QuadExt::sqrt3(), &[("u1", QuadExt::int(-2)), ("u2", QuadExt::one())]).unwrap();
    let ev = Evaluator::new(256);
    let jc = JetCtx::new(&ev, 2);
    let p = ev.point(&[r(1, 3), r(5, 2)]);
    let b = jc.bindings(&ut, &p, None).unwrap();
    let j = jc.eval_gen(&x, &b).unwrap();
    let h = j.h.clone().unwrap();
    let c = &ev.ctx;
    let tol = c.pow10(-60);
    for i in 0..2 {
        let di = x.diff(i).unwrap();
        assert!(c.lt(&c.abs(&c.sub(&j.g[i], &ev.eval_gen(&di, &p).unwrap())), &tol));
        for k in 0..2 {
            let dik = di.diff(k).unwrap();
            assert!(c.lt(&c.abs(&c.sub(&h[i][k], &ev.eval_gen(&dik, &p).unwrap())), &tol));
        }
    }
}

#[test]
fn fd_oracle_constant_metric() {
    let ut = u_chart();
    let m = vec![
        vec![RatExpr::quad(&ut, QuadExt::int(2)), RatExpr::one(&ut)],
        vec![RatExpr::one(&ut), RatExpr::quad(&ut, QuadExt::int(5))],
    ];
    let g = ContraMetric::new(&ut, m).unwrap();
    let o = fd_christoffel_oracle(&g, &[r(2, 1), r(3, 1)], &r(1, 1 << 20), 256).unwrap();
    let c = RealCtx::new(256);
    for v in o.fd.iter().flatten().flatten() {
        assert!(c.lt(&c.abs(v), &c.pow10(-30)));
    }
}

#[test]
fn fd_oracle_convergence() {
    let b = fd_backstop(2, 20, &cfg()).unwrap();
    assert!(b.check.passed, "{b:?}");
    assert!((3.0..5.0).contains(&b.richardson_ratio), "{b:?}");
}

#[test]
fn fd_oracle_fine_step() {
    let ut = u_chart();
    let g = ContraMetric::new(&ut, omega2_claimed(&ut, 2)).unwrap();
    let step = BigRational::new(BigInt::from(1), BigInt::from(2).pow(60u32));
    let o = fd_christoffel_oracle(&g, &[r(2, 1), r(3, 1)], &step, 256).unwrap();
    let c = RealCtx::new(256);
    assert!(c.lt(&o.rel_error, &c.pow10(-30)), "{}", c.sci(&o.rel_error));
}

#[test]
fn hessian_metric_is_flat_numerically() {
    let ut = u_chart();
    let g = ContraMetric::new(&ut, omega2_claimed(&ut, 3)).unwrap();
    assert!(flatness_backstop("flat", &g, &cfg()).unwrap().passed);
    assert!(pushforward_backstop(3, &cfg()).unwrap().passed);
    assert!(lie_jet_backstop(3, &cfg()).unwrap().passed);
}

#[test]
fn curved_metric_is_caught() {
    let ut = u_chart();
    let m = vec![
        vec![RatExpr::one(&ut), RatExpr::zero(&ut)],
        vec![RatExpr::zero(&ut), RatExpr::var(&ut, "u1").unwrap()],
    ];
    let g = ContraMetric::new(&ut, m).unwrap();
    assert!(!flatness_backstop("curved", &g, &cfg()).unwrap().passed);
}
