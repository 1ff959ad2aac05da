//! Numeric confirmations of the exact pipeline verdicts. Wherever possible the
//! quantity is recomputed numerically from its definition (jets, direct
//! formulas) instead of evaluating the symbolic result.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::dicyclic::{omega1_jet_claimed, omega2_claimed, u_chart, u_jet_chart, InvariantSet};
use crate::diffgeo::{ContraMetric, Matrix};
use crate::error::Result;
use crate::exactnum::QuadExt;
use crate::frobenius::{third_derivatives, FlatCoordinates, NormalFormReport};
use crate::real::Real;
use crate::symexpr::{GenExpr, RatExpr};

use super::geometry::{
    bracket_numeric, christoffel_lower_jets, contra_jets, fd_christoffel_oracle, gradient_jets, lie_numeric,
    riemann_numeric,
};
use super::jet::{power_derivative, Jet, JetCtx};
use super::{Evaluator, NumConfig, NumericCheck, Residuals, SampleDomain};

fn values(m: &[Vec<Jet>]) -> Vec<Vec<Real>> {
    m.iter().map(|r| r.iter().map(|j| j.v.clone()).collect()).collect()
}

/// `u₃² − u₁u₂² + 4u₁ⁿ⁺¹` with the invariants computed directly from `x`.
pub fn syzygy_backstop(n: i64, cfg: &NumConfig) -> Result<NumericCheck> {
    let ev = Evaluator::new(cfg.precision_bits);
    let c = &ev.ctx;
    let mut res = Residuals::new(&ev);
    let xt = crate::dicyclic::x_chart();
    for p in SampleDomain::standard().sample_points(&xt, cfg.samples, cfg.seed)? {
        let x = ev.point(&p);
        let a = c.powi(&x[0], 2 * n);
        let b = c.powi(&x[1], 2 * n);
        let u1 = c.mul(&c.mul(&x[0], &x[0]), &c.mul(&x[1], &x[1]));
        let u2 = c.add(&a, &b);
        let u3 = c.mul(&c.mul(&x[0], &x[1]), &c.sub(&a, &b));
        let lhs = c.mul(&u3, &u3);
        let rhs = c.sub(&c.mul(&u1, &c.mul(&u2, &u2)), &c.mul(&c.int(4), &c.powi(&u1, n + 1)));
        res.push_diff(&lhs, &rhs);
        res.next_sample();
    }
    Ok(res.zero_verdict("syzygy", cfg))
}

/// `J h⁻¹ Jᵀ` from jets of `u₁, u₂` in `x` against the u-chart matrix at `u(x)`.
pub fn pushforward_backstop(n: i64, cfg: &NumConfig) -> Result<NumericCheck> {
    let ev = Evaluator::new(cfg.precision_bits);
    let c = &ev.ctx;
    let jc = JetCtx::new(&ev, 2);
    let inv = InvariantSet::new(n)?;
    let ut = u_chart();
    let claimed = omega2_claimed(&ut, n);
    let mut res = Residuals::new(&ev);
    for p in SampleDomain::standard().sample_points(&inv.table, cfg.samples, cfg.seed)? {
        let b = jc.bindings(&inv.table, &ev.point(&p), None)?;
        let u1 = jc.eval_gen(&inv.u1, &b)?;
        let u2 = jc.eval_gen(&inv.u2, &b)?;
        let h = u1.h.clone().expect("second-order jet");
        let det = c.sub(&c.mul(&h[0][0], &h[1][1]), &c.mul(&h[0][1], &h[1][0]));
        let hinv = [
            [c.div(&h[1][1], &det), c.neg(&c.div(&h[0][1], &det))],
            [c.neg(&c.div(&h[1][0], &det)), c.div(&h[0][0], &det)],
        ];
        let jac = [&u1.g, &u2.g];
        let at_u = [u1.v.clone(), u2.v.clone()];
        for a in 0..2 {
            for bb in 0..2 {
                let mut acc = c.zero();
                for k in 0..2 {
                    for l in 0..2 {
                        acc = c.add(&acc, &c.mul(&c.mul(&jac[a][k], &jac[bb][l]), &hinv[k][l]));
                    }
                }
                res.push_diff(&acc, &ev.eval_rat(&claimed[a][bb], &at_u)?);
            }
        }
        res.next_sample();
    }
    Ok(res.zero_verdict("Hessian pushforward", cfg))
}

/// Largest Riemann component from jets of the metric entries.
pub fn flatness_backstop(label: &str, g: &ContraMetric, cfg: &NumConfig) -> Result<NumericCheck> {
    let ev = Evaluator::new(cfg.precision_bits);
    let jc = JetCtx::new(&ev, g.dim());
    let mut res = Residuals::new(&ev);
    for p in SampleDomain::standard().sample_points(g.table(), cfg.samples, cfg.seed)? {
        let b = jc.bindings(g.table(), &ev.point(&p), None)?;
        let m = contra_jets(&jc, g.entries(), &b)?;
        res.push(&riemann_numeric(&jc, &m)?);
        res.next_sample();
    }
    Ok(res.zero_verdict(label, cfg))
}

/// Exponent of the test function `f = u₁^p` bound to the jet symbols.
pub fn lie_jet_test_power() -> QuadExt {
    QuadExt::ratio(7, 3)
}

/// `Lie_{f∂u₂}Ω₂` from jets with a concrete `f`, against the displayed jet
/// matrix evaluated at `(f, f′)`.
pub fn lie_jet_backstop(n: i64, cfg: &NumConfig) -> Result<NumericCheck> {
    let ev = Evaluator::new(cfg.precision_bits);
    let jc = JetCtx::new(&ev, 2);
    let jt = u_jet_chart();
    let g2 = omega2_claimed(&jt, n);
    let claimed = omega1_jet_claimed(&jt, n);
    let p = lie_jet_test_power();
    let j0 = jt.require("J0")?;
    let mut res = Residuals::new(&ev);
    for pt in SampleDomain::standard().sample_points(&jt, cfg.samples, cfg.seed)? {
        let b = jc.bindings(&jt, &ev.point(&pt), Some(&p))?;
        let g = contra_jets(&jc, &g2, &b)?;
        let x = vec![jc.constant(ev.ctx.zero()), b[j0].clone()];
        let lie = lie_numeric(&jc, &g, &x);
        for i in 0..2 {
            for j in 0..2 {
                res.push_diff(&lie[i][j], &jc.eval_rat(&claimed[i][j], &b)?.v);
            }
        }
        res.next_sample();
    }
    Ok(res.zero_verdict("Lie derivative along f d/du2", cfg))
}

/// `2nu f f′ − 2u²f′² + n²f²` for `f = u^p` from direct power derivatives.
pub fn ode_backstop(label: &str, n: i64, p: &QuadExt, cfg: &NumConfig) -> Result<NumericCheck> {
    let ev = Evaluator::new(cfg.precision_bits);
    let c = &ev.ctx;
    let mut res = Residuals::new(&ev);
    let ut = u_chart();
    for pt in SampleDomain::standard().sample_points(&ut, cfg.samples, cfg.seed)? {
        let u = ev.ctx.rational(&pt[0]);
        let f = power_derivative(&ev, &u, p, 0)?;
        let f1 = power_derivative(&ev, &u, p, 1)?;
        let a = c.mul(&c.int(2 * n), &c.mul(&u, &c.mul(&f, &f1)));
        let b = c.mul(&c.int(2), &c.mul(&c.mul(&u, &u), &c.mul(&f1, &f1)));
        let d = c.mul(&c.int(n * n), &c.mul(&f, &f));
        res.push(&c.add(&c.sub(&a, &b), &d));
        res.next_sample();
    }
    Ok(res.zero_verdict(label, cfg))
}

/// Flatness of `g2 + λg1` at sampled `λ` and additivity of the contravariant
/// Christoffel symbols.
pub fn pencil_backstop(g1: &ContraMetric, g2: &ContraMetric, cfg: &NumConfig) -> Result<[NumericCheck; 2]> {
    let ev = Evaluator::new(cfg.precision_bits);
    let c = &ev.ctx;
    let r = g1.dim();
    let jc = JetCtx::new(&ev, r);
    let pt = g1.table().with_pencil("lambda");
    let li = pt.require("lambda")?;
    let mut flat = Residuals::new(&ev);
    let mut add = Residuals::new(&ev);
    for p in SampleDomain::standard().sample_points(&pt, cfg.samples, cfg.seed)? {
        let b = jc.bindings(&pt, &ev.point(&p), None)?;
        let a1 = contra_jets(&jc, g1.entries(), &b)?;
        let a2 = contra_jets(&jc, g2.entries(), &b)?;
        let lam = b[li].v.clone();
        let gl: Vec<Vec<Jet>> = (0..r)
            .map(|i| (0..r).map(|j| jc.add(&a2[i][j], &jc.scale(&a1[i][j], &lam))).collect())
            .collect();
        flat.push(&riemann_numeric(&jc, &gl)?);
        let up = |m: &[Vec<Jet>]| -> Result<Vec<Real>> {
            let low = christoffel_lower_jets(&jc, m)?;
            let mut out = Vec::new();
            for i in 0..r {
                for j in 0..r {
                    for k in 0..r {
                        let mut acc = c.zero();
                        for s in 0..r {
                            acc = c.sub(&acc, &c.mul(&m[i][s].v, &low[j][s][k].v));
                        }
                        out.push(acc);
                    }
                }
            }
            Ok(out)
        };
        let (ul, u1, u2) = (up(&gl)?, up(&a1)?, up(&a2)?);
        for ((x, y1), y2) in ul.iter().zip(&u1).zip(&u2) {
            add.push_diff(x, &c.add(y2, &c.mul(&lam, y1)));
        }
        flat.next_sample();
        add.next_sample();
    }
    Ok([
        flat.zero_verdict("pencil flatness", cfg),
        add.zero_verdict("Christoffel additivity", cfg),
    ])
}

fn push_matrix(res: &mut Residuals, ev: &Evaluator, a: &[Vec<Real>], b: &[Vec<Real>], s: &Real) {
    for (ra, rb) in a.iter().zip(b) {
        for (x, y) in ra.iter().zip(rb) {
            res.push_diff(x, &ev.ctx.mul(s, y));
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuasiHomBackstop {
    pub relations: NumericCheck,
    /// `Lie_E(,)₂ − (d−1)(,)₂` for each candidate charge.
    pub charges: Vec<NumericCheck>,
}

/// `[e,E] = e`, `Lie_e g2 = g1`, `Lie_e g1 = 0` and `Lie_E g2 = (d−1)g2` with
/// `e, E` the numeric gradients of `τ`.
pub fn quasihom_backstop(
    g1: &ContraMetric,
    g2: &ContraMetric,
    tau: &RatExpr,
    charges: &[(&str, QuadExt)],
    cfg: &NumConfig,
) -> Result<QuasiHomBackstop> {
    let ev = Evaluator::new(cfg.precision_bits);
    let c = &ev.ctx;
    let jc = JetCtx::new(&ev, g1.dim());
    let one = c.int(1);
    let zero_m = vec![vec![c.zero(); g1.dim()]; g1.dim()];
    let mut rel = Residuals::new(&ev);
    let mut ch: Vec<Residuals> = charges.iter().map(|_| Residuals::new(&ev)).collect();
    for p in SampleDomain::standard().sample_points(g1.table(), cfg.samples, cfg.seed)? {
        let b = jc.bindings(g1.table(), &ev.point(&p), None)?;
        let a1 = contra_jets(&jc, g1.entries(), &b)?;
        let a2 = contra_jets(&jc, g2.entries(), &b)?;
        let t = jc.eval_rat(tau, &b)?;
        let e = gradient_jets(&jc, &a1, &t)?;
        let euler = gradient_jets(&jc, &a2, &t)?;
        let br = bracket_numeric(&jc, &e, &euler);
        for (x, y) in br.iter().zip(&e) {
            rel.push_diff(x, &y.v);
        }
        push_matrix(&mut rel, &ev, &lie_numeric(&jc, &a2, &e), &values(&a1), &one);
        push_matrix(&mut rel, &ev, &lie_numeric(&jc, &a1, &e), &zero_m, &one);
        let le = lie_numeric(&jc, &a2, &euler);
        for (res, (_, d)) in ch.iter_mut().zip(charges) {
            let s = ev.quad(&(d - &QuadExt::one()));
            push_matrix(res, &ev, &le, &values(&a2), &s);
            res.next_sample();
        }
        rel.next_sample();
    }
    Ok(QuasiHomBackstop {
        relations: rel.zero_verdict("quasihomogeneity relations", cfg),
        charges: ch
            .iter()
            .zip(charges)
            .map(|(r, (label, _))| r.zero_verdict(label, cfg))
            .collect(),
    })
}

/// Trace and determinant of `((d−1)/2)δ + ∇E` computed in the u-chart with
/// numeric Levi-Civita symbols of `g1`, compared with each candidate matrix.
pub fn regularity_backstop(
    g1: &ContraMetric,
    g2: &ContraMetric,
    tau: &RatExpr,
    d: &QuadExt,
    candidates: &[(&str, Vec<Vec<QuadExt>>)],
    cfg: &NumConfig,
) -> Result<Vec<NumericCheck>> {
    let ev = Evaluator::new(cfg.precision_bits);
    let c = &ev.ctx;
    let r = g1.dim();
    let jc = JetCtx::new(&ev, r);
    let half = ev.quad(&(&(d - &QuadExt::one()) * &QuadExt::ratio(1, 2)));
    let mut res: Vec<Residuals> = candidates.iter().map(|_| Residuals::new(&ev)).collect();
    let invariants = |m: &[Vec<Real>]| {
        let tr = c.add(&m[0][0], &m[1][1]);
        let det = c.sub(&c.mul(&m[0][0], &m[1][1]), &c.mul(&m[0][1], &m[1][0]));
        (tr, det)
    };
    for p in SampleDomain::standard().sample_points(g1.table(), cfg.samples, cfg.seed)? {
        let b = jc.bindings(g1.table(), &ev.point(&p), None)?;
        let a1 = contra_jets(&jc, g1.entries(), &b)?;
        let a2 = contra_jets(&jc, g2.entries(), &b)?;
        let t = jc.eval_rat(tau, &b)?;
        let euler = gradient_jets(&jc, &a2, &t)?;
        let gam = christoffel_lower_jets(&jc, &a1)?;
        let m: Vec<Vec<Real>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let mut v = euler[j].g[i].clone();
                        for k in 0..r {
                            v = c.add(&v, &c.mul(&gam[j][i][k].v, &euler[k].v));
                        }
                        if i == j {
                            v = c.add(&v, &half);
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let (tr, det) = invariants(&m);
        for (rs, (_, cand)) in res.iter_mut().zip(candidates) {
            let cm: Vec<Vec<Real>> = cand.iter().map(|row| row.iter().map(|q| ev.quad(q)).collect()).collect();
            let (ct, cd) = invariants(&cm);
            rs.push_diff(&tr, &ct);
            rs.push_diff(&det, &cd);
            rs.next_sample();
        }
    }
    Ok(res
        .iter()
        .zip(candidates)
        .map(|(r, (label, _))| r.zero_verdict(label, cfg))
        .collect())
}

/// The flat-chart matrices rebuilt numerically: `u` from the inverse change,
/// the Jacobian of the forward change from jets, then the tensor transform.
pub fn flat_backstop(
    fc: &FlatCoordinates,
    g1: &ContraMetric,
    g2: &ContraMetric,
    targets: [&Matrix; 2],
    cfg: &NumConfig,
) -> Result<[NumericCheck; 2]> {
    let ev = Evaluator::new(cfg.precision_bits);
    let c = &ev.ctx;
    let jc = JetCtx::new(&ev, 2);
    let ft = &fc.frame.table;
    let ut = g1.table();
    let scale = ev.quad(&QuadExt::from_parts(0, 1, 2 * fc.n, 1).checked_div(&QuadExt::int(3))?);
    let a = ev.quad(&crate::dicyclic::f_exponent(fc.n, fc.branch));
    let signs: Vec<Real> = fc.frame.signs.iter().map(|s| c.int(*s)).collect();
    let mut res = [Residuals::new(&ev), Residuals::new(&ev)];
    for p in SampleDomain::standard().sample_points(ft, cfg.samples, cfg.seed)? {
        let wt = ev.point(&p);
        let u1 = c.mul(&scale, &wt[0]);
        let u2 = c.mul(&c.powr(&u1, &a), &wt[1]);
        let b = jc.bindings(ut, &[u1, u2], None)?;
        let jac: Vec<Vec<Real>> = fc
            .forward
            .iter()
            .map(|y| Ok(jc.eval_rat(y, &b)?.g))
            .collect::<Result<_>>()?;
        for (slot, g) in [g1, g2].iter().enumerate() {
            let m = values(&contra_jets(&jc, g.entries(), &b)?);
            for i in 0..2 {
                for j in 0..2 {
                    let mut acc = c.zero();
                    for k in 0..2 {
                        for l in 0..2 {
                            acc = c.add(&acc, &c.mul(&c.mul(&jac[i][k], &jac[j][l]), &m[k][l]));
                        }
                    }
                    acc = c.mul(&acc, &c.mul(&signs[i], &signs[j]));
                    res[slot].push_diff(&acc, &ev.eval_rat(&targets[slot][i][j], &wt)?);
                }
            }
            res[slot].next_sample();
        }
    }
    let [r1, r2] = res;
    Ok([
        r1.zero_verdict("flat chart Omega1", cfg),
        r2.zero_verdict("flat chart Omega2", cfg),
    ])
}

/// Hessian, Euler scaling, printed-potential agreement and the third-derivative
/// axioms at flat-chart samples.
#[allow(clippy::too_many_arguments)]
pub fn potential_backstop(
    fc: &FlatCoordinates,
    f: &GenExpr,
    claimed: &GenExpr,
    eta: &[Vec<QuadExt>],
    degrees: &[QuadExt],
    d: &QuadExt,
    cfg: &NumConfig,
) -> Result<Vec<NumericCheck>> {
    let ev = Evaluator::new(cfg.precision_bits);
    let c = &ev.ctx;
    let frame = &fc.frame;
    let r = frame.dim();
    let jc = JetCtx::new(&ev, r);
    let s: Vec<Real> = frame.signs.iter().map(|x| c.int(*x)).collect();
    let etar: Vec<Vec<Real>> = eta.iter().map(|row| row.iter().map(|q| ev.quad(q)).collect()).collect();
    let degr: Vec<Real> = degrees.iter().map(|q| ev.quad(q)).collect();
    let dr = ev.quad(d);
    let third = third_derivatives(frame, f)?;
    let mut hess = Residuals::new(&ev);
    let mut euler = Residuals::new(&ev);
    let mut printed = Residuals::new(&ev);
    let mut axioms = Residuals::new(&ev);
    for p in SampleDomain::standard().sample_points(&frame.table, cfg.samples, cfg.seed)? {
        let pt = ev.point(&p);
        let b = jc.bindings(&frame.table, &pt, None)?;
        let fj = jc.eval_gen(f, &b)?;
        let fh = fj.h.clone().expect("second-order jet");
        let om: Vec<Vec<Real>> = fc
            .omega2
            .iter()
            .map(|row| row.iter().map(|x| ev.eval_rat(x, &pt)).collect())
            .collect::<Result<_>>()?;
        for i in 0..r {
            for j in 0..r {
                let lhs = c.mul(&c.mul(&s[i], &s[j]), &fh[i][j]);
                let mut rhs = c.zero();
                for k in 0..r {
                    for l in 0..r {
                        let den = c.add(&c.add(&c.sub(&dr, &c.int(1)), &degr[k]), &degr[l]);
                        let num = c.mul(&c.mul(&etar[i][k], &etar[j][l]), &om[k][l]);
                        rhs = c.add(&rhs, &c.div(&num, &den));
                    }
                }
                hess.push_diff(&lhs, &rhs);
            }
        }
        // tⁱ∂_{tⁱ} = wⁱ∂_{wⁱ}
        let mut e = c.zero();
        for i in 0..r {
            e = c.add(&e, &c.mul(&degr[i], &c.mul(&pt[frame.coords[i]], &fj.g[i])));
        }
        euler.push_diff(&e, &c.mul(&c.sub(&c.int(3), &dr), &fj.v));
        printed.push_diff(&fj.v, &ev.eval_gen(claimed, &pt)?);
        let cv: Vec<Vec<Vec<Real>>> = third
            .iter()
            .map(|a| {
                a.iter()
                    .map(|row| row.iter().map(|x| ev.eval_gen(x, &pt)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        for i in 0..r {
            for j in 0..r {
                axioms.push_diff(&cv[r - 1][i][j], &etar[i][j]);
            }
        }
        let det = c.sub(&c.mul(&etar[0][0], &etar[1][1]), &c.mul(&etar[0][1], &etar[1][0]));
        let ei = [
            [c.div(&etar[1][1], &det), c.neg(&c.div(&etar[0][1], &det))],
            [c.neg(&c.div(&etar[1][0], &det)), c.div(&etar[0][0], &det)],
        ];
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    for n in 0..r {
                        let mut acc = c.zero();
                        for l in 0..r {
                            for m in 0..r {
                                let x = c.mul(&cv[i][j][l], &cv[m][k][n]);
                                let y = c.mul(&cv[i][k][l], &cv[m][j][n]);
                                acc = c.add(&acc, &c.mul(&ei[l][m], &c.sub(&x, &y)));
                            }
                        }
                        axioms.push(&acc);
                    }
                }
            }
        }
        for sample in [&mut hess, &mut euler, &mut printed, &mut axioms] {
            sample.next_sample();
        }
    }
    Ok(vec![
        hess.zero_verdict("potential Hessian", cfg),
        euler.zero_verdict("potential Euler scaling", cfg),
        printed.zero_verdict("printed potential", cfg),
        axioms.zero_verdict("unity and WDVV", cfg),
    ])
}

/// `c·F(z₁, b z₂)` assembled from numeric values of `F`, using that `F` is
/// even in `t₂`, against `z₁ᵏ + z₂²z₁/2`.
pub fn normal_form_backstop(fc: &FlatCoordinates, f: &GenExpr, nf: &NormalFormReport, cfg: &NumConfig) -> Result<NumericCheck> {
    let ev = Evaluator::new(cfg.precision_bits);
    let c = &ev.ctx;
    let zt = crate::frobenius::normal_table();
    let cc = ev.constant(&nf.c);
    let b2 = ev.constant(&nf.b_squared);
    let mut res = Residuals::new(&ev);
    let t2 = fc.frame.coords[1];
    for p in SampleDomain::standard().sample_points(&zt, cfg.samples, cfg.seed)? {
        let z = ev.point(&p);
        let mut at = vec![c.zero(); 2];
        at[fc.frame.coords[0]] = z[0].clone();
        let f0 = ev.eval_gen(f, &at)?;
        at[t2] = c.int(1);
        let f1 = ev.eval_gen(f, &at)?;
        let quad = c.mul(&c.sub(&f1, &f0), &c.mul(&b2, &c.mul(&z[1], &z[1])));
        let lhs = c.mul(&cc, &c.add(&f0, &quad));
        let rhs = c.add(
            &ev.pow(&z[0], &nf.k)?,
            &c.mul(&c.from_rational_parts(1, 2), &c.mul(&z[0], &c.mul(&z[1], &z[1]))),
        );
        res.push_diff(&lhs, &rhs);
        res.next_sample();
    }
    Ok(res.zero_verdict("normal form", cfg))
}

#[derive(Clone, Debug)]
pub struct FdBackstop {
    pub check: NumericCheck,
    pub rel_error: String,
    pub rel_error_half_step: String,
    /// `error(h) / error(h/2)`, about 4 for a second-order stencil.
    pub richardson_ratio: f64,
}

/// Finite-difference Christoffel symbols of Ω₂ at `u = (2, 3)` with step
/// `2^-step_log2`, against the symbolic symbols.
pub fn fd_backstop(n: i64, step_log2: u32, cfg: &NumConfig) -> Result<FdBackstop> {
    let ut = u_chart();
    let g = ContraMetric::new(&ut, omega2_claimed(&ut, n))?;
    let point = [BigRational::from_integer(BigInt::from(2)), BigRational::from_integer(BigInt::from(3))];
    let step = BigRational::new(BigInt::from(1), BigInt::from(2).pow(step_log2));
    let half = &step / BigRational::from_integer(BigInt::from(2));
    let a = fd_christoffel_oracle(&g, &point, &step, cfg.precision_bits)?;
    let b = fd_christoffel_oracle(&g, &point, &half, cfg.precision_bits)?;
    let ev = Evaluator::new(cfg.precision_bits);
    let c = &ev.ctx;
    let ratio = match (c.log10_abs(&a.rel_error), c.log10_abs(&b.rel_error)) {
        (Some(x), Some(y)) => 10f64.powf(x - y),
        _ => f64::NAN,
    };
    let tol = c.pow10(-8);
    Ok(FdBackstop {
        check: NumericCheck {
            label: format!("finite-difference Christoffel symbols, step 2^-{step_log2}"),
            samples: 1,
            max_residual: c.sci(&a.rel_error),
            passed: c.lt(&a.rel_error, &tol),
        },
        rel_error: c.sci(&a.rel_error),
        rel_error_half_step: c.sci(&b.rel_error),
        richardson_ratio: ratio,
    })
}
