//! Numeric metric geometry at a point, from Taylor jets of the metric entries
//! rather than from symbolic derivatives.

use num_rational::BigRational;

use crate::diffgeo::{christoffels, ContraMetric, Matrix};
use crate::error::{Error, Result};
use crate::real::Real;

use super::jet::{Jet, JetCtx};
use super::Evaluator;

pub fn contra_jets(jc: &JetCtx, m: &Matrix, bindings: &[Jet]) -> Result<Vec<Vec<Jet>>> {
    m.iter()
        .map(|row| row.iter().map(|x| jc.eval_rat(x, bindings)).collect())
        .collect()
}

fn inverse2(jc: &JetCtx, m: &[Vec<Jet>]) -> Result<Vec<Vec<Jet>>> {
    if m.len() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            got: m.len(),
        });
    }
    let det = jc.sub(&jc.mul(&m[0][0], &m[1][1]), &jc.mul(&m[0][1], &m[1][0]));
    let r = jc.inv(&det)?;
    Ok(vec![
        vec![jc.mul(&m[1][1], &r), jc.neg(&jc.mul(&m[0][1], &r))],
        vec![jc.neg(&jc.mul(&m[1][0], &r)), jc.mul(&m[0][0], &r)],
    ])
}

/// `Γᵏ_{ij}` as first-order jets, from second-order jets of `g^{ij}`.
pub fn christoffel_lower_jets(jc: &JetCtx, contra: &[Vec<Jet>]) -> Result<Vec<Vec<Vec<Jet>>>> {
    let r = contra.len();
    let cov = inverse2(jc, contra)?;
    // dg[l][i][j] = ∂_l g_{ij}
    let dg: Vec<Vec<Vec<Jet>>> = (0..r)
        .map(|l| {
            (0..r)
                .map(|i| (0..r).map(|j| jc.partial(&cov[i][j], l)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let half = jc.ev.ctx.from_rational_parts(1, 2);
    let mut out = vec![vec![vec![jc.constant(jc.ev.ctx.zero()); r]; r]; r];
    for (k, gk) in out.iter_mut().enumerate() {
        for i in 0..r {
            for j in 0..r {
                let mut acc = jc.constant(jc.ev.ctx.zero());
                acc.h = None;
                for l in 0..r {
                    let first = jc.scale(&jc.sub(&jc.add(&dg[i][l][j], &dg[j][l][i]), &dg[l][i][j]), &half);
                    acc = jc.add(&acc, &jc.mul(&contra[k][l], &first));
                }
                gk[i][j] = acc;
            }
        }
    }
    Ok(out)
}

/// Largest `|R^a_{bcd}|` built from jet Christoffel symbols.
pub fn riemann_numeric(jc: &JetCtx, contra: &[Vec<Jet>]) -> Result<Real> {
    let c = &jc.ev.ctx;
    let gam = christoffel_lower_jets(jc, contra)?;
    let r = contra.len();
    let mut max = c.zero();
    for a in 0..r {
        for b in 0..r {
            for p in 0..r {
                for q in p + 1..r {
                    let mut v = c.sub(&gam[a][q][b].g[p], &gam[a][p][b].g[q]);
                    for e in 0..r {
                        v = c.add(&v, &c.mul(&gam[a][p][e].v, &gam[e][q][b].v));
                        v = c.sub(&v, &c.mul(&gam[a][q][e].v, &gam[e][p][b].v));
                    }
                    max = c.max(&max, &c.abs(&v));
                }
            }
        }
    }
    Ok(max)
}

/// `(Lie_X g)^{ij}` values.
pub fn lie_numeric(jc: &JetCtx, contra: &[Vec<Jet>], x: &[Jet]) -> Vec<Vec<Real>> {
    let c = &jc.ev.ctx;
    let r = contra.len();
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let mut v = c.zero();
                    for k in 0..r {
                        v = c.add(&v, &c.mul(&x[k].v, &contra[i][j].g[k]));
                        v = c.sub(&v, &c.mul(&contra[k][j].v, &x[i].g[k]));
                        v = c.sub(&v, &c.mul(&contra[i][k].v, &x[j].g[k]));
                    }
                    v
                })
                .collect()
        })
        .collect()
}

/// `[X, Y]ⁱ` values.
pub fn bracket_numeric(jc: &JetCtx, x: &[Jet], y: &[Jet]) -> Vec<Real> {
    let c = &jc.ev.ctx;
    (0..x.len())
        .map(|i| {
            let mut v = c.zero();
            for k in 0..x.len() {
                v = c.add(&v, &c.mul(&x[k].v, &y[i].g[k]));
                v = c.sub(&v, &c.mul(&y[k].v, &x[i].g[k]));
            }
            v
        })
        .collect()
}

/// `gⁱʲ∂ⱼτ` as first-order jets from a second-order jet of `τ`.
pub fn gradient_jets(jc: &JetCtx, contra: &[Vec<Jet>], tau: &Jet) -> Result<Vec<Jet>> {
    let r = contra.len();
    let dtau: Vec<Jet> = (0..r).map(|j| jc.partial(tau, j)).collect::<Result<_>>()?;
    Ok((0..r)
        .map(|i| {
            let mut acc = jc.constant(jc.ev.ctx.zero());
            for j in 0..r {
                acc = jc.add(&acc, &jc.mul(&contra[i][j], &dtau[j]));
            }
            acc
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct FdOracle {
    /// `fd[k][i][j]`, central differences of the numerically inverted metric.
    pub fd: Vec<Vec<Vec<Real>>>,
    pub symbolic: Vec<Vec<Vec<Real>>>,
    /// `max |fd − symbolic| / max |symbolic|`
    pub rel_error: Real,
}

fn covariant_at(ev: &Evaluator, g: &ContraMetric, p: &[Real]) -> Result<Vec<Vec<Real>>> {
    let c = &ev.ctx;
    let m: Vec<Vec<Real>> = g
        .entries()
        .iter()
        .map(|row| row.iter().map(|x| ev.eval_rat(x, p)).collect())
        .collect::<Result<_>>()?;
    if m.len() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            got: m.len(),
        });
    }
    let det = c.sub(&c.mul(&m[0][0], &m[1][1]), &c.mul(&m[0][1], &m[1][0]));
    if det.is_zero() {
        return Err(Error::Numeric("singular metric at the point".into()));
    }
    Ok(vec![
        vec![c.div(&m[1][1], &det), c.neg(&c.div(&m[0][1], &det))],
        vec![c.neg(&c.div(&m[1][0], &det)), c.div(&m[0][0], &det)],
    ])
}

/// Central-difference Levi-Civita symbols of the covariant metric at `point`
/// (indexed like the metric's table), compared with the symbolic symbols.
pub fn fd_christoffel_oracle(
    g: &ContraMetric,
    point: &[BigRational],
    step: &BigRational,
    precision_bits: usize,
) -> Result<FdOracle> {
    let ev = Evaluator::new(precision_bits);
    let c = &ev.ctx;
    let r = g.dim();
    let base = ev.point(point);
    let h = c.rational(step);
    let two_h = c.mul(&c.int(2), &h);
    // dg[l][i][j] = ∂_l g_{ij}
    let mut dg = Vec::with_capacity(r);
    for &l in g.coords() {
        let mut plus = base.clone();
        let mut minus = base.clone();
        plus[l] = c.add(&base[l], &h);
        minus[l] = c.sub(&base[l], &h);
        let gp = covariant_at(&ev, g, &plus)?;
        let gm = covariant_at(&ev, g, &minus)?;
        dg.push(
            (0..r)
                .map(|i| (0..r).map(|j| c.div(&c.sub(&gp[i][j], &gm[i][j]), &two_h)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        );
    }
    let contra: Vec<Vec<Real>> = g
        .entries()
        .iter()
        .map(|row| row.iter().map(|x| ev.eval_rat(x, &base)).collect())
        .collect::<Result<_>>()?;
    let half = c.from_rational_parts(1, 2);
    let mut fd = vec![vec![vec![c.zero(); r]; r]; r];
    for (k, fk) in fd.iter_mut().enumerate() {
        for i in 0..r {
            for j in 0..r {
                let mut acc = c.zero();
                for l in 0..r {
                    let first = c.sub(&c.add(&dg[i][l][j], &dg[j][l][i]), &dg[l][i][j]);
                    acc = c.add(&acc, &c.mul(&contra[k][l], &c.mul(&half, &first)));
                }
                fk[i][j] = acc;
            }
        }
    }
    let ch = christoffels(g)?;
    let symbolic: Vec<Vec<Vec<Real>>> = ch
        .lower
        .iter()
        .map(|m| {
            m.iter()
                .map(|row| row.iter().map(|x| ev.eval_rat(x, &base)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut err = c.zero();
    let mut scale = c.zero();
    for k in 0..r {
        for i in 0..r {
            for j in 0..r {
                err = c.max(&err, &c.abs(&c.sub(&fd[k][i][j], &symbolic[k][i][j])));
                scale = c.max(&scale, &c.abs(&symbolic[k][i][j]));
            }
        }
    }
    let rel_error = if scale.is_zero() { err } else { c.div(&err, &scale) };
    Ok(FdOracle { fd, symbolic, rel_error })
}
