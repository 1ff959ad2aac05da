//! Second-order multivariate Taylor jets over high-precision reals.

use crate::error::{Error, Result};
use crate::exactnum::QuadExt;
use crate::real::Real;
use crate::symexpr::{GenExpr, RatExpr, VarKind, VarTable};

use super::Evaluator;

/// Value, gradient and (when tracked) Hessian at a point.
#[derive(Clone, Debug)]
pub struct Jet {
    pub v: Real,
    pub g: Vec<Real>,
    pub h: Option<Vec<Vec<Real>>>,
}

/// Jet arithmetic in `dim` coordinates.
pub struct JetCtx<'a> {
    pub ev: &'a Evaluator,
    pub dim: usize,
}

impl<'a> JetCtx<'a> {
    pub fn new(ev: &'a Evaluator, dim: usize) -> Self {
        JetCtx { ev, dim }
    }

    fn zeros(&self) -> Vec<Real> {
        vec![self.ev.ctx.zero(); self.dim]
    }

    fn zeros2(&self) -> Vec<Vec<Real>> {
        vec![self.zeros(); self.dim]
    }

    pub fn constant(&self, v: Real) -> Jet {
        Jet {
            v,
            g: self.zeros(),
            h: Some(self.zeros2()),
        }
    }

    pub fn coordinate(&self, i: usize, v: Real) -> Jet {
        let mut g = self.zeros();
        g[i] = self.ev.ctx.int(1);
        Jet {
            v,
            g,
            h: Some(self.zeros2()),
        }
    }

    /// A function of coordinate `i` alone with derivatives `f`, `f′`, `f″`.
    pub fn along(&self, i: usize, f: [Real; 3]) -> Jet {
        let [f0, f1, f2] = f;
        let mut g = self.zeros();
        g[i] = f1;
        let mut h = self.zeros2();
        h[i][i] = f2;
        Jet { v: f0, g, h: Some(h) }
    }

    /// `∂ᵢx`, one order lower.
    pub fn partial(&self, x: &Jet, i: usize) -> Result<Jet> {
        let h = x.h.as_ref().ok_or(Error::Numeric("second derivative not tracked".into()))?;
        Ok(Jet {
            v: x.g[i].clone(),
            g: h[i].clone(),
            h: None,
        })
    }

    pub fn add(&self, a: &Jet, b: &Jet) -> Jet {
        let c = &self.ev.ctx;
        Jet {
            v: c.add(&a.v, &b.v),
            g: a.g.iter().zip(&b.g).map(|(x, y)| c.add(x, y)).collect(),
            h: match (&a.h, &b.h) {
                (Some(p), Some(q)) => Some(
                    p.iter()
                        .zip(q)
                        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| c.add(x, y)).collect())
                        .collect(),
                ),
                _ => None,
            },
        }
    }

    pub fn scale(&self, a: &Jet, s: &Real) -> Jet {
        let c = &self.ev.ctx;
        Jet {
            v: c.mul(&a.v, s),
            g: a.g.iter().map(|x| c.mul(x, s)).collect(),
            h: a.h.as_ref().map(|h| h.iter().map(|r| r.iter().map(|x| c.mul(x, s)).collect()).collect()),
        }
    }

    pub fn neg(&self, a: &Jet) -> Jet {
        self.scale(a, &self.ev.ctx.int(-1))
    }

    pub fn sub(&self, a: &Jet, b: &Jet) -> Jet {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Jet, b: &Jet) -> Jet {
        let c = &self.ev.ctx;
        let g = (0..self.dim)
            .map(|i| c.add(&c.mul(&a.v, &b.g[i]), &c.mul(&b.v, &a.g[i])))
            .collect();
        let h = match (&a.h, &b.h) {
            (Some(ah), Some(bh)) => Some(
                (0..self.dim)
                    .map(|i| {
                        (0..self.dim)
                            .map(|j| {
                                let mut s = c.add(&c.mul(&a.v, &bh[i][j]), &c.mul(&b.v, &ah[i][j]));
                                s = c.add(&s, &c.mul(&a.g[i], &b.g[j]));
                                c.add(&s, &c.mul(&b.g[i], &a.g[j]))
                            })
                            .collect()
                    })
                    .collect(),
            ),
            _ => None,
        };
        Jet { v: c.mul(&a.v, &b.v), g, h }
    }

    /// `f∘x` for a scalar function with `f(x.v), f′(x.v), f″(x.v)`.
    pub fn compose(&self, x: &Jet, f: [Real; 3]) -> Jet {
        let c = &self.ev.ctx;
        let [f0, f1, f2] = f;
        let g = x.g.iter().map(|gi| c.mul(&f1, gi)).collect();
        let h = x.h.as_ref().map(|xh| {
            (0..self.dim)
                .map(|i| {
                    (0..self.dim)
                        .map(|j| c.add(&c.mul(&f2, &c.mul(&x.g[i], &x.g[j])), &c.mul(&f1, &xh[i][j])))
                        .collect()
                })
                .collect()
        });
        Jet { v: f0, g, h }
    }

    pub fn inv(&self, x: &Jet) -> Result<Jet> {
        let c = &self.ev.ctx;
        if x.v.is_zero() {
            return Err(Error::Numeric("division by a vanishing jet".into()));
        }
        let r = c.div(&c.int(1), &x.v);
        let r2 = c.mul(&r, &r);
        let f1 = c.neg(&r2);
        let f2 = c.mul(&c.int(2), &c.mul(&r2, &r));
        Ok(self.compose(x, [r, f1, f2]))
    }

    pub fn div(&self, a: &Jet, b: &Jet) -> Result<Jet> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `x^e`
    pub fn pow(&self, x: &Jet, e: &QuadExt) -> Result<Jet> {
        let c = &self.ev.ctx;
        let f = if let Some(k) = e.to_i64() {
            [
                c.powi(&x.v, k),
                c.mul(&c.int(k), &c.powi(&x.v, k - 1)),
                c.mul(&c.int(k * (k - 1)), &c.powi(&x.v, k - 2)),
            ]
        } else {
            let er = self.ev.quad(e);
            let p0 = self.ev.pow(&x.v, e)?;
            let p1 = c.div(&p0, &x.v);
            let p2 = c.div(&p1, &x.v);
            let e1 = c.sub(&er, &c.int(1));
            [p0.clone(), c.mul(&er, &p1), c.mul(&c.mul(&er, &e1), &p2)]
        };
        Ok(self.compose(x, f))
    }

    pub fn eval_gen(&self, x: &GenExpr, bindings: &[Jet]) -> Result<Jet> {
        let mut acc = self.constant(self.ev.ctx.zero());
        for (m, coeff) in x.terms() {
            let mut t = self.constant(self.ev.constant(coeff));
            for (i, e) in m.0.iter().enumerate() {
                if !e.is_zero() {
                    t = self.mul(&t, &self.pow(&bindings[i], e)?);
                }
            }
            acc = self.add(&acc, &t);
        }
        Ok(acc)
    }

    pub fn eval_rat(&self, x: &RatExpr, bindings: &[Jet]) -> Result<Jet> {
        let mut v = self.eval_gen(x.numerator(), bindings)?;
        for (f, k) in x.den_factors() {
            let d = self.pow(&self.eval_gen(f, bindings)?, &QuadExt::int(*k as i64))?;
            v = self.div(&v, &d)?;
        }
        Ok(v)
    }

    /// Bindings for a table: chart variables become coordinates (in chart
    /// order), pencil variables constants, and jet variables `Jₖ` the
    /// derivatives `f⁽ᵏ⁾(u)` of `f = u^p`.
    pub fn bindings(&self, table: &VarTable, vals: &[Real], f_power: Option<&QuadExt>) -> Result<Vec<Jet>> {
        let charts = table.chart_indices();
        table
            .vars()
            .iter()
            .enumerate()
            .map(|(i, var)| match &var.kind {
                VarKind::Chart => {
                    let pos = charts.iter().position(|&k| k == i).expect("chart index");
                    Ok(self.coordinate(pos, vals[i].clone()))
                }
                VarKind::Pencil => Ok(self.constant(vals[i].clone())),
                VarKind::Jet { base, order } => {
                    let p = f_power.ok_or_else(|| Error::Numeric(format!("no function bound to {}", var.name)))?;
                    let pos = charts.iter().position(|k| k == base).expect("jet base is a chart variable");
                    let u = &vals[*base];
                    let derivs: Vec<Real> = (0..3)
                        .map(|j| power_derivative(self.ev, u, p, *order as i64 + j))
                        .collect::<Result<_>>()?;
                    Ok(self.along(pos, [derivs[0].clone(), derivs[1].clone(), derivs[2].clone()]))
                }
            })
            .collect()
    }
}

/// `d^k/du^k u^p = p(p−1)…(p−k+1) u^{p−k}`.
pub fn power_derivative(ev: &Evaluator, u: &Real, p: &QuadExt, k: i64) -> Result<Real> {
    let c = &ev.ctx;
    let mut coeff = c.int(1);
    for j in 0..k {
        coeff = c.mul(&coeff, &ev.quad(&(p - &QuadExt::int(j))));
    }
    Ok(c.mul(&coeff, &ev.pow(u, &(p - &QuadExt::int(k)))?))
}
