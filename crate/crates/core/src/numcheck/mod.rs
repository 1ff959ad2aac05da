//! High-precision numeric oracle: evaluation at seeded rational sample points,
//! Taylor-jet geometry and a finite-difference Christoffel check.

mod backstop;
mod geometry;
mod jet;

pub use backstop::*;
pub use geometry::{
    christoffel_lower_jets, contra_jets, fd_christoffel_oracle, lie_numeric, riemann_numeric, FdOracle,
};
pub use jet::{Jet, JetCtx};

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::QuadExt;
use crate::radconst::RadicalConstant;
use crate::real::{Real, RealCtx};
use crate::symexpr::{GenExpr, RatExpr, VarTable};

/// Denominator of the rational sampling grid.
pub const GRID: i64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumConfig {
    pub precision_bits: usize,
    pub samples: usize,
    pub seed: u64,
    /// Zero verdicts require `|value| < 10^tolerance_log10`.
    pub tolerance_log10: i64,
}

impl Default for NumConfig {
    fn default() -> Self {
        NumConfig {
            precision_bits: 256,
            samples: 10,
            seed: 0,
            tolerance_log10: -60,
        }
    }
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `(num, den)` endpoint of a sampling interval.
pub type Endpoint = (i64, i64);

/// Closed rational intervals per variable name.
#[derive(Clone, Debug)]
pub struct SampleDomain {
    intervals: Vec<(String, BigRational, BigRational)>,
}

impl SampleDomain {
    pub fn new(intervals: &[(&str, Endpoint, Endpoint)]) -> Result<Self> {
        let intervals = intervals
            .iter()
            .map(|(name, lo, hi)| {
                let (lo, hi) = (rat(lo.0, lo.1), rat(hi.0, hi.1));
                if lo > hi {
                    return Err(Error::Domain(format!("empty interval for {name}")));
                }
                Ok((name.to_string(), lo, hi))
            })
            .collect::<Result<_>>()?;
        Ok(SampleDomain { intervals })
    }

    /// Intervals for every chart, jet and pencil variable used in the
    /// pipeline. Positive variables stay at least 1/4 away from zero, and
    /// `u₂ ≥ 2 > 2u₁^{n/2}` keeps the u-chart off the discriminant.
    pub fn standard() -> Self {
        SampleDomain::new(&[
            ("x1", (1, 2), (3, 4)),
            ("x2", (1, 1), (3, 2)),
            ("u1", (1, 4), (1, 2)),
            ("u2", (2, 1), (3, 1)),
            ("lambda", (1, 4), (2, 1)),
            ("J0", (1, 4), (2, 1)),
            ("J1", (1, 4), (2, 1)),
            ("J2", (1, 4), (2, 1)),
            ("w1", (1, 4), (1, 1)),
            ("t2", (1, 4), (2, 1)),
            ("z1", (1, 4), (1, 1)),
            ("z2", (1, 4), (2, 1)),
        ])
        .expect("standard intervals are nonempty")
    }

    pub fn interval(&self, name: &str) -> Option<(&BigRational, &BigRational)> {
        self.intervals.iter().find(|(n, _, _)| n == name).map(|(_, lo, hi)| (lo, hi))
    }

    pub fn contains(&self, name: &str, v: &BigRational) -> bool {
        self.interval(name).is_some_and(|(lo, hi)| lo <= v && v <= hi)
    }

    /// `samples` points on the grid `lo + (hi−lo)·k/2¹⁶`, indexed like `table`.
    pub fn sample_points(&self, table: &VarTable, samples: usize, seed: u64) -> Result<Vec<Vec<BigRational>>> {
        let mut ivs = Vec::with_capacity(table.len());
        for v in table.vars() {
            let (lo, hi) = self
                .interval(&v.name)
                .ok_or_else(|| Error::Domain(format!("no interval for {}", v.name)))?;
            if v.positive && lo <= &rat(0, 1) {
                return Err(Error::Domain(format!("{} must be sampled from positive values", v.name)));
            }
            ivs.push((lo.clone(), hi.clone()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((0..samples)
            .map(|_| {
                ivs.iter()
                    .map(|(lo, hi)| {
                        let k = rng.gen_range(0..=GRID);
                        lo + (hi - lo) * rat(k, GRID)
                    })
                    .collect()
            })
            .collect())
    }
}

/// Evaluates expressions at working precision, caching coefficient values.
pub struct Evaluator {
    pub ctx: RealCtx,
    consts: RefCell<HashMap<RadicalConstant, Real>>,
}

impl Evaluator {
    pub fn new(precision_bits: usize) -> Self {
        Evaluator {
            ctx: RealCtx::new(precision_bits),
            consts: RefCell::new(HashMap::new()),
        }
    }

    pub fn constant(&self, c: &RadicalConstant) -> Real {
        if let Some(v) = self.consts.borrow().get(c) {
            return v.clone();
        }
        let v = c.to_real(&self.ctx);
        self.consts.borrow_mut().insert(c.clone(), v.clone());
        v
    }

    pub fn quad(&self, q: &QuadExt) -> Real {
        q.to_real(&self.ctx)
    }

    pub fn point(&self, p: &[BigRational]) -> Vec<Real> {
        p.iter().map(|r| self.ctx.rational(r)).collect()
    }

    /// `x^e`; non-integer exponents need `x > 0`.
    pub fn pow(&self, x: &Real, e: &QuadExt) -> Result<Real> {
        if let Some(k) = e.to_i64() {
            return Ok(self.ctx.powi(x, k));
        }
        if !self.ctx.is_positive(x) {
            return Err(Error::Domain(format!("non-positive base for exponent {e}")));
        }
        Ok(self.ctx.powr(x, &self.quad(e)))
    }

    pub fn eval_gen(&self, x: &GenExpr, point: &[Real]) -> Result<Real> {
        let c = &self.ctx;
        let mut acc = c.zero();
        for (m, coeff) in x.terms() {
            let mut t = self.constant(coeff);
            for (i, e) in m.0.iter().enumerate() {
                if !e.is_zero() {
                    t = c.mul(&t, &self.pow(&point[i], e)?);
                }
            }
            acc = c.add(&acc, &t);
        }
        Ok(acc)
    }

    pub fn eval_rat(&self, x: &RatExpr, point: &[Real]) -> Result<Real> {
        let c = &self.ctx;
        let mut v = self.eval_gen(x.numerator(), point)?;
        for (f, k) in x.den_factors() {
            let d = c.powi(&self.eval_gen(f, point)?, *k as i64);
            if d.is_zero() {
                return Err(Error::Domain("denominator vanishes at sample".into()));
            }
            v = c.div(&v, &d);
        }
        Ok(v)
    }

    pub fn tolerance(&self, cfg: &NumConfig) -> Real {
        self.ctx.pow10(cfg.tolerance_log10)
    }
}

/// `eval(expr, point)` at `precision_bits`.
pub fn eval(x: &RatExpr, point: &[BigRational], precision_bits: usize) -> Result<Real> {
    let ev = Evaluator::new(precision_bits);
    let p = ev.point(point);
    ev.eval_rat(x, &p)
}

/// Outcome of one numeric backstop.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericCheck {
    pub label: String,
    pub samples: usize,
    /// Largest residual magnitude, rendered like `1.234e-80`.
    pub max_residual: String,
    pub passed: bool,
}

/// Running maximum of residual magnitudes across samples.
pub struct Residuals<'a> {
    ev: &'a Evaluator,
    max: Real,
    samples: usize,
}

impl<'a> Residuals<'a> {
    pub fn new(ev: &'a Evaluator) -> Self {
        Residuals {
            ev,
            max: ev.ctx.zero(),
            samples: 0,
        }
    }

    pub fn push(&mut self, r: &Real) {
        self.max = self.ev.ctx.max(&self.max, &self.ev.ctx.abs(r));
    }

    pub fn push_diff(&mut self, a: &Real, b: &Real) {
        let d = self.ev.ctx.sub(a, b);
        self.push(&d);
    }

    pub fn next_sample(&mut self) {
        self.samples += 1;
    }

    pub fn max(&self) -> &Real {
        &self.max
    }

    /// Passes iff the largest residual is below tolerance.
    pub fn zero_verdict(&self, label: &str, cfg: &NumConfig) -> NumericCheck {
        NumericCheck {
            label: label.to_string(),
            samples: self.samples,
            max_residual: self.ev.ctx.sci(&self.max),
            passed: self.ev.ctx.lt(&self.max, &self.ev.tolerance(cfg)),
        }
    }
}

/// Passes iff `|expr| < tolerance` at every seeded sample.
pub fn zero_check_random(x: &RatExpr, domain: &SampleDomain, cfg: &NumConfig) -> Result<NumericCheck> {
    let ev = Evaluator::new(cfg.precision_bits);
    let mut res = Residuals::new(&ev);
    for p in domain.sample_points(x.table(), cfg.samples.max(1), cfg.seed)? {
        res.push(&ev.eval_rat(x, &ev.point(&p))?);
        res.next_sample();
    }
    Ok(res.zero_verdict("zero check", cfg))
}

/// Both matrices evaluated separately and compared entrywise.
pub fn matrices_agree(
    label: &str,
    a: &[Vec<RatExpr>],
    b: &[Vec<RatExpr>],
    domain: &SampleDomain,
    cfg: &NumConfig,
) -> Result<NumericCheck> {
    let t = a[0][0].table();
    let ev = Evaluator::new(cfg.precision_bits);
    let mut res = Residuals::new(&ev);
    for p in domain.sample_points(t, cfg.samples, cfg.seed)? {
        let p = ev.point(&p);
        for (ra, rb) in a.iter().zip(b) {
            for (x, y) in ra.iter().zip(rb) {
                res.push_diff(&ev.eval_rat(x, &p)?, &ev.eval_rat(y, &p)?);
            }
        }
        res.next_sample();
    }
    Ok(res.zero_verdict(label, cfg))
}

/// `a` and `b` evaluated separately and compared.
pub fn exprs_agree(label: &str, a: &GenExpr, b: &GenExpr, domain: &SampleDomain, cfg: &NumConfig) -> Result<NumericCheck> {
    let ev = Evaluator::new(cfg.precision_bits);
    let mut res = Residuals::new(&ev);
    for p in domain.sample_points(a.table(), cfg.samples, cfg.seed)? {
        let p = ev.point(&p);
        res.push_diff(&ev.eval_gen(a, &p)?, &ev.eval_gen(b, &p)?);
        res.next_sample();
    }
    Ok(res.zero_verdict(label, cfg))
}

#[cfg(test)]
mod tests;
