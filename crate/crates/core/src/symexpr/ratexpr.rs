use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactnum::QuadExt;
use crate::radconst::RadicalConstant;

use super::genexpr::{GenExpr, MonoImage, Monomial};
use super::vartable::{same_table, VarTable};

/// Upper bound on leading-term reductions spent trying to cancel a
/// denominator factor against the numerator.
const CANCEL_STEPS: usize = 64;

/// Quotient `num / ∏ Pᵢ^{kᵢ}`. Monomial content of the denominator is folded
/// into the (Laurent) numerator, so each stored factor `Pᵢ` has at least two
/// terms and leading term exactly `1` whenever its leading coefficient is
/// invertible.
#[derive(Clone, Debug)]
pub struct RatExpr {
    num: GenExpr,
    den: Vec<(GenExpr, u32)>,
}

struct Normalized {
    coeff: RadicalConstant,
    mono: Monomial,
    factor: Option<GenExpr>,
}

/// Write `p = coeff · mono · factor` with `factor` monic when possible.
fn normalize(p: &GenExpr) -> Normalized {
    let (m, c) = p.leading_term().expect("nonzero");
    let (m, c) = (m.clone(), c.clone());
    if p.len() == 1 {
        return Normalized {
            coeff: c,
            mono: m,
            factor: None,
        };
    }
    match c.inv() {
        Ok(ci) => Normalized {
            factor: Some(p.mul_term(&ci, &m.inv())),
            coeff: c,
            mono: m,
        },
        Err(_) => Normalized {
            factor: Some(p.mul_term(&RadicalConstant::one(), &m.inv())),
            coeff: RadicalConstant::one(),
            mono: m,
        },
    }
}

impl RatExpr {
    pub fn zero(table: &Arc<VarTable>) -> Self {
        RatExpr::from(GenExpr::zero(table))
    }

    pub fn one(table: &Arc<VarTable>) -> Self {
        RatExpr::from(GenExpr::one(table))
    }

    pub fn constant(table: &Arc<VarTable>, c: RadicalConstant) -> Self {
        RatExpr::from(GenExpr::constant(table, c))
    }

    pub fn quad(table: &Arc<VarTable>, q: QuadExt) -> Self {
        RatExpr::from(GenExpr::quad(table, q))
    }

    pub fn var(table: &Arc<VarTable>, name: &str) -> Result<Self> {
        Ok(RatExpr::from(GenExpr::var(table, name)?))
    }

    pub fn new(num: GenExpr, den: GenExpr) -> Result<Self> {
        if !same_table(num.table(), den.table()) {
            return Err(Error::TableMismatch);
        }
        let mut r = RatExpr::from(num);
        r.push_factor(&den, 1)?;
        r.cancel();
        Ok(r)
    }

    pub fn table(&self) -> &Arc<VarTable> {
        self.num.table()
    }

    pub fn numerator(&self) -> &GenExpr {
        &self.num
    }

    pub fn den_factors(&self) -> &[(GenExpr, u32)] {
        &self.den
    }

    pub fn denominator(&self) -> GenExpr {
        let mut d = GenExpr::one(self.table());
        for (p, k) in &self.den {
            d = &d * &p.pow(*k);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_gen(&self) -> Option<&GenExpr> {
        self.den.is_empty().then_some(&self.num)
    }

    /// Divide by `p^k`.
    fn push_factor(&mut self, p: &GenExpr, k: u32) -> Result<()> {
        if p.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if k == 0 {
            return Ok(());
        }
        let nz = normalize(p);
        let ci = nz.coeff.inv()?.pow(&QuadExt::int(k as i64))?;
        let mono = Monomial(
            nz.mono
                .0
                .iter()
                .map(|e| -(e * &QuadExt::int(k as i64)))
                .collect(),
        );
        self.num = self.num.mul_term(&ci, &mono);
        if let Some(f) = nz.factor {
            match self.den.iter_mut().find(|(q, _)| *q == f) {
                Some(slot) => slot.1 += k,
                None => self.den.push((f, k)),
            }
        }
        Ok(())
    }

    /// Remove denominator factors that divide the numerator.
    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let steps = CANCEL_STEPS.max(2 * self.num.len());
        for (p, k) in self.den.iter_mut() {
            while *k > 0 {
                match self.num.div_exact(p, steps) {
                    Some(q) => {
                        self.num = q;
                        *k -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, k)| *k > 0);
    }

    pub fn inv(&self) -> Result<RatExpr> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = RatExpr::from(self.denominator());
        r.push_factor(&self.num, 1)?;
        Ok(r)
    }

    pub fn checked_div(&self, other: &RatExpr) -> Result<RatExpr> {
        if !same_table(self.table(), other.table()) {
            return Err(Error::TableMismatch);
        }
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, c: &RadicalConstant) -> RatExpr {
        if c.is_zero() {
            return RatExpr::zero(self.table());
        }
        RatExpr {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn scale_quad(&self, q: &QuadExt) -> RatExpr {
        self.scale(&RadicalConstant::from_quad(q.clone()))
    }

    pub fn pow_i(&self, k: i64) -> Result<RatExpr> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = RatExpr::one(self.table());
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Quotient-rule derivative with respect to a chart variable.
    pub fn diff(&self, var: usize) -> Result<RatExpr> {
        let dn = self.num.diff(var)?;
        if self.den.is_empty() {
            return Ok(RatExpr::from(dn));
        }
        // d(N/∏Pᵢ^{kᵢ}) = (N'∏Pᵢ − N Σ kᵢPᵢ'∏_{j≠i}Pⱼ) / ∏Pᵢ^{kᵢ+1}
        let t = self.table();
        let mut prod = GenExpr::one(t);
        for (p, _) in &self.den {
            prod = &prod * p;
        }
        let mut sum = GenExpr::zero(t);
        for (i, (p, k)) in self.den.iter().enumerate() {
            let dp = p.diff(var)?;
            if dp.is_zero() {
                continue;
            }
            let mut term = dp.scale_quad(&QuadExt::int(*k as i64));
            for (j, (q, _)) in self.den.iter().enumerate() {
                if j != i {
                    term = &term * q;
                }
            }
            sum = &sum + &term;
        }
        let num = &(&dn * &prod) - &(&self.num * &sum);
        let mut r = RatExpr {
            num,
            den: self.den.iter().map(|(p, k)| (p.clone(), k + 1)).collect(),
        };
        r.cancel();
        Ok(r)
    }

    pub fn diff_name(&self, name: &str) -> Result<RatExpr> {
        self.diff(self.table().require(name)?)
    }

    /// The value when the expression is a constant function.
    pub fn as_constant(&self) -> Option<RadicalConstant> {
        if self.den.is_empty() {
            return self.num.as_constant();
        }
        if self.num.is_zero() {
            return Some(RadicalConstant::zero());
        }
        let d = self.denominator();
        let (dm, dc) = d.leading_term()?;
        let (nm, nc) = self.num.leading_term()?;
        if nm != dm {
            return None;
        }
        let c = nc * &dc.inv().ok()?;
        (d.scale(&c) == self.num).then_some(c)
    }

    pub fn as_quad(&self) -> Option<QuadExt> {
        self.as_constant()?.as_quad()
    }

    /// Exact equality: the difference has zero numerator.
    pub fn equals(&self, other: &RatExpr) -> bool {
        same_table(self.table(), other.table()) && (self - other).is_zero()
    }

    /// Monomial substitution applied to numerator and every factor.
    pub fn subst_monomials(
        &self,
        target: &Arc<VarTable>,
        images: &HashMap<usize, MonoImage>,
    ) -> Result<RatExpr> {
        let mut r = RatExpr::from(self.num.subst_monomials(target, images)?);
        for (p, k) in &self.den {
            r.push_factor(&p.subst_monomials(target, images)?, *k)?;
        }
        r.cancel();
        Ok(r)
    }

    pub fn subst_named(&self, target: &Arc<VarTable>, images: &[(&str, MonoImage)]) -> Result<RatExpr> {
        let map = super::genexpr::named_images(self.table(), images)?;
        self.subst_monomials(target, &map)
    }

    pub fn remap(&self, target: &Arc<VarTable>) -> Result<RatExpr> {
        if same_table(self.table(), target) {
            return Ok(self.clone());
        }
        self.subst_monomials(target, &HashMap::new())
    }

    /// Substitute rational expressions for variables that appear with integer
    /// exponents only. Unmapped variables are carried over by name.
    pub fn compose(&self, target: &Arc<VarTable>, images: &HashMap<usize, RatExpr>) -> Result<RatExpr> {
        let mut cache: HashMap<(usize, i64), RatExpr> = HashMap::new();
        let mut out = compose_gen(&self.num, target, images, &mut cache)?;
        for (p, k) in &self.den {
            let pc = compose_gen(p, target, images, &mut cache)?;
            out = out.checked_div(&pc.pow_i(*k as i64)?)?;
        }
        Ok(out)
    }
}

fn compose_gen(
    g: &GenExpr,
    target: &Arc<VarTable>,
    images: &HashMap<usize, RatExpr>,
    cache: &mut HashMap<(usize, i64), RatExpr>,
) -> Result<RatExpr> {
    let src = g.table();
    let mut out = RatExpr::zero(target);
    for (m, c) in g.terms() {
        let mut rest = m.clone();
        let mut factor = RatExpr::constant(target, c.clone());
        for (i, img) in images {
            let e = &m.0[*i];
            if e.is_zero() {
                continue;
            }
            let k = e.to_i64().ok_or_else(|| Error::IrrationalExponent {
                var: src.name(*i).to_string(),
                exponent: e.to_string(),
            })?;
            let p = match cache.get(&(*i, k)) {
                Some(p) => p.clone(),
                None => {
                    let p = img.pow_i(k)?;
                    cache.insert((*i, k), p.clone());
                    p
                }
            };
            factor = &factor * &p;
            rest.0[*i] = QuadExt::zero();
        }
        if !rest.is_one() {
            let carried = GenExpr::from_terms_unchecked(src, [(rest, RadicalConstant::one())]);
            factor = &factor * &RatExpr::from(carried.remap(target)?);
        }
        out = &out + &factor;
    }
    Ok(out)
}

impl From<GenExpr> for RatExpr {
    fn from(num: GenExpr) -> Self {
        RatExpr { num, den: Vec::new() }
    }
}

impl PartialEq for RatExpr {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

fn merged_den(a: &RatExpr, b: &RatExpr) -> Vec<(GenExpr, u32)> {
    let mut den = a.den.clone();
    for (p, k) in &b.den {
        match den.iter_mut().find(|(q, _)| q == p) {
            Some(slot) => slot.1 = slot.1.max(*k),
            None => den.push((p.clone(), *k)),
        }
    }
    den
}

/// `x.num · ∏ P^{target − own}` over the merged denominator.
fn lift(x: &RatExpr, den: &[(GenExpr, u32)]) -> GenExpr {
    let mut n = x.num.clone();
    for (p, k) in den {
        let own = x.den.iter().find(|(q, _)| q == p).map_or(0, |(_, j)| *j);
        if *k > own {
            n = &n * &p.pow(k - own);
        }
    }
    n
}

impl<'a> Add<&'a RatExpr> for &'a RatExpr {
    type Output = RatExpr;
    fn add(self, o: &RatExpr) -> RatExpr {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let den = merged_den(self, o);
        let num = &lift(self, &den) + &lift(o, &den);
        let mut r = RatExpr { num, den };
        r.cancel();
        r
    }
}

impl<'a> Sub<&'a RatExpr> for &'a RatExpr {
    type Output = RatExpr;
    fn sub(self, o: &RatExpr) -> RatExpr {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatExpr> for &'a RatExpr {
    type Output = RatExpr;
    fn mul(self, o: &RatExpr) -> RatExpr {
        if self.is_zero() || o.is_zero() {
            assert!(same_table(self.table(), o.table()), "expressions over different variable tables");
            return RatExpr::zero(self.table());
        }
        let mut den = self.den.clone();
        for (p, k) in &o.den {
            match den.iter_mut().find(|(q, _)| q == p) {
                Some(slot) => slot.1 += k,
                None => den.push((p.clone(), *k)),
            }
        }
        let mut r = RatExpr {
            num: &self.num * &o.num,
            den,
        };
        if !self.den.is_empty() || !o.den.is_empty() {
            r.cancel();
        }
        r
    }
}

impl Neg for &RatExpr {
    type Output = RatExpr;
    fn neg(self) -> RatExpr {
        RatExpr {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let mut parts: Vec<String> = self
            .den
            .iter()
            .map(|(p, k)| {
                if *k == 1 {
                    format!("({p})")
                } else {
                    format!("({p})^{k}")
                }
            })
            .collect();
        parts.sort();
        write!(f, "({})/({})", self.num, parts.join("*"))
    }
}

/// Ring operations dispatched on `op`.
pub fn rat_arith(x: &RatExpr, y: &RatExpr, op: crate::radconst::RingOp) -> Result<RatExpr> {
    if !same_table(x.table(), y.table()) {
        return Err(Error::TableMismatch);
    }
    Ok(match op {
        crate::radconst::RingOp::Add => x + y,
        crate::radconst::RingOp::Sub => x - y,
        crate::radconst::RingOp::Mul => x * y,
    })
}
