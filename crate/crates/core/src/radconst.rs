//! Coefficient ring for constants such as `2^{1-√3 n} 3^{(√3 n+1)/2}`.
//!
//! A [`RadicalUnit`] is a finite product `∏ pᵢ^{eᵢ}` over primes with
//! exponents in Q(√3); a [`RadicalConstant`] is a Q(√3)-linear combination of
//! units. Distinct units are treated as linearly independent, so a constant
//! is zero exactly when its normalized term list is empty.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{QuadExt, Rational};
use crate::real::{Real, RealCtx};

const TRIAL_DIVISION_LIMIT: u64 = 1 << 20;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct RadicalUnit {
    exps: BTreeMap<u64, QuadExt>,
}

impl RadicalUnit {
    pub fn identity() -> Self {
        RadicalUnit::default()
    }

    pub fn is_identity(&self) -> bool {
        self.exps.is_empty()
    }

    /// `p^e`; `p` must be prime (not checked beyond being > 1).
    pub fn prime_power(p: u64, e: QuadExt) -> Self {
        assert!(p > 1, "radical base must be a prime");
        let mut exps = BTreeMap::new();
        if !e.is_zero() {
            exps.insert(p, e);
        }
        RadicalUnit { exps }
    }

    pub fn exponents(&self) -> impl Iterator<Item = (u64, &QuadExt)> {
        self.exps.iter().map(|(p, e)| (*p, e))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut exps = self.exps.clone();
        for (p, e) in &other.exps {
            let sum = match exps.get(p) {
                Some(cur) => cur + e,
                None => e.clone(),
            };
            if sum.is_zero() {
                exps.remove(p);
            } else {
                exps.insert(*p, sum);
            }
        }
        RadicalUnit { exps }
    }

    pub fn pow(&self, q: &QuadExt) -> Self {
        if q.is_zero() {
            return RadicalUnit::identity();
        }
        RadicalUnit {
            exps: self.exps.iter().map(|(p, e)| (*p, e * q)).collect(),
        }
    }

    pub fn inv(&self) -> Self {
        self.pow(&QuadExt::int(-1))
    }

    /// `r^q` for a positive rational `r`, by prime factorization.
    pub fn from_rational_pow(r: &Rational, q: &QuadExt) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::NonPositiveBase {
                base: r.to_string(),
                exponent: q.to_string(),
            });
        }
        let mut unit = RadicalUnit::identity();
        for (p, k) in factorize(r.numer())? {
            unit = unit.mul(&RadicalUnit::prime_power(p, q * &QuadExt::int(k as i64)));
        }
        for (p, k) in factorize(r.denom())? {
            unit = unit.mul(&RadicalUnit::prime_power(p, q * &QuadExt::int(-(k as i64))));
        }
        Ok(unit)
    }

    /// Split off the part of the unit that lies in Q(√3): integer parts of
    /// exponents and, for the prime 3, a half-integer part. Returns the
    /// extracted factor and the reduced unit, whose exponents have rational
    /// parts in [0, 1) (and never exactly 1/2 on the prime 3).
    pub fn reduce(&self) -> (QuadExt, RadicalUnit) {
        let mut factor = QuadExt::one();
        let mut exps = BTreeMap::new();
        for (p, e) in &self.exps {
            let a = e.rational_part();
            let fl = a.floor();
            let mut frac = a - &fl;
            let half = Rational::new(1.into(), 2.into());
            if *p == 3 && frac >= half {
                factor = &factor * &QuadExt::sqrt3();
                frac -= half;
            }
            if !fl.is_zero() {
                let k = fl.to_integer();
                let pk = num_traits::pow::pow(BigInt::from(*p), k.magnitude().to_usize().unwrap_or(0));
                let r = if k.is_negative() {
                    Rational::new(BigInt::one(), pk)
                } else {
                    Rational::from_integer(pk)
                };
                factor = &factor * &QuadExt::from_rational(r);
            }
            let rest = QuadExt::new(frac, e.sqrt3_part().clone());
            if !rest.is_zero() {
                exps.insert(*p, rest);
            }
        }
        (factor, RadicalUnit { exps })
    }

    fn is_reduced(&self) -> bool {
        let half = Rational::new(1.into(), 2.into());
        self.exps.iter().all(|(p, e)| {
            let a = e.rational_part();
            !a.is_negative() && a < &Rational::one() && !(*p == 3 && *a >= half)
        })
    }

    pub fn to_real(&self, ctx: &RealCtx) -> Real {
        let mut log = ctx.zero();
        for (p, e) in &self.exps {
            let lp = ctx.ln(&ctx.int(*p as i64));
            log = ctx.add(&log, &ctx.mul(&e.to_real(ctx), &lp));
        }
        if self.exps.is_empty() {
            ctx.int(1)
        } else {
            ctx.exp(&log)
        }
    }
}

/// Prime factorization of a positive integer by trial division.
fn factorize(v: &BigInt) -> Result<Vec<(u64, u32)>> {
    let mut rest = v.clone();
    let mut out = Vec::new();
    let mut p: u64 = 2;
    while rest > BigInt::one() {
        if p > TRIAL_DIVISION_LIMIT {
            return Err(Error::Unfactorable(v.to_string()));
        }
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            let last = rest
                .to_u64()
                .ok_or_else(|| Error::Unfactorable(v.to_string()))?;
            out.push((last, 1));
            break;
        }
        let mut k = 0;
        while rest.is_multiple_of(&bp) {
            rest /= &bp;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    Ok(out)
}

impl fmt::Display for RadicalUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exps
            .iter()
            .map(|(p, e)| format!("{p}^({e})"))
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct RadicalConstant {
    terms: BTreeMap<RadicalUnit, QuadExt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

impl RadicalConstant {
    pub fn zero() -> Self {
        RadicalConstant::default()
    }

    pub fn one() -> Self {
        RadicalConstant::from_quad(QuadExt::one())
    }

    pub fn int(v: i64) -> Self {
        RadicalConstant::from_quad(QuadExt::int(v))
    }

    pub fn from_quad(q: QuadExt) -> Self {
        RadicalConstant::term(q, RadicalUnit::identity())
    }

    pub fn from_unit(u: RadicalUnit) -> Self {
        RadicalConstant::term(QuadExt::one(), u)
    }

    pub fn term(coeff: QuadExt, unit: RadicalUnit) -> Self {
        let mut out = RadicalConstant::default();
        out.insert(unit, coeff);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_quad().is_some_and(|q| q.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RadicalUnit, &QuadExt)> {
        self.terms.iter()
    }

    /// The plain Q(√3) value when no non-trivial unit occurs.
    pub fn as_quad(&self) -> Option<QuadExt> {
        match self.terms.len() {
            0 => Some(QuadExt::zero()),
            1 => self.terms.get(&RadicalUnit::identity()).cloned(),
            _ => None,
        }
    }

    pub fn single_term(&self) -> Option<(&RadicalUnit, &QuadExt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn insert(&mut self, unit: RadicalUnit, coeff: QuadExt) {
        if coeff.is_zero() {
            return;
        }
        let (unit, coeff) = if unit.is_reduced() {
            (unit, coeff)
        } else {
            let (f, u) = unit.reduce();
            (u, &coeff * &f)
        };
        match self.terms.get_mut(&unit) {
            Some(c) => {
                *c += &coeff;
                if c.is_zero() {
                    self.terms.remove(&unit);
                }
            }
            None => {
                self.terms.insert(unit, coeff);
            }
        }
    }

    pub fn scale(&self, q: &QuadExt) -> Self {
        if q.is_zero() {
            return RadicalConstant::zero();
        }
        RadicalConstant {
            terms: self.terms.iter().map(|(u, c)| (u.clone(), c * q)).collect(),
        }
    }

    /// Sign of a single-term constant; units are always positive reals.
    pub fn single_sign(&self) -> Option<i8> {
        if self.is_zero() {
            return Some(0);
        }
        self.single_term().map(|(_, c)| c.sign())
    }

    pub fn inv(&self) -> Result<Self> {
        let (u, c) = self
            .single_term()
            .ok_or_else(|| Error::NotSingleTerm(self.to_string()))?;
        Ok(RadicalConstant::term(c.inv()?, u.inv()))
    }

    pub fn div_unit(&self, u: &RadicalUnit) -> Self {
        let ui = u.inv();
        let mut out = RadicalConstant::zero();
        for (v, c) in &self.terms {
            out.insert(v.mul(&ui), c.clone());
        }
        out
    }

    /// `self^q`. Integer exponents work for any single-term constant (and for
    /// non-negative integers, any constant); irrational exponents need a
    /// positive single-term constant whose Q(√3) coefficient is a positive
    /// rational or a positive rational multiple of √3.
    pub fn pow(&self, q: &QuadExt) -> Result<Self> {
        if let Some(k) = q.to_i64() {
            if k >= 0 {
                let mut acc = RadicalConstant::one();
                for _ in 0..k {
                    acc = &acc * self;
                }
                return Ok(acc);
            }
            let inv = self.inv()?;
            return inv.pow(&QuadExt::int(-k));
        }
        let non_positive = || Error::NonPositiveBase {
            base: self.to_string(),
            exponent: q.to_string(),
        };
        let (u, c) = self.single_term().ok_or_else(non_positive)?;
        if c.sign() <= 0 {
            return Err(non_positive());
        }
        let unit = if c.is_rational() {
            RadicalUnit::from_rational_pow(c.rational_part(), q)?
        } else if c.rational_part().is_zero() {
            // b√3 = b · 3^{1/2}
            RadicalUnit::from_rational_pow(c.sqrt3_part(), q)?
                .mul(&RadicalUnit::prime_power(3, q * &QuadExt::ratio(1, 2)))
        } else {
            return Err(non_positive());
        };
        Ok(RadicalConstant::from_unit(unit.mul(&u.pow(q))))
    }

    pub fn to_real(&self, ctx: &RealCtx) -> Real {
        let mut acc = ctx.zero();
        for (u, c) in &self.terms {
            let v = if u.is_identity() {
                c.to_real(ctx)
            } else {
                ctx.mul(&c.to_real(ctx), &u.to_real(ctx))
            };
            acc = ctx.add(&acc, &v);
        }
        acc
    }
}

/// Ring arithmetic dispatched on `op`.
pub fn const_arith(x: &RadicalConstant, y: &RadicalConstant, op: RingOp) -> RadicalConstant {
    match op {
        RingOp::Add => x + y,
        RingOp::Sub => x - y,
        RingOp::Mul => x * y,
    }
}

pub fn unit_pow(u: &RadicalUnit, q: &QuadExt) -> RadicalUnit {
    u.pow(q)
}

pub fn const_div_unit(x: &RadicalConstant, u: &RadicalUnit) -> RadicalConstant {
    x.div_unit(u)
}

pub fn const_is_zero(x: &RadicalConstant) -> bool {
    x.is_zero()
}

impl<'a> Add<&'a RadicalConstant> for &'a RadicalConstant {
    type Output = RadicalConstant;
    fn add(self, o: &RadicalConstant) -> RadicalConstant {
        let mut out = self.clone();
        for (u, c) in &o.terms {
            out.insert(u.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a RadicalConstant> for &'a RadicalConstant {
    type Output = RadicalConstant;
    fn sub(self, o: &RadicalConstant) -> RadicalConstant {
        let mut out = self.clone();
        for (u, c) in &o.terms {
            out.insert(u.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a RadicalConstant> for &'a RadicalConstant {
    type Output = RadicalConstant;
    fn mul(self, o: &RadicalConstant) -> RadicalConstant {
        let mut out = RadicalConstant::zero();
        for (u1, c1) in &self.terms {
            for (u2, c2) in &o.terms {
                let u = if u1.is_identity() {
                    u2.clone()
                } else if u2.is_identity() {
                    u1.clone()
                } else {
                    u1.mul(u2)
                };
                out.insert(u, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &RadicalConstant {
    type Output = RadicalConstant;
    fn neg(self) -> RadicalConstant {
        self.scale(&QuadExt::int(-1))
    }
}

impl fmt::Display for RadicalConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(u, c)| {
                if u.is_identity() {
                    c.to_string()
                } else if c.is_one() {
                    format!("{u}")
                } else {
                    format!("{c}*{u}")
                }
            })
            .collect();
        if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "[{}]", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn q(p: i64, qd: i64, r: i64, s: i64) -> QuadExt {
        QuadExt::from_parts(p, qd, r, s)
    }

    fn pp(p: u64, e: QuadExt) -> RadicalConstant {
        RadicalConstant::from_unit(RadicalUnit::prime_power(p, e))
    }

    #[test]
    fn exponents_add_under_multiplication() {
        let n = 3;
        let a = pp(2, q(1, 1, -n, 1));
        let b = pp(2, q(0, 1, n, 1));
        assert_eq!(&a * &b, RadicalConstant::int(2));
    }

    #[test]
    fn opposite_terms_cancel() {
        let u = pp(5, q(0, 1, 1, 1));
        let z = &u - &u;
        assert!(const_is_zero(&z));
    }

    #[test]
    fn coefficient_times_reciprocal_is_one() {
        // 2^{-2√3} 3^{(2√3+1)/2} · 2^{2√3} 3^{-(2√3+1)/2}
        let a = &pp(2, q(0, 1, -2, 1)) * &pp(3, q(1, 2, 1, 1));
        let b = &pp(2, q(0, 1, 2, 1)) * &pp(3, q(-1, 2, -1, 1));
        assert_eq!(&a * &b, RadicalConstant::one());
        assert_eq!(a.inv().unwrap(), b);
    }

    #[test]
    fn rational_power_factorizes() {
        let u = RadicalUnit::from_rational_pow(&rat(2, 3), &QuadExt::sqrt3()).unwrap();
        let expect = RadicalUnit::prime_power(2, QuadExt::sqrt3())
            .mul(&RadicalUnit::prime_power(3, -QuadExt::sqrt3()));
        assert_eq!(u, expect);
    }

    #[test]
    fn identity_powers_to_identity() {
        assert!(unit_pow(&RadicalUnit::identity(), &q(3, 7, 2, 5)).is_identity());
    }

    #[test]
    fn substitution_constant_power() {
        // (4/√3)^{1+√3} = 2^{2+2√3} 3^{-(1+√3)/2}
        let c = RadicalConstant::from_quad(q(0, 1, 4, 3));
        let got = c.pow(&q(1, 1, 1, 1)).unwrap();
        let expect = RadicalConstant::from_unit(
            RadicalUnit::prime_power(2, q(2, 1, 2, 1))
                .mul(&RadicalUnit::prime_power(3, q(-1, 2, -1, 2))),
        );
        assert_eq!(got, expect);
    }

    #[test]
    fn units_in_the_quadratic_field_fold_into_the_coefficient() {
        let c = pp(3, q(3, 2, 0, 1));
        assert_eq!(c, RadicalConstant::from_quad(q(0, 1, 3, 1)));
        let d = pp(2, q(-1, 1, 1, 1));
        let (f, u) = RadicalUnit::prime_power(2, q(-1, 1, 1, 1)).reduce();
        assert_eq!(f, QuadExt::ratio(1, 2));
        assert_eq!(d, RadicalConstant::term(f, u));
    }

    #[test]
    fn negative_base_irrational_power_is_rejected() {
        let c = RadicalConstant::int(-2);
        assert!(matches!(
            c.pow(&QuadExt::sqrt3()),
            Err(Error::NonPositiveBase { .. })
        ));
        assert_eq!(c.pow(&QuadExt::int(3)).unwrap(), RadicalConstant::int(-8));
    }

    #[test]
    fn distinct_units_are_independent() {
        let a = pp(2, QuadExt::sqrt3());
        let b = pp(3, QuadExt::sqrt3());
        assert!(!const_is_zero(&(&a - &b)));
    }

    #[test]
    fn division_by_unit() {
        let u = RadicalUnit::prime_power(7, q(1, 2, 0, 1));
        let x = &RadicalConstant::from_unit(u.clone()) + &RadicalConstant::int(3);
        let y = const_div_unit(&x, &u);
        assert_eq!(
            y,
            &RadicalConstant::one() + &RadicalConstant::term(QuadExt::int(3), u.inv())
        );
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(&BigInt::from(360)).unwrap(), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(&BigInt::from(97)).unwrap(), vec![(97, 1)]);
        assert!(factorize(&BigInt::from(1)).unwrap().is_empty());
    }

    #[test]
    fn numeric_value_of_unit() {
        let ctx = RealCtx::new(128);
        let v = pp(2, q(1, 1, 1, 1)).to_real(&ctx);
        let expect = 2f64.powf(1.0 + 3f64.sqrt());
        assert!((ctx.to_f64(&v) - expect).abs() < 1e-12);
    }
}
