//! Exact scalars: reduced big rationals and the real quadratic field Q(√3).
//!
//! [`QuadExt`] is the ground field for every exponent and for most
//! coefficients in the crate. Its total order is the order of the real
//! embedding `a + b√3 ↦ ℝ`, decided with integer arithmetic only.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::real::{Real, RealCtx};

/// Arbitrary precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// An element `a + b·√3` of Q(√3).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational) -> Self {
        QuadExt { a, b }
    }

    pub fn zero() -> Self {
        QuadExt::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        QuadExt::int(1)
    }

    pub fn int(v: i64) -> Self {
        QuadExt::new(rat_int(v), Rational::zero())
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        QuadExt::new(rat(num, den), Rational::zero())
    }

    pub fn from_rational(a: Rational) -> Self {
        QuadExt::new(a, Rational::zero())
    }

    /// `√3` itself.
    pub fn sqrt3() -> Self {
        QuadExt::new(Rational::zero(), Rational::one())
    }

    /// Shorthand for `(p/q) + (r/s)·√3` with small integer parts.
    pub fn from_parts(p: i64, q: i64, r: i64, s: i64) -> Self {
        QuadExt::new(rat(p, q), rat(r, s))
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn sqrt3_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.b.is_zero() && self.a.is_integer()
    }

    /// The integer value, when the element is a rational integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.a.to_integer().to_i64()
        } else {
            None
        }
    }

    pub fn conj(&self) -> Self {
        QuadExt::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a² − 3b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(3.into()) * &self.b * &self.b
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let nrm = self.norm();
        Ok(QuadExt::new(&self.a / &nrm, -(&self.b / &nrm)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.b.is_zero() {
            if other.a.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(QuadExt::new(&self.a / &other.a, &self.b / &other.a));
        }
        Ok(self * &other.inv()?)
    }

    pub fn pow_i64(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = QuadExt::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Sign under the real embedding; exact.
    pub fn sign(&self) -> i8 {
        let sa = rsign(&self.a);
        let sb = rsign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with 3b²
        let s = rsign(&self.norm());
        sa * s
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn to_real(&self, ctx: &RealCtx) -> Real {
        let a = ctx.rational(&self.a);
        if self.b.is_zero() {
            return a;
        }
        let b = ctx.rational(&self.b);
        ctx.add(&a, &ctx.mul(&b, &ctx.sqrt3()))
    }

    /// Low precision approximation, for diagnostics only.
    pub fn approx_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * 3f64.sqrt()
    }

    /// `1` if the element is `1`, `-1` if it is `-1`.
    pub fn unit_sign(&self) -> Option<i8> {
        if !self.b.is_zero() {
            return None;
        }
        if self.a.is_one() {
            Some(1)
        } else if (-self.a.clone()).is_one() {
            Some(-1)
        } else {
            None
        }
    }
}

fn rsign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Exact field arithmetic dispatched on `op`.
pub fn quad_arith(x: &QuadExt, y: &QuadExt, op: ArithOp) -> Result<QuadExt> {
    Ok(match op {
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
        ArithOp::Mul => x * y,
        ArithOp::Div => x.checked_div(y)?,
    })
}

pub fn quad_sign(x: &QuadExt) -> i8 {
    x.sign()
}

/// Real value of `x` rounded at `precision_bits` bits.
pub fn quad_to_real(x: &QuadExt, precision_bits: usize) -> Real {
    let ctx = RealCtx::new(precision_bits);
    let v = x.to_real(&ctx);
    ctx.round_to(&v, precision_bits.max(64))
}

impl Ord for QuadExt {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.b == other.b {
            return self.a.cmp(&other.a);
        }
        if self.a == other.a {
            return self.b.cmp(&other.b);
        }
        match (self - other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for QuadExt {
    fn default() -> Self {
        QuadExt::zero()
    }
}

impl From<i64> for QuadExt {
    fn from(v: i64) -> Self {
        QuadExt::int(v)
    }
}

impl From<Rational> for QuadExt {
    fn from(v: Rational) -> Self {
        QuadExt::from_rational(v)
    }
}

impl<'a> Add<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn add(self, o: &QuadExt) -> QuadExt {
        QuadExt::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl<'a> Sub<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn sub(self, o: &QuadExt) -> QuadExt {
        QuadExt::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl<'a> Mul<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn mul(self, o: &QuadExt) -> QuadExt {
        if self.b.is_zero() && o.b.is_zero() {
            return QuadExt::from_rational(&self.a * &o.a);
        }
        let three = Rational::from_integer(3.into());
        QuadExt::new(
            &self.a * &o.a + three * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, o: QuadExt) -> QuadExt {
        &self + &o
    }
}

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, o: QuadExt) -> QuadExt {
        &self - &o
    }
}

impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, o: QuadExt) -> QuadExt {
        &self * &o
    }
}

impl AddAssign<&QuadExt> for QuadExt {
    fn add_assign(&mut self, o: &QuadExt) {
        self.a += &o.a;
        self.b += &o.b;
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::new(-self.a, -self.b)
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::new(-self.a.clone(), -self.b.clone())
    }
}

impl fmt::Display for QuadExt {
    /// `a`, `b*sqrt3` or `(a+b*sqrt3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*sqrt3", self.b),
            (false, false) => {
                if self.b.is_negative() {
                    write!(f, "({}-{}*sqrt3)", self.a, -self.b.clone())
                } else {
                    write!(f, "({}+{}*sqrt3)", self.a, self.b)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, qd: i64, r: i64, s: i64) -> QuadExt {
        QuadExt::from_parts(p, qd, r, s)
    }

    #[test]
    fn norm_of_conjugates() {
        let x = q(1, 1, 1, 1);
        let y = q(1, 1, -1, 1);
        assert_eq!(quad_arith(&x, &y, ArithOp::Mul).unwrap(), QuadExt::int(-2));
    }

    #[test]
    fn inverse_of_sqrt3() {
        let inv = QuadExt::sqrt3().inv().unwrap();
        assert_eq!(inv, q(0, 1, 1, 3));
    }

    #[test]
    fn conjugate_exponents_sum_to_n() {
        let n = 2;
        let plus = &QuadExt::ratio(n, 2) * &q(1, 1, 1, 1);
        let minus = &QuadExt::ratio(n, 2) * &q(1, 1, -1, 1);
        assert_eq!(&plus + &minus, QuadExt::int(n));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            quad_arith(&QuadExt::one(), &QuadExt::zero(), ArithOp::Div),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn signs() {
        assert_eq!(quad_sign(&q(1, 1, -1, 1)), -1);
        assert_eq!(quad_sign(&q(2, 1, -1, 1)), 1);
        assert_eq!(quad_sign(&QuadExt::zero()), 0);
        assert_eq!(quad_sign(&q(-2, 1, 1, 1)), -1);
        assert_eq!(quad_sign(&q(-1, 1, 1, 1)), 1);
    }

    #[test]
    fn order_follows_real_embedding() {
        let mut v = [q(2, 1, 0, 1), q(0, 1, 1, 1), q(1, 1, 1, 2), q(-1, 1, 1, 1)];
        v.sort();
        let f: Vec<f64> = v.iter().map(|x| x.approx_f64()).collect();
        assert!(f.windows(2).all(|w| w[0] < w[1]), "{f:?}");
    }

    #[test]
    fn to_real_of_one_is_exact() {
        let ctx = RealCtx::new(64);
        let v = quad_to_real(&QuadExt::one(), 64);
        assert_eq!(ctx.to_f64(&v), 1.0);
    }

    #[test]
    fn powers() {
        let x = q(1, 1, 1, 1);
        assert_eq!(x.pow_i64(2).unwrap(), q(4, 1, 2, 1));
        assert_eq!(&x.pow_i64(-3).unwrap() * &x.pow_i64(3).unwrap(), QuadExt::one());
    }

    #[test]
    fn display_forms() {
        assert_eq!(q(1, 2, 0, 1).to_string(), "1/2");
        assert_eq!(q(0, 1, -1, 3).to_string(), "-1/3*sqrt3");
        assert_eq!(q(1, 1, -1, 1).to_string(), "(1-1*sqrt3)");
    }
}
