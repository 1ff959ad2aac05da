//! Thin high-precision real arithmetic on top of `astro-float-num`.
//!
//! Every operation rounds to the context's working precision, which is the
//! requested precision plus 64 guard bits.

use std::cell::RefCell;

use astro_float_num::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type Real = BigFloat;

pub const GUARD_BITS: usize = 64;

const RM: RoundingMode = RoundingMode::ToEven;

pub struct RealCtx {
    precision: usize,
    work: usize,
    cc: RefCell<Consts>,
    sqrt3: RefCell<Option<Real>>,
}

impl RealCtx {
    pub fn new(precision_bits: usize) -> Self {
        let precision = precision_bits.max(64);
        RealCtx {
            precision,
            work: precision + GUARD_BITS,
            cc: RefCell::new(Consts::new().expect("constant cache allocation")),
            sqrt3: RefCell::new(None),
        }
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn working_bits(&self) -> usize {
        self.work
    }

    pub fn zero(&self) -> Real {
        BigFloat::from_i64(0, self.work)
    }

    pub fn int(&self, v: i64) -> Real {
        BigFloat::from_i64(v, self.work)
    }

    pub fn big_int(&self, v: &BigInt) -> Real {
        let p = self.work.max(v.bits() as usize + 64);
        let (sign, digits) = v.to_u64_digits();
        let base = BigFloat::from_u128(1u128 << 64, p);
        let mut acc = BigFloat::from_u64(0, p);
        for d in digits.iter().rev() {
            acc = acc.mul(&base, p, RM).add(&BigFloat::from_u64(*d, p), p, RM);
        }
        if sign == num_bigint::Sign::Minus {
            acc = acc.neg();
        }
        acc
    }

    pub fn rational(&self, r: &BigRational) -> Real {
        let n = self.big_int(r.numer());
        if r.denom() == &BigInt::from(1) {
            return self.round_to(&n, self.work);
        }
        let d = self.big_int(r.denom());
        n.div(&d, self.work, RM)
    }

    pub fn add(&self, a: &Real, b: &Real) -> Real {
        a.add(b, self.work, RM)
    }

    pub fn sub(&self, a: &Real, b: &Real) -> Real {
        a.sub(b, self.work, RM)
    }

    pub fn mul(&self, a: &Real, b: &Real) -> Real {
        a.mul(b, self.work, RM)
    }

    pub fn div(&self, a: &Real, b: &Real) -> Real {
        a.div(b, self.work, RM)
    }

    pub fn neg(&self, a: &Real) -> Real {
        a.neg()
    }

    pub fn abs(&self, a: &Real) -> Real {
        a.abs()
    }

    pub fn sqrt(&self, a: &Real) -> Real {
        a.sqrt(self.work, RM)
    }

    pub fn sqrt3(&self) -> Real {
        let mut slot = self.sqrt3.borrow_mut();
        slot.get_or_insert_with(|| self.int(3).sqrt(self.work, RM)).clone()
    }

    pub fn ln(&self, a: &Real) -> Real {
        a.ln(self.work, RM, &mut self.cc.borrow_mut())
    }

    pub fn exp(&self, a: &Real) -> Real {
        a.exp(self.work, RM, &mut self.cc.borrow_mut())
    }

    /// `base^e` for positive `base`.
    pub fn powr(&self, base: &Real, e: &Real) -> Real {
        self.exp(&self.mul(e, &self.ln(base)))
    }

    pub fn powi(&self, base: &Real, k: i64) -> Real {
        let p = base.powi(k.unsigned_abs() as usize, self.work, RM);
        if k < 0 {
            self.div(&self.int(1), &p)
        } else {
            p
        }
    }

    pub fn round_to(&self, a: &Real, bits: usize) -> Real {
        let mut v = a.clone();
        // set_precision only fails for NaN or absurd precisions
        let _ = v.set_precision(bits, RM);
        v
    }

    pub fn is_zero(&self, a: &Real) -> bool {
        a.is_zero()
    }

    pub fn is_positive(&self, a: &Real) -> bool {
        a.is_positive() && !a.is_zero()
    }

    pub fn lt(&self, a: &Real, b: &Real) -> bool {
        matches!(a.cmp(b), Some(c) if c < 0)
    }

    pub fn max(&self, a: &Real, b: &Real) -> Real {
        if self.lt(a, b) {
            b.clone()
        } else {
            a.clone()
        }
    }

    /// `10^k` exactly representable only for `k ≥ 0`; used for tolerances.
    pub fn pow10(&self, k: i64) -> Real {
        self.powi(&self.int(10), k)
    }

    /// Nearest `f64` (saturating to 0 / ±inf outside the f64 range).
    pub fn to_f64(&self, a: &Real) -> f64 {
        match a.as_raw_parts() {
            None => f64::NAN,
            Some((m, _, s, e, _)) => {
                if a.is_zero() {
                    return 0.0;
                }
                let top = *m.last().unwrap_or(&0) as f64;
                let mag = top / 2f64.powi(64) * 2f64.powi(e);
                if s == Sign::Neg {
                    -mag
                } else {
                    mag
                }
            }
        }
    }

    /// `log10 |a|`, finite for nonzero `a` of any magnitude.
    pub fn log10_abs(&self, a: &Real) -> Option<f64> {
        if a.is_zero() {
            return None;
        }
        let (m, _, _, e, _) = a.as_raw_parts()?;
        let top = *m.last()? as f64 / 2f64.powi(64);
        Some(top.log10() + e as f64 * std::f64::consts::LOG10_2)
    }

    /// Short scientific rendering, e.g. `1.234e-80`; stable across runs.
    pub fn sci(&self, a: &Real) -> String {
        match self.log10_abs(a) {
            None => "0".to_string(),
            Some(l) => {
                let exp = l.floor();
                let mant = 10f64.powf(l - exp);
                let sign = if a.is_negative() { "-" } else { "" };
                format!("{sign}{mant:.3}e{}", exp as i64)
            }
        }
    }

    pub fn from_rational_parts(&self, num: i64, den: i64) -> Real {
        self.rational(&BigRational::new(num.into(), den.into()))
    }

    pub fn sign(&self, a: &Real) -> i8 {
        if a.is_zero() {
            0
        } else if a.is_negative() {
            -1
        } else {
            1
        }
    }
}

/// Convenience: the sign of a big integer as `i8`.
pub fn bigint_sign(v: &BigInt) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_negative() {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_small_values() {
        let ctx = RealCtx::new(128);
        assert_eq!(ctx.to_f64(&ctx.int(3)), 3.0);
        assert_eq!(ctx.to_f64(&ctx.int(-5)), -5.0);
        let r = ctx.from_rational_parts(1, 4);
        assert_eq!(ctx.to_f64(&r), 0.25);
    }

    #[test]
    fn big_integers_convert_exactly() {
        let ctx = RealCtx::new(128);
        let v: BigInt = BigInt::from(1u64) << 100u32;
        let r = ctx.big_int(&(v.clone() + 7));
        let back = ctx.sub(&r, &ctx.big_int(&v));
        assert_eq!(ctx.to_f64(&back), 7.0);
    }

    #[test]
    fn sqrt3_squares_to_three() {
        let ctx = RealCtx::new(256);
        let s = ctx.sqrt3();
        let diff = ctx.sub(&ctx.mul(&s, &s), &ctx.int(3));
        assert!(ctx.log10_abs(&diff).is_none_or(|l| l < -90.0));
    }

    #[test]
    fn sci_format() {
        let ctx = RealCtx::new(128);
        assert_eq!(ctx.sci(&ctx.from_rational_parts(-3, 2000)), "-1.500e-3");
        assert_eq!(ctx.sci(&ctx.zero()), "0");
    }
}
