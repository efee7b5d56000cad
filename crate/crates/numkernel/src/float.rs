//! Binary floating point with an explicit mantissa precision.
//!
//! Every value carries its precision; binary operations round to the larger
//! of the two operand precisions, so mixing values never silently drops bits.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu::base::{Approximation, BitTest, SquareRoot, UnsignedAbs};
use dashu::float::round::mode::HalfEven;
use dashu::float::FBig;
use dashu::integer::{IBig, UBig};
use dashu::rational::RBig;
use serde::{Serialize, Serializer};

use crate::NumError;

type F = FBig<HalfEven, 2>;

/// Default mantissa precision in bits.
pub const DEFAULT_PRECISION: usize = 192;
/// Smallest precision accepted by the constructors.
pub const MIN_PRECISION: usize = 64;

#[derive(Clone, PartialEq)]
pub struct HighFloat(F);

fn check_precision(prec: usize) -> Result<(), NumError> {
    if prec < MIN_PRECISION {
        Err(NumError::PrecisionTooLow(prec))
    } else {
        Ok(())
    }
}

fn value<T, E>(a: Approximation<T, E>) -> T {
    match a {
        Approximation::Exact(v) => v,
        Approximation::Inexact(v, _) => v,
    }
}

impl HighFloat {
    fn wrap(f: F, prec: usize) -> Self {
        HighFloat(value(f.with_precision(prec)))
    }

    pub fn try_from_i64(n: i64, prec: usize) -> Result<Self, NumError> {
        check_precision(prec)?;
        Ok(Self::from_i64(n, prec))
    }

    /// Integer constant at the given precision. Panics below [`MIN_PRECISION`].
    pub fn from_i64(n: i64, prec: usize) -> Self {
        assert!(prec >= MIN_PRECISION, "precision {prec} below {MIN_PRECISION}");
        Self::wrap(F::from(n), prec)
    }

    pub fn from_ibig(n: &IBig, prec: usize) -> Self {
        assert!(prec >= MIN_PRECISION, "precision {prec} below {MIN_PRECISION}");
        Self::wrap(F::from(n.clone()), prec)
    }

    /// Rounds a rational to the requested precision (one division, each
    /// operand rounded first).
    pub fn from_rational(q: &RBig, prec: usize) -> Self {
        let num = Self::from_ibig(q.numerator(), prec);
        let den = Self::from_ibig(&IBig::from(q.denominator().clone()), prec);
        num / den
    }

    pub fn from_f64(x: f64, prec: usize) -> Result<Self, NumError> {
        check_precision(prec)?;
        let f = F::try_from(x).map_err(|_| NumError::NotFinite)?;
        Ok(Self::wrap(f, prec))
    }

    /// Exact value as a rational (binary floats are dyadic rationals).
    pub fn to_rational(&self) -> RBig {
        let repr = self.0.repr();
        let sig = repr.significand().clone();
        let exp = repr.exponent();
        if exp >= 0 {
            RBig::from(sig << exp as usize)
        } else {
            RBig::from_parts(sig, UBig::ONE << (-exp) as usize)
        }
    }

    pub fn precision(&self) -> usize {
        self.0.precision()
    }

    /// Re-rounds to a different precision.
    pub fn with_precision(&self, prec: usize) -> Self {
        Self::wrap(self.0.clone(), prec)
    }

    pub fn zero(prec: usize) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn int_like(&self, n: i64) -> Self {
        Self::from_i64(n, self.precision())
    }

    pub fn is_zero(&self) -> bool {
        self.0.repr().is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.repr().significand() < &IBig::ZERO
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn floor(&self) -> IBig {
        value(self.0.floor().to_int())
    }

    pub fn sqrt(&self) -> Self {
        HighFloat(self.0.sqrt())
    }

    pub fn ln(&self) -> Self {
        HighFloat(self.0.ln())
    }

    pub fn exp(&self) -> Self {
        HighFloat(self.0.exp())
    }

    pub fn to_f64(&self) -> f64 {
        value(self.0.to_f64())
    }

    /// Distance to the nearest integer.
    pub fn dist_to_int(&self) -> Self {
        let f = Self::from_ibig(&self.floor(), self.precision());
        let lo = self.clone() - f;
        let hi = self.int_like(1) - lo.clone();
        if lo <= hi {
            lo
        } else {
            hi
        }
    }

    /// `2^e` at the given precision.
    pub fn pow2(e: isize, prec: usize) -> Self {
        Self::wrap(F::from_parts(IBig::ONE, e), prec)
    }

    /// Base-2 exponent of the leading bit, `None` for zero.
    pub fn log2_floor(&self) -> Option<isize> {
        if self.is_zero() {
            return None;
        }
        let repr = self.0.repr();
        let bits = repr.significand().unsigned_abs().bit_len() as isize;
        Some(repr.exponent() + bits - 1)
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Decimal rendering with `digits` significant digits, in plain
    /// scientific form `d.ddd…e±x`.
    pub fn to_sci(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let q = self.to_rational();
        let neg = q < RBig::ZERO;
        let mut q = if neg { -q } else { q };
        // Bring q into [1, 10) while tracking the decimal exponent.
        let ten = RBig::from(10u8);
        let mut e10: i64 = 0;
        let approx = self.abs().log2_floor().unwrap_or(0) as f64 * std::f64::consts::LOG10_2;
        let shift = approx.floor() as i64;
        if shift > 0 {
            q /= RBig::from(UBig::from(10u8).pow(shift as usize));
        } else if shift < 0 {
            q *= RBig::from(UBig::from(10u8).pow((-shift) as usize));
        }
        e10 += shift;
        while q >= ten {
            q /= ten.clone();
            e10 += 1;
        }
        while q < RBig::ONE {
            q *= ten.clone();
            e10 -= 1;
        }
        let scaled = q * RBig::from(UBig::from(10u8).pow(digits - 1));
        let mut n = scaled.round().unsigned_abs();
        if n >= UBig::from(10u8).pow(digits) {
            n /= UBig::from(10u8);
            e10 += 1;
        }
        let s = n.to_string();
        let (head, tail) = s.split_at(1);
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(head);
        if !tail.is_empty() {
            out.push('.');
            out.push_str(tail);
        }
        out.push_str(&format!("e{e10}"));
        out
    }

    /// Number of significant decimal digits that the precision supports.
    pub fn decimal_digits(&self) -> usize {
        (self.precision() as f64 * std::f64::consts::LOG10_2).floor() as usize
    }
}

impl PartialOrd for HighFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl fmt::Debug for HighFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}b]", self.to_sci(self.decimal_digits().min(40)), self.precision())
    }
}

impl fmt::Display for HighFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or_else(|| self.decimal_digits());
        f.write_str(&self.to_sci(digits))
    }
}

/// Serialized as `{"value": "<decimal>", "precision_bits": p}`.
impl Serialize for HighFloat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("HighFloat", 2)?;
        st.serialize_field("value", &self.to_sci(self.decimal_digits()))?;
        st.serialize_field("precision_bits", &self.precision())?;
        st.end()
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for HighFloat {
            type Output = HighFloat;
            fn $m(self, rhs: HighFloat) -> HighFloat {
                HighFloat($tr::$m(self.0, rhs.0))
            }
        }
        impl<'a> $tr<&'a HighFloat> for HighFloat {
            type Output = HighFloat;
            fn $m(self, rhs: &'a HighFloat) -> HighFloat {
                HighFloat($tr::$m(self.0, &rhs.0))
            }
        }
        impl<'a> $tr<&'a HighFloat> for &'a HighFloat {
            type Output = HighFloat;
            fn $m(self, rhs: &'a HighFloat) -> HighFloat {
                HighFloat($tr::$m(&self.0, &rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for HighFloat {
    type Output = HighFloat;
    fn neg(self) -> HighFloat {
        HighFloat(-self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_is_kept_through_arithmetic() {
        let a = HighFloat::from_i64(1, 192);
        let b = HighFloat::from_i64(3, 192);
        let c = a / b;
        assert_eq!(c.precision(), 192);
        let err = (c * HighFloat::from_i64(3, 192) - HighFloat::one(192)).abs();
        assert!(err < HighFloat::pow2(-190, 192));
    }

    #[test]
    fn rational_round_trip_is_exact_for_dyadics() {
        let q = RBig::from_parts(IBig::from(-5), UBig::from(8u8));
        let f = HighFloat::from_rational(&q, 64);
        assert_eq!(f.to_rational(), q);
    }

    #[test]
    fn sci_rendering() {
        let x = HighFloat::from_rational(&RBig::from_parts(IBig::from(1), UBig::from(3u8)), 128);
        assert_eq!(x.to_sci(5), "3.3333e-1");
        assert_eq!(HighFloat::from_i64(-1234, 64).to_sci(2), "-1.2e3");
        assert_eq!(HighFloat::from_i64(9999, 64).to_sci(2), "1.0e4");
    }

    #[test]
    fn dist_to_int_and_floor() {
        let x = HighFloat::from_rational(&RBig::from_parts(IBig::from(-7), UBig::from(4u8)), 96);
        assert_eq!(x.floor(), IBig::from(-2));
        assert_eq!(x.dist_to_int().to_rational(), RBig::from_parts(IBig::from(1), UBig::from(4u8)));
    }

    #[test]
    fn low_precision_rejected() {
        assert!(HighFloat::try_from_i64(1, 32).is_err());
    }
}
