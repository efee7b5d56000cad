//! A small numeric trait so that map iteration can run on exact rationals or
//! on [`HighFloat`] with the same code.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu::integer::IBig;
use dashu::rational::RBig;

use crate::HighFloat;

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Integer constant in the same numeric context as `self`.
    fn int_like(&self, n: i64) -> Self;
    fn ibig_like(&self, n: &IBig) -> Self;
    fn rational_like(&self, q: &RBig) -> Self;
    fn floor_int(&self) -> IBig;
    fn to_f64(&self) -> f64;
    fn is_exact(&self) -> bool;
    /// Mantissa precision in bits, `None` for exact values.
    fn precision_bits(&self) -> Option<usize>;

    fn zero_like(&self) -> Self {
        self.int_like(0)
    }

    fn one_like(&self) -> Self {
        self.int_like(1)
    }

    fn abs_val(&self) -> Self {
        if *self < self.zero_like() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Distance to the nearest integer.
    fn dist_to_int(&self) -> Self {
        let lo = self.clone() - self.ibig_like(&self.floor_int());
        let hi = self.one_like() - lo.clone();
        if lo <= hi {
            lo
        } else {
            hi
        }
    }

    /// Converts to a float at `prec` bits (exact values are rounded once).
    fn to_high(&self, prec: usize) -> HighFloat;

    /// Human-readable rendering: `p/q` for rationals, scientific notation
    /// at full precision for floats.
    fn describe(&self) -> String;

    /// Guard band 2^{-prec/3} for floats, `None` for exact values.
    fn guard_band(&self) -> Option<Self> {
        self.precision_bits().map(|p| {
            self.rational_like(&RBig::from_parts(IBig::ONE, dashu::integer::UBig::ONE << (p / 3)))
        })
    }

    /// True when `self` and `other` are closer than the guard band
    /// (never for exact values).
    fn within_guard(&self, other: &Self) -> bool {
        match self.guard_band() {
            Some(eps) => (self.clone() - other.clone()).abs_val() < eps,
            None => false,
        }
    }
}

impl Scalar for RBig {
    fn int_like(&self, n: i64) -> Self {
        RBig::from(n)
    }
    fn ibig_like(&self, n: &IBig) -> Self {
        RBig::from(n.clone())
    }
    fn rational_like(&self, q: &RBig) -> Self {
        q.clone()
    }
    fn floor_int(&self) -> IBig {
        self.floor()
    }
    fn to_f64(&self) -> f64 {
        self.to_f64_fast()
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn precision_bits(&self) -> Option<usize> {
        None
    }
    fn to_high(&self, prec: usize) -> HighFloat {
        HighFloat::from_rational(self, prec)
    }
    fn describe(&self) -> String {
        self.to_string()
    }
}

impl Scalar for HighFloat {
    fn int_like(&self, n: i64) -> Self {
        HighFloat::int_like(self, n)
    }
    fn ibig_like(&self, n: &IBig) -> Self {
        HighFloat::from_ibig(n, self.precision())
    }
    fn rational_like(&self, q: &RBig) -> Self {
        HighFloat::from_rational(q, self.precision())
    }
    fn floor_int(&self) -> IBig {
        self.floor()
    }
    fn to_f64(&self) -> f64 {
        HighFloat::to_f64(self)
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn precision_bits(&self) -> Option<usize> {
        Some(self.precision())
    }
    fn to_high(&self, prec: usize) -> HighFloat {
        self.with_precision(prec)
    }
    fn describe(&self) -> String {
        self.to_sci(self.decimal_digits())
    }
}

/// Parses `p/q`, an integer, or a plain decimal (`0.125`, `-3.5e-2`) as an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<RBig, crate::NumError> {
    let s = s.trim();
    let bad = || crate::NumError::Parse(s.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: IBig = parse_int(p.trim()).ok_or_else(bad)?;
        let q: IBig = parse_int(q.trim()).ok_or_else(bad)?;
        if q == IBig::ZERO {
            return Err(crate::NumError::ZeroDenominator);
        }
        return Ok(RBig::from_parts_signed(p, q));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    if exp.unsigned_abs() > 10_000 {
        return Err(bad());
    }
    let (neg, body) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let n: IBig = digits.parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i64;
    let ten = IBig::from(10);
    let mut q = if scale >= 0 {
        RBig::from(n * ten.pow(scale as usize))
    } else {
        RBig::from_parts_signed(n, ten.pow((-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

fn parse_int(s: &str) -> Option<IBig> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}
