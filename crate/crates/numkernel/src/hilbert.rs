//! Hilbert projective metric on the positive cone, row-vector convention.

use dashu::integer::IBig;
use dashu::rational::RBig;
use serde::Serialize;

use crate::{HighFloat, Mat3, NumError, Vec3};

#[derive(Clone, Debug, Serialize)]
pub struct HilbertRho {
    /// max over row pairs of sqrt(max_k ratio / min_k ratio).
    pub rho: HighFloat,
    /// tanh(½·log ρ) = (ρ − 1)/(ρ + 1).
    pub contraction: HighFloat,
    /// ρ² as an exact rational.
    #[serde(serialize_with = "crate::ser_rational")]
    pub rho_squared: RBig,
}

/// max_k(x_k/y_k) / min_k(x_k/y_k) for strictly positive vectors.
pub fn ratio_spread(x: &Vec3, y: &Vec3) -> RBig {
    let ratios: Vec<RBig> = (0..3).map(|k| RBig::from_parts_signed(x[k].clone(), y[k].clone())).collect();
    let max = ratios.iter().max().expect("three entries").clone();
    let min = ratios.iter().min().expect("three entries").clone();
    max / min
}

/// Largest pairwise ratio spread among the rows; `exp` of this is the
/// Hilbert diameter of the cone spanned by the rows.
pub fn row_spread(m: &Mat3) -> Result<RBig, NumError> {
    if !m.is_positive() {
        return Err(NumError::NonPositiveEntry);
    }
    let mut best = RBig::ONE;
    for i in 0..3 {
        for j in (i + 1)..3 {
            let s = ratio_spread(m.row(i), m.row(j));
            if s > best {
                best = s;
            }
        }
    }
    Ok(best)
}

/// Spread for arbitrary non-negative rows: `None` if some pair has a zero
/// in one row but not the other (infinite distance).
pub fn row_spread_nonneg(m: &Mat3) -> Option<RBig> {
    if m.is_positive() {
        return row_spread(m).ok();
    }
    None
}

pub fn hilbert_rho(m: &Mat3, prec: usize) -> Result<HilbertRho, NumError> {
    let sq = row_spread(m)?;
    let rho = HighFloat::from_rational(&sq, prec).sqrt();
    let one = HighFloat::one(prec);
    let contraction = (rho.clone() - one.clone()) / (rho.clone() + one);
    Ok(HilbertRho {
        rho,
        contraction,
        rho_squared: sq,
    })
}

/// Hilbert distance log(max/min of x_k/y_k) between two positive vectors.
pub fn hilbert_distance(x: &Vec3, y: &Vec3, prec: usize) -> Result<HighFloat, NumError> {
    if x.iter().chain(y.iter()).any(|v| *v <= IBig::ZERO) {
        return Err(NumError::NonPositiveEntry);
    }
    Ok(HighFloat::from_rational(&ratio_spread(x, y), prec).ln())
}
