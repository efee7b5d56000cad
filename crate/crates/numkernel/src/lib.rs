//! Numeric kernel: exact big integers and rationals, precision-tagged binary
//! floats, 3×3 integer matrix algebra for the A_k / B_k cocycles, certified
//! cubic roots and the Hilbert projective metric.

mod float;
mod hilbert;
mod matrix;
mod poly;
mod scalar;

pub use dashu::integer::{IBig, UBig};
pub use dashu::rational::RBig;

pub use float::{HighFloat, DEFAULT_PRECISION, MIN_PRECISION};
pub use hilbert::{hilbert_distance, hilbert_rho, ratio_spread, row_spread, row_spread_nonneg, HilbertRho};
pub use matrix::{
    a_mat, a_product, b_mat, b_tilde, b_product_rev, make_matrix, mat_product, matrix_invariants, Mat3, MatrixInvariants,
    MatrixKind, Vec3,
};
pub use poly::{real_root_in_unit, real_roots, real_roots_with_multiplicity, Cubic, RATIONAL_ROOT_COEFF_CAP};
pub use scalar::{parse_rational, Scalar};

pub type BigRational = RBig;
pub type BigInt = IBig;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumError {
    #[error("index k must be at least 1")]
    ZeroIndex,
    #[error("power r must be at least 1")]
    ZeroPower,
    #[error("empty matrix product")]
    EmptyProduct,
    #[error("no root in the open unit interval")]
    NoRootInInterval,
    #[error("{0} distinct roots in the open unit interval")]
    MultipleRootsInInterval(usize),
    #[error("matrix has a non-positive entry")]
    NonPositiveEntry,
    #[error("precision {0} bits is below the minimum")]
    PrecisionTooLow(usize),
    #[error("coefficient too large for the rational-root search")]
    CoefficientTooLarge,
    #[error("value is not finite")]
    NotFinite,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse number {0:?}")]
    Parse(String),
}

/// Integers are serialized as decimal strings.
pub fn ser_ibig<S: serde::Serializer>(x: &IBig, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Rationals are serialized as `"p/q"` (or `"p"`) strings.
pub fn ser_rational<S: serde::Serializer>(x: &RBig, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn ser_rationals<S: serde::Serializer>(xs: &[RBig], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

pub fn ser_vec3<S: serde::Serializer>(x: &Vec3, s: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    x.iter().map(|v| v.to_string()).collect::<Vec<_>>().serialize(s)
}
