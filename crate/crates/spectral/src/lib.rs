//! Spectral side of the family: the stable direction of the A-cocycle, the
//! projective simplex maps H_k, the lines ℓ_{p,q,r} on which an eigenvalue
//! would have to sit, Host's summability terms and a weak-mixing verdict.

mod host;
mod lines;
mod simplex;
mod stable;
mod verdict;

pub use host::{h_vector, host_sums, GrowthClass, HostReport};
pub use lines::{line_residual, line_search, uv_from_xi, xi_from_line, LineHit, LineTriple};
pub use simplex::{
    h_forward, h_inverse, locate_delta_k, rational_descent, simplex_itinerary, slope_check, slope_report, Descent,
    DescentStep, ItineraryStatus, Location, SimplexItinerary, SimplexPoint, SlopeReport,
};
pub use stable::{
    stable_dir_eventually_periodic, stable_dir_periodic_exact, stable_direction, stable_direction_seeded,
    PeriodicStable, StableDir,
};
pub use verdict::{wm_verdict, Evidence, LineEvidence, WMStatus, WMVerdict};

use itm_numkernel::{NumError, Scalar};
use serde::Serializer;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpectralError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("point {0} is outside the simplex")]
    OutsideSimplex(String),
    #[error("point {point} is outside Δ_{k}")]
    OutsideDeltaK { k: u64, point: String },
    #[error("point {0} lies on the edge v = 0, which no Δ_k covers")]
    BottomEdge(String),
    #[error("(1, 0) is the common vertex of every Δ_k")]
    CommonVertex,
    #[error("index k must be at least 1")]
    ZeroIndex,
    #[error("triple with p = q = r is degenerate")]
    DegenerateTriple,
    #[error("vanishing denominator")]
    ZeroDenominator,
    #[error("sequence violates (k2)")]
    ViolatesK2,
    #[error("sequence has only {0} entries")]
    ShortSequence(usize),
    #[error("empty period")]
    EmptyPeriod,
}

pub(crate) fn ser_scalar<T: Scalar, S: Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.describe())
}

pub(crate) fn ser_scalars<T: Scalar, S: Serializer>(xs: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.describe()))
}
