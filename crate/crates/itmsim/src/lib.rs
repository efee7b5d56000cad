//! Simulation of T_{α,β}: orbits, itineraries, images of interval unions and
//! the first-return map to [1−α, 1].

mod intervals;
mod map;
mod params;
mod word;

pub use intervals::{IntervalReport, IntervalSet};
pub use map::{
    attractor_cover, branch, cover_measures, first_return, itinerary, itm_eval, params_to_high, push_forward,
    renorm_conjugacy_residual, with_adaptive_precision, ConjugacyReport, Return,
};
pub use params::Params;
pub use word::{Word, WordParseError};

/// Default component cap for [`attractor_cover`].
pub const DEFAULT_INTERVAL_CAP: usize = 1_000_000;
/// Precision ceiling for adaptive retries.
pub const PRECISION_CAP: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("alpha = {0} is outside (0, 1]")]
    AlphaOutOfRange(String),
    #[error("point {0} is outside [0, 1]")]
    OutOfDomain(String),
    #[error("point {0} is outside the return window [1 - alpha, 1]")]
    NotInWindow(String),
    #[error("precision exhausted at step {step}: point within the guard band of a boundary")]
    PrecisionExhausted { step: usize },
    #[error("no return within {0} steps")]
    MaxStepsExceeded(u64),
    #[error("interval union exceeded {cap} components")]
    TooManyIntervals { cap: usize },
    #[error("step count must be at least 1")]
    ZeroSteps,
}
