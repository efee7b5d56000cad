//! Computational certificates for the combinatorial facts behind the
//! spectral results: transition-graph path weights, the A/B domination
//! claim, finite-time Lyapunov exponents, the four-state machine bounding
//! entry ratios of A-products, and the telescoped Host-sum inequality.

mod cex;
mod domination;
mod paths;
mod states;
mod telescope;

pub use cex::{cex_sequence, CexBlock, CexReport, CEX_R_MAX};
pub use domination::{ab_domination, lyapunov_report, Domination, DominationStep, LyapReport};
pub use paths::{loop_sum_check, loop_word, path_weight, Edge, EdgeWord, LoopSum, Version};
pub use states::{state_machine_run, trace_json_lines, StateRun, StateTag, TraceStep};
pub use telescope::{host_telescope_inequality, TelescopeGroup, TelescopeReport, MAX_BLOCK_SUMS};

use itm_numkernel::Mat3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertError {
    #[error("unknown edge label {0:?}")]
    BadEdge(char),
    #[error("empty edge word")]
    EmptyWord,
    #[error("edge {next} cannot follow edge {prev} (position {at})")]
    NonComposable { at: usize, prev: Edge, next: Edge },
    #[error("position {0} is outside the sequence")]
    OutOfRange(usize),
    #[error("sequence violates (k2)")]
    ViolatesK2,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("state invariant violated at step {step} (index {index}): expected {expected}, matrix {matrix}: {detail}")]
    StateViolation { step: usize, index: usize, expected: String, matrix: Box<Mat3>, detail: String },
    #[error("more than {0} distinct block sums")]
    TooManySums(usize),
}

/// Pulls k_1..k_n out of a spec.
pub(crate) fn ks_of(spec: &itm_renorm::KSeqSpec, n: usize) -> Result<Vec<u64>, CertError> {
    spec.prefix(n).map_err(|have| CertError::OutOfRange(have + 1))
}
