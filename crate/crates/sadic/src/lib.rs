//! The substitutions χ_k of the S-adic coding and the combinatorics built on
//! them: composition, the word ρ, de-substitution, telescoping into positive
//! blocks, linear recurrence and gap statistics.

mod recurrence;
mod subst;

pub use recurrence::{
    aperiodicity_scan, frequency_ratio, lr_verdict, return_gap_stats, telescope_blocks, telescope_ks, Block, GapRow,
    GapStats, LrStatus, LrVerdict, NotLrReason,
};
pub use subst::{
    chi, compose_chain, compose_ks, desubstitute, image_lengths, rho_prefix, Desubstitution, Substitution,
    RHO_MAX_CHAIN,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SadicError {
    #[error("index k must be at least 1")]
    ZeroIndex,
    #[error("index range {i}..{j} is not available")]
    OutOfRange { i: usize, j: usize },
    #[error("chain of length {chain} only reaches {reached} letters, {needed} requested")]
    InsufficientGrowth { chain: usize, reached: usize, needed: usize },
    #[error("no block parse at offset {offset}: run of {run} ones")]
    Parse { offset: usize, run: usize },
    #[error("abelianization is not strictly positive")]
    NotPositive,
    #[error("word of length {len} is too short, need {needed}")]
    TooShort { len: usize, needed: usize },
}
