//! The renormalization map G on parameter space, index sequences, the
//! inverse branches and cylinders, and the raster of Ω_∞.

mod gmap;
mod kseq;
mod pgm;
mod raster;

pub use gmap::{
    fixed_params, g_fixed_residual, g_inverse_branch, g_step, inverse_branch_matrix, k_sequence, k_sequence_adaptive,
    k_sequence_with_radius, params_from_kseq, CylinderPoint, TypeStatus, TypeVerdict, MAX_CYLINDER_STEPS,
};
pub use kseq::{period_k2, GenRule, KSeqError, KSeqSpec};
pub use pgm::{Pgm, PgmError, PGM_MAX_PIXELS};
pub use raster::{pixel_col, pixel_row, pixel_value, raster_omega, PixelFate, Raster, RasterConfig, RasterMode, RasterSummary};

use itm_numkernel::NumError;
use itm_sim::SimError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RenormError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("index k must be at least 1")]
    ZeroIndex,
    #[error("k + alpha' - beta' must be positive")]
    OutsideBranch,
    #[error("the spec has finitely many indices")]
    FiniteSpec,
    #[error("the spec violates condition (k2)")]
    ViolatesK2,
    #[error("cylinders did not contract: diameter {diameter} after {steps} steps")]
    NonContracting { steps: usize, diameter: String },
    #[error("invalid raster configuration: {0}")]
    BadConfig(String),
    #[error("i/o error: {0}")]
    Io(String),
}
