//! The cover-learning pipeline: localize the set inside its span, build a
//! dense model through a random linear map, fit an affine map by quadratic
//! correlation, and extract a verified covering subspace.
//!
//! A successful run is unconditional evidence: the report carries a
//! certificate whose coverage and size bound were re-checked by enumeration,
//! never trusted from intermediate estimates.

mod config;
mod fit;
mod pipeline;

pub use config::{FitBackend, PipelineConfig};
pub use fit::{restricted_hom_fit, CachedSf, FitConfig, HomFit};
pub use pipeline::{
    dense_model, extract_subspace, localize, run_pipeline, PipelineReport, StageMillis,
};

use thiserror::Error;

use crate::access::AccessError;
use crate::gf2core::Gf2Error;
use crate::quadfit::QuadfitError;
use crate::setops::SetError;

#[derive(Debug, Error)]
pub enum PfrError {
    #[error(transparent)]
    Access(#[from] AccessError),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Quadfit(#[from] QuadfitError),
    #[error("no Freiman isomorphism found in {attempts} draws of the random map")]
    ModelFailure { attempts: usize },
    #[error("no point of S among {samples} candidate samples; the dense model is too sparse")]
    DensificationFailure { samples: usize },
    #[error("domain dimension {m} exceeds the enumeration cap {cap} for the exact recount")]
    DomainTooLarge { m: usize, cap: usize },
    #[error("fit agreement {got} below the configured threshold {want}")]
    LowAgreement { got: u64, want: u64 },
    #[error("dense patch A ∩ (v + Im(M)) is empty")]
    EmptyPatch,
    #[error("cover verification failed")]
    CoverFailed,
}

/// splitmix64 step; used to derive per-attempt seeds deterministically.
pub(crate) fn derive_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
