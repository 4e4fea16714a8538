//! The query/sample access model the algorithms are measured against, plus
//! planted-instance generators and the on-disk set format.
//!
//! Everything the algorithmic path learns about a set flows through
//! [`MembershipOracle`], which counts every query and sample. Verification
//! (coverage checks, exact Freiman checks, ground-truth audits) goes through
//! the explicitly named audit accessors, which do not count: the counters
//! always reflect the algorithm alone.

mod files;
mod oracle;
mod planted;
mod sf;

pub use files::{read_set, read_set_from_path, write_set, write_set_to_path, CoverSidecar};
pub use oracle::{LocalizedOracle, MembershipOracle, OracleCounters};
pub use planted::{
    gen_planted_affine, gen_planted_cover, gen_small_image, AffineTruth, PlantedInstance,
    PlantedParams, SmallImageTruth,
};
pub use sf::{make_sf_access, SfAccess, SfCounters, SfQueries};

use thiserror::Error;

use crate::gf2core::{BitVec, Gf2Error};
use crate::setops::SetError;

#[derive(Debug, Error)]
pub enum AccessError {
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error("cannot sample from an empty set")]
    EmptySet,
    #[error("kernel dimension {dim} exceeds the coset-enumeration cap {cap}")]
    KernelCapExceeded { dim: usize, cap: usize },
    #[error("fiber of {x} holds at least two set elements ({first} and {second}); the Freiman isomorphism failed")]
    IsoViolation { x: BitVec, first: BitVec, second: BitVec },
    #[error("parameter out of range: {0}")]
    ParamRange(String),
    #[error("{path}:{line}: {msg}")]
    Format { path: String, line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
