//! Exact linear algebra over `F_2`: packed bit vectors, bit matrices,
//! echelon-basis subspaces, kernels and restricted inverses.
//!
//! Everything here is deterministic and allocation-friendly; addition is
//! bitwise XOR throughout. All randomness is supplied by the caller through
//! an explicit generator.

mod bitmat;
mod bitvec;
mod maps;
mod subspace;

pub use bitmat::BitMat;
pub use bitvec::BitVec;
pub use maps::{random_linear_map, restricted_inverse, AffineMap, LinearMap, RestrictedInverse};
pub use subspace::Subspace;

use thiserror::Error;

/// Errors from the GF(2) kernel layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("enumerating 2^{dim} points exceeds the configured cap of 2^{cap}")]
    EnumerationTooLarge { dim: usize, cap: usize },
    #[error("invalid bit string {0:?}")]
    BadBitString(String),
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<(), Gf2Error> {
    if expected == got {
        Ok(())
    } else {
        Err(Gf2Error::DimensionMismatch { expected, got })
    }
}
