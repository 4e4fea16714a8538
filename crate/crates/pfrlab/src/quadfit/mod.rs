//! Quadratic-correlation machinery: the Walsh–Hadamard transform, quadratic
//! polynomials over `F_2^d`, and two backends that find a quadratic
//! polynomial correlating with a `{-1, 0, 1}`-valued target.
//!
//! The two backends satisfy one contract — "return a quadratic polynomial
//! together with its (scaled-integer) correlation against the target" — but
//! make different tradeoffs: [`exhaustive_quad_fit`] enumerates every
//! quadratic form and is exact at tiny dimensions, while
//! [`bilinear_quad_fit`] recovers one bilinear row per output coordinate
//! from heavy Walsh coefficients and scales to the pipeline's dimensions.
//! Neither output is trusted downstream: callers re-measure agreement.

mod bilinear;
mod exhaustive;
mod poly;
mod wht;

pub use bilinear::{bilinear_quad_fit, BilinearFit, BilinearParams, CorrelationTarget, TableTarget};
pub use exhaustive::{exhaustive_quad_fit, EXHAUSTIVE_CAP_DEFAULT};
pub use poly::{quad_to_bilinear, QuadPoly};
pub use wht::{wht_inplace, Spectrum};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2core::BitVec;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadfitError {
    #[error("table length {0} is not a power of two")]
    BadTableLength(usize),
    #[error("dimension {dim} exceeds the cap {cap} for this backend")]
    CapExceeded { dim: usize, cap: usize },
    #[error("target evaluation failed: {0}")]
    Target(String),
    #[error("row {row}: heavy coefficients {first} and {second} are within tie tolerance (|{w1}| vs |{w2}| out of 2^{m})")]
    AmbiguousRow {
        row: usize,
        first: BitVec,
        second: BitVec,
        w1: i64,
        w2: i64,
        m: usize,
    },
}

/// A correlation value kept in scaled integers: the absolute value of a sum
/// of `±1` terms over a domain of size `2^log2_denom`. Division is deferred
/// to display time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correlation {
    pub raw_abs: i64,
    pub log2_denom: u32,
}

impl Correlation {
    pub fn new(raw_abs: i64, log2_denom: u32) -> Self {
        debug_assert!(raw_abs >= 0);
        Correlation { raw_abs, log2_denom }
    }

    pub fn as_f64(&self) -> f64 {
        self.raw_abs as f64 / (1u64 << self.log2_denom) as f64
    }
}

impl std::fmt::Display for Correlation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/2^{}", self.raw_abs, self.log2_denom)
    }
}
