//! Additive-combinatorics workbench over `F_2^n`.
//!
//! The crate is organized around a pipeline that, given oracle access to a
//! set `A ⊆ F_2^n` of bounded doubling, learns an explicit basis of a
//! subspace `V` with `|V| ≤ |A|` such that a small number of translates of
//! `V` covers `A`, and verifies that cover by enumeration.
//!
//! Module map:
//!
//! - [`gf2core`] — packed bit vectors, bit matrices, spans, kernels and
//!   restricted inverses over `F_2`.
//! - [`setops`] — sumsets, doubling constants, additive energy, Freiman
//!   isomorphism checks and the greedy Ruzsa covering construction.
//! - [`access`] — the membership/sample oracle model, coset-query access to
//!   a dense model, and planted instance generators.
//! - [`quadfit`] — Walsh–Hadamard machinery and two quadratic-correlation
//!   backends sharing one contract.
//! - [`pfr`] — the end-to-end cover-learning pipeline with query accounting
//!   and verified output.
//! - [`homo`] — homomorphism testing and structured approximate
//!   homomorphism decomposition for explicit function tables.

pub mod access;
pub mod gf2core;
pub mod pfr;
pub mod quadfit;
pub mod setops;

pub use gf2core::{AffineMap, BitMat, BitVec, LinearMap, Subspace};
pub use setops::PointSet;
