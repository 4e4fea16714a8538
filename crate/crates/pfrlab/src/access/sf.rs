use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use super::{AccessError, LocalizedOracle};
use crate::gf2core::{restricted_inverse, BitVec, LinearMap, RestrictedInverse, Subspace};

/// Query access to a set `S ⊆ F_2^m` and a partial function `f : S -> F_2^n`.
///
/// This is the interface the restricted-homomorphism fit consumes; it is
/// implemented by [`SfAccess`] (coset-query simulation through a membership
/// oracle) and by explicit function tables with `S = F_2^m`.
pub trait SfQueries {
    /// Dimension `m` of the domain of `S`.
    fn domain_dim(&self) -> usize;

    /// Dimension `n` of the codomain of `f`.
    fn codomain_dim(&self) -> usize;

    /// `1_S(x)`.
    fn query_s(&self, x: &BitVec) -> Result<bool, AccessError>;

    /// `f(x)` when `x ∈ S`, `None` otherwise.
    fn query_f(&self, x: &BitVec) -> Result<Option<BitVec>, AccessError>;
}

/// Exact call counts of an [`SfAccess`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SfCounters {
    pub query_s_calls: u64,
    pub query_f_calls: u64,
    /// Calls that actually enumerated a fiber (the queried point was in the
    /// image of the restriction); each one costs exactly `2^dim(ker)`
    /// membership queries.
    pub fiber_enumerations: u64,
}

/// Coset-query simulation of `S = pi(A')` and `f = pi^-1` restricted to `S`.
///
/// A query to `S` or to `f` enumerates the full fiber `preimage(x) + ker`
/// and spends exactly `2^dim(ker)` membership queries on the underlying
/// oracle — no early exit, so the cost accounting is exact. `query_f`
/// refuses to pick an arbitrary fiber element: finding two set elements in
/// one fiber means the Freiman isomorphism failed, and the caller is
/// expected to restart with a fresh map.
pub struct SfAccess<'a> {
    pi: LinearMap,
    inv: RestrictedInverse,
    fiber_offsets: Vec<BitVec>,
    oracle: LocalizedOracle<'a>,
    query_s_calls: AtomicU64,
    query_f_calls: AtomicU64,
    fiber_enumerations: AtomicU64,
}

/// Wires up coset-query access for `pi` restricted to `U`, refusing kernel
/// dimensions above `kernel_cap`.
pub fn make_sf_access<'a>(
    pi: LinearMap,
    u: &Subspace,
    oracle: LocalizedOracle<'a>,
    kernel_cap: usize,
) -> Result<SfAccess<'a>, AccessError> {
    let inv = restricted_inverse(&pi, u)?;
    let ker = inv.kernel();
    if ker.dim() > kernel_cap {
        return Err(AccessError::KernelCapExceeded { dim: ker.dim(), cap: kernel_cap });
    }
    let fiber_offsets = ker
        .try_enumerate(kernel_cap)
        .expect("dimension already checked against the cap");
    Ok(SfAccess {
        pi,
        inv,
        fiber_offsets,
        oracle,
        query_s_calls: AtomicU64::new(0),
        query_f_calls: AtomicU64::new(0),
        fiber_enumerations: AtomicU64::new(0),
    })
}

impl<'a> SfAccess<'a> {
    pub fn pi(&self) -> &LinearMap {
        &self.pi
    }

    pub fn kernel(&self) -> &Subspace {
        self.inv.kernel()
    }

    pub fn kernel_dim(&self) -> usize {
        self.inv.kernel().dim()
    }

    pub fn counters(&self) -> SfCounters {
        SfCounters {
            query_s_calls: self.query_s_calls.load(Ordering::Relaxed),
            query_f_calls: self.query_f_calls.load(Ordering::Relaxed),
            fiber_enumerations: self.fiber_enumerations.load(Ordering::Relaxed),
        }
    }

    pub fn oracle(&self) -> &LocalizedOracle<'a> {
        &self.oracle
    }

    /// Walks the whole fiber of `x`, collecting the set elements in it.
    fn fiber_hits(&self, x: &BitVec) -> Result<Option<Vec<BitVec>>, AccessError> {
        let Some(rep) = self.inv.preimage(x)? else {
            return Ok(None);
        };
        self.fiber_enumerations.fetch_add(1, Ordering::Relaxed);
        let mut hits = Vec::new();
        for off in &self.fiber_offsets {
            let y = rep.xor(off);
            if self.oracle.query(&y)? {
                hits.push(y);
            }
        }
        Ok(Some(hits))
    }
}

impl SfQueries for SfAccess<'_> {
    fn domain_dim(&self) -> usize {
        self.pi.codomain_dim()
    }

    fn codomain_dim(&self) -> usize {
        self.pi.domain_dim()
    }

    fn query_s(&self, x: &BitVec) -> Result<bool, AccessError> {
        self.query_s_calls.fetch_add(1, Ordering::Relaxed);
        Ok(self.fiber_hits(x)?.is_some_and(|hits| !hits.is_empty()))
    }

    fn query_f(&self, x: &BitVec) -> Result<Option<BitVec>, AccessError> {
        self.query_f_calls.fetch_add(1, Ordering::Relaxed);
        let Some(mut hits) = self.fiber_hits(x)? else {
            return Ok(None);
        };
        match hits.len() {
            0 => Ok(None),
            1 => Ok(Some(hits.pop().unwrap())),
            _ => Err(AccessError::IsoViolation {
                x: x.clone(),
                first: hits[0].clone(),
                second: hits[1].clone(),
            }),
        }
    }
}
