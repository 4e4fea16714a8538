//! Finite-set additive combinatorics over `F_2^n`: sumsets, doubling
//! constants, additive energy, Freiman-isomorphism checks, the greedy Ruzsa
//! covering construction, and exact sanity checks of the classical
//! inequalities.

mod cover;
mod energy;
mod pointset;

pub use cover::{ruzsa_cover, verify_cover, CoverCertificate};
pub use energy::{additive_energy, additive_energy_via_wht, EnergyProfile};
pub use pointset::{doubling_constant, iterated_sumset, sumset, sumset_with_budget, PointSet};

use thiserror::Error;

use crate::gf2core::{BitVec, Gf2Error, LinearMap, Subspace};

/// Default cap on the number of points a sumset may produce.
pub const SUMSET_BUDGET_DEFAULT: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SetError {
    #[error("operation requires a nonempty set")]
    EmptyInput,
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error("sumset exceeded the budget of {budget} points")]
    BudgetExceeded { budget: usize },
    #[error("input size {size} exceeds the cap {cap} for exhaustive checking")]
    CapExceeded { size: usize, cap: usize },
}

/// Outcome of a Freiman-isomorphism check for a linear map on a set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FreimanCheck {
    Isomorphism,
    /// A nonzero `x` in `4A` with `pi(x) = 0`.
    Violation { witness: BitVec },
}

impl FreimanCheck {
    pub fn is_iso(&self) -> bool {
        matches!(self, FreimanCheck::Isomorphism)
    }
}

/// Kernel criterion for a linear map to be a Freiman isomorphism on `A`:
/// `pi` is one iff `pi(x) != 0` for every nonzero `x` in `4A`. Returns a
/// witness on failure. `4A` is materialized as `2(2A)` under the sumset
/// budget.
pub fn freiman_iso_check(
    pi: &LinearMap,
    a: &PointSet,
    budget: usize,
) -> Result<FreimanCheck, SetError> {
    let four_a = iterated_sumset_with_budget(a, 4, budget)?;
    for x in four_a.iter() {
        if !x.is_zero() && pi.apply(x)?.is_zero() {
            return Ok(FreimanCheck::Violation { witness: x.clone() });
        }
    }
    Ok(FreimanCheck::Isomorphism)
}

pub(crate) fn iterated_sumset_with_budget(
    a: &PointSet,
    k: u32,
    budget: usize,
) -> Result<PointSet, SetError> {
    assert!(k >= 1, "k-fold sumset needs k >= 1");
    if k == 1 {
        return Ok(a.clone());
    }
    if k % 2 == 0 {
        let half = iterated_sumset_with_budget(a, k / 2, budget)?;
        sumset_with_budget(&half, &half, budget)
    } else {
        let rest = iterated_sumset_with_budget(a, k - 1, budget)?;
        sumset_with_budget(&rest, a, budget)
    }
}

/// Exhaustive quadruple-level check of the isomorphism definition
/// `a+b = c+d  <=>  phi(a)+phi(b) = phi(c)+phi(d)` for an arbitrary map,
/// capped at `|A| <= cap` (the loop is quartic).
pub fn freiman_iso_check_quadruples<F>(
    phi: F,
    a: &PointSet,
    cap: usize,
) -> Result<bool, SetError>
where
    F: Fn(&BitVec) -> BitVec,
{
    if a.len() > cap {
        return Err(SetError::CapExceeded { size: a.len(), cap });
    }
    let points: Vec<&BitVec> = a.iter().collect();
    let images: Vec<BitVec> = points.iter().map(|p| phi(p)).collect();
    for (i, x1) in points.iter().enumerate() {
        for (j, x2) in points.iter().enumerate() {
            let s = x1.xor(x2);
            let si = images[i].xor(&images[j]);
            for (k, x3) in points.iter().enumerate() {
                for (l, x4) in points.iter().enumerate() {
                    let lhs = s == x3.xor(x4);
                    let rhs = si == images[k].xor(&images[l]);
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Exact evaluation of the classical inequalities for a set with doubling
/// constant `k`. Each bound is a theorem, so `all_hold` is expected to be
/// true on every input; a false anywhere indicates a bug upstream.
#[derive(Debug, Clone)]
pub struct BoundsReport {
    pub set_size: u64,
    pub doubling: u64,
    pub two_a_size: u64,
    pub four_a_size: u64,
    /// `|4A| <= K^4 |A|`
    pub plunnecke_holds: bool,
    pub span_dim: usize,
    /// `|span(A)| <= 2^(2K)/(2K) * |A|`
    pub span_bound_holds: bool,
    pub energy: u128,
    /// `|A|^4 / |2A| <= E(A) <= |A|^3`
    pub energy_bounds_hold: bool,
}

impl BoundsReport {
    pub fn all_hold(&self) -> bool {
        self.plunnecke_holds && self.span_bound_holds && self.energy_bounds_hold
    }
}

/// Checks Plünnecke's inequality, the Freiman–Ruzsa span bound, and the
/// Cauchy–Schwarz energy bounds on `A` with doubling constant `k`.
pub fn sanity_bounds(a: &PointSet, k: u64) -> Result<BoundsReport, SetError> {
    if a.is_empty() {
        return Err(SetError::EmptyInput);
    }
    let size = a.len() as u128;
    let two_a = sumset(a, a)?;
    let four_a = sumset(&two_a, &two_a)?;
    let plunnecke_holds = (four_a.len() as u128) <= (k as u128).pow(4) * size;

    let span = Subspace::span(a.ambient(), &a.iter().cloned().collect::<Vec<_>>())?;
    // |span| * 2K <= 2^(2K) * |A|, compared in saturating u128
    let lhs = (1u128 << span.dim().min(100)) .saturating_mul(2 * k as u128);
    let rhs = if 2 * k >= 100 {
        u128::MAX
    } else {
        (1u128 << (2 * k)).saturating_mul(size)
    };
    let span_bound_holds = lhs <= rhs;

    let profile = additive_energy(a)?;
    let energy = profile.energy;
    let energy_bounds_hold =
        energy * two_a.len() as u128 >= size.pow(4) && energy <= size.pow(3);

    Ok(BoundsReport {
        set_size: a.len() as u64,
        doubling: k,
        two_a_size: two_a.len() as u64,
        four_a_size: four_a.len() as u64,
        plunnecke_holds,
        span_dim: span.dim(),
        span_bound_holds,
        energy,
        energy_bounds_hold,
    })
}
