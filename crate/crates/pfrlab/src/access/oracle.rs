use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::AccessError;
use crate::gf2core::{check_dim, BitVec, Subspace};
use crate::setops::PointSet;

/// Exact counter snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCounters {
    pub membership_queries: u64,
    pub sample_draws: u64,
}

/// Query/sample access to a hidden set `A`, with monotone counters.
///
/// `query` evaluates the characteristic function at one point and `sample`
/// draws a uniform element; each call bumps its counter by exactly one.
/// The backing set is reachable only through [`MembershipOracle::audit_set`],
/// which is for verification and never counts.
pub struct MembershipOracle {
    set: PointSet,
    membership_queries: AtomicU64,
    sample_draws: AtomicU64,
}

impl MembershipOracle {
    pub fn new(set: PointSet) -> Self {
        MembershipOracle {
            set,
            membership_queries: AtomicU64::new(0),
            sample_draws: AtomicU64::new(0),
        }
    }

    pub fn ambient(&self) -> usize {
        self.set.ambient()
    }

    /// `1_A(x)`, counted.
    pub fn query(&self, x: &BitVec) -> Result<bool, AccessError> {
        check_dim(self.set.ambient(), x.dim())?;
        self.membership_queries.fetch_add(1, Ordering::Relaxed);
        Ok(self.set.contains(x))
    }

    /// Uniform element of `A`, counted.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<BitVec, AccessError> {
        if self.set.is_empty() {
            return Err(AccessError::EmptySet);
        }
        self.sample_draws.fetch_add(1, Ordering::Relaxed);
        Ok(self.set.sample(rng).expect("set is nonempty").clone())
    }

    pub fn counters(&self) -> OracleCounters {
        OracleCounters {
            membership_queries: self.membership_queries.load(Ordering::Relaxed),
            sample_draws: self.sample_draws.load(Ordering::Relaxed),
        }
    }

    /// Verification-only view of the backing set. Does not count; the
    /// algorithmic path must not touch it.
    pub fn audit_set(&self) -> &PointSet {
        &self.set
    }
}

/// The localized view `A ∩ U`: membership in `U` is decided locally for
/// free, and only points inside `U` spend a query on the base oracle.
pub struct LocalizedOracle<'a> {
    base: &'a MembershipOracle,
    u: Subspace,
}

impl<'a> LocalizedOracle<'a> {
    pub fn new(base: &'a MembershipOracle, u: Subspace) -> Self {
        assert_eq!(base.ambient(), u.ambient());
        LocalizedOracle { base, u }
    }

    pub fn subspace(&self) -> &Subspace {
        &self.u
    }

    pub fn base(&self) -> &'a MembershipOracle {
        self.base
    }

    /// `1_(A ∩ U)(x)` at a cost of at most one base query.
    pub fn query(&self, x: &BitVec) -> Result<bool, AccessError> {
        if !self.u.contains(x) {
            check_dim(self.base.ambient(), x.dim())?;
            return Ok(false);
        }
        self.base.query(x)
    }

    /// Verification-only enumeration of `A ∩ U`.
    pub fn audit_points(&self) -> PointSet {
        let mut out = PointSet::new(self.base.ambient());
        for p in self.base.audit_set().iter() {
            if self.u.contains(p) {
                out.insert(p.clone());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_point_set() -> PointSet {
        PointSet::from_iter(4, [BitVec::from_u64(4, 3), BitVec::from_u64(4, 9)]).unwrap()
    }

    #[test]
    fn query_counts_and_answers() {
        let oracle = MembershipOracle::new(two_point_set());
        assert!(oracle.query(&BitVec::from_u64(4, 3)).unwrap());
        assert!(!oracle.query(&BitVec::from_u64(4, 4)).unwrap());
        let c = oracle.counters();
        assert_eq!(c.membership_queries, 2);
        assert_eq!(c.sample_draws, 0);
    }

    #[test]
    fn counters_read_exactly_the_call_counts() {
        let oracle = MembershipOracle::new(two_point_set());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..17 {
            oracle.query(&BitVec::random(4, &mut rng)).unwrap();
        }
        for _ in 0..9 {
            oracle.sample(&mut rng).unwrap();
        }
        let c = oracle.counters();
        assert_eq!((c.membership_queries, c.sample_draws), (17, 9));
    }

    #[test]
    fn samples_are_near_uniform_on_two_points() {
        let oracle = MembershipOracle::new(two_point_set());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut hit3 = 0u32;
        for _ in 0..10_000 {
            if oracle.sample(&mut rng).unwrap().as_index() == 3 {
                hit3 += 1;
            }
        }
        assert!((hit3 as f64 / 10_000.0 - 0.5).abs() < 0.05);
    }

    #[test]
    fn empty_sample_errors() {
        let oracle = MembershipOracle::new(PointSet::new(4));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!(matches!(oracle.sample(&mut rng), Err(AccessError::EmptySet)));
    }

    #[test]
    fn localized_oracle_spends_nothing_outside_u() {
        let oracle = MembershipOracle::new(two_point_set());
        let u = Subspace::span(4, &[BitVec::from_u64(4, 3)]).unwrap();
        let local = LocalizedOracle::new(&oracle, u);
        assert!(!local.query(&BitVec::from_u64(4, 9)).unwrap()); // 9 not in U
        assert_eq!(oracle.counters().membership_queries, 0);
        assert!(local.query(&BitVec::from_u64(4, 3)).unwrap());
        assert_eq!(oracle.counters().membership_queries, 1);
        assert_eq!(local.audit_points().len(), 1);
    }
}
