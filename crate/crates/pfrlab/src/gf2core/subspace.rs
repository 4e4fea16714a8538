use serde::{Deserialize, Serialize};

use super::{check_dim, BitVec, Gf2Error};

/// A subspace of `F_2^n`, stored as a reduced row-echelon basis.
///
/// Basis rows are kept in strictly decreasing pivot order (pivot = highest
/// set bit) and every pivot bit is cleared from all other rows. This makes
/// the representation canonical: two subspaces are equal iff their bases are
/// equal, and membership is a single reduction pass.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<BitVec>,
}

impl Subspace {
    /// The zero subspace of `F_2^n`.
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    /// The full space `F_2^n`.
    pub fn full(ambient: usize) -> Self {
        let mut s = Self::zero(ambient);
        for i in (0..ambient).rev() {
            s.basis.push(BitVec::unit(ambient, i));
        }
        s
    }

    /// Span of the given vectors. All vectors must share one ambient
    /// dimension; the empty list spans the zero subspace of `F_2^ambient`.
    pub fn span(ambient: usize, vectors: &[BitVec]) -> Result<Self, Gf2Error> {
        let mut s = Self::zero(ambient);
        for v in vectors {
            check_dim(ambient, v.dim())?;
            s.insert(v);
        }
        Ok(s)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The canonical echelon basis, pivots strictly decreasing.
    pub fn basis(&self) -> &[BitVec] {
        &self.basis
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is in the
    /// subspace.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut r = v.clone();
        for row in &self.basis {
            let p = row.leading_bit().expect("basis rows are nonzero");
            if r.get(p) {
                r.xor_with(row);
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        v.dim() == self.ambient && self.reduce(v).is_zero()
    }

    /// Inserts a vector, keeping the basis reduced. Returns `true` if the
    /// dimension grew.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        assert_eq!(v.dim(), self.ambient, "insert of mismatched dim");
        let r = self.reduce(v);
        let Some(p) = r.leading_bit() else {
            return false;
        };
        // clear the new pivot from existing rows, then place by pivot order
        for row in self.basis.iter_mut() {
            if row.get(p) {
                row.xor_with(&r);
            }
        }
        let pos = self
            .basis
            .iter()
            .position(|row| row.leading_bit().unwrap() < p)
            .unwrap_or(self.basis.len());
        self.basis.insert(pos, r);
        true
    }

    /// All `2^dim` elements in a deterministic order, refusing dimensions
    /// above `cap` to keep the cost bounded.
    pub fn try_enumerate(&self, cap: usize) -> Result<Vec<BitVec>, Gf2Error> {
        if self.dim() > cap {
            return Err(Gf2Error::EnumerationTooLarge { dim: self.dim(), cap });
        }
        let mut out = Vec::with_capacity(1usize << self.dim());
        for mask in 0u64..(1u64 << self.dim()) {
            let mut v = BitVec::zeros(self.ambient);
            for (j, row) in self.basis.iter().enumerate() {
                if (mask >> j) & 1 == 1 {
                    v.xor_with(row);
                }
            }
            out.push(v);
        }
        Ok(out)
    }

    /// Coset representatives for `self / sub`, where `sub` must be contained
    /// in `self`. The returned transversal has `2^(dim self - dim sub)`
    /// elements and hits every coset exactly once.
    pub fn quotient_transversal(&self, sub: &Subspace, cap: usize) -> Result<Vec<BitVec>, Gf2Error> {
        check_dim(self.ambient, sub.ambient)?;
        assert!(
            sub.basis.iter().all(|b| self.contains(b)),
            "quotient_transversal: sub is not contained in self"
        );
        let mut ext = sub.clone();
        let mut added = Self::zero(self.ambient);
        for row in &self.basis {
            if ext.insert(row) {
                added.insert(row);
            }
        }
        added.try_enumerate(cap)
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} in F_2^{})", self.dim(), self.ambient)?;
        for b in &self.basis {
            write!(f, " {b}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bv(s: &str) -> BitVec {
        BitVec::parse_bitstring(s).unwrap()
    }

    #[test]
    fn empty_span_is_zero_subspace() {
        let s = Subspace::span(5, &[]).unwrap();
        assert_eq!(s.dim(), 0);
        assert!(s.contains(&BitVec::zeros(5)));
        assert!(!s.contains(&bv("00001")));
    }

    #[test]
    fn dependent_vectors_collapse() {
        // third vector is the sum of the first two
        let s = Subspace::span(3, &[bv("110"), bv("011"), bv("101")]).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&bv("101")));
        assert!(!s.contains(&bv("111")));
    }

    #[test]
    fn mixed_dims_error() {
        let err = Subspace::span(3, &[bv("110"), bv("0110")]).unwrap_err();
        assert_eq!(err, Gf2Error::DimensionMismatch { expected: 3, got: 4 });
    }

    #[test]
    fn random_spans_match_exhaustive_membership() {
        // brute-force membership oracle: enumerate all 2^8 points and check
        // that span membership agrees with reachability by XOR combinations
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut full_dim_hits = 0;
        for _ in 0..20 {
            let vecs: Vec<BitVec> = (0..50).map(|_| BitVec::random(8, &mut rng)).collect();
            let s = Subspace::span(8, &vecs).unwrap();
            if s.dim() == 8 {
                full_dim_hits += 1;
            }
            let all = s.try_enumerate(8).unwrap();
            let member: std::collections::HashSet<BitVec> = all.into_iter().collect();
            assert_eq!(member.len(), 1 << s.dim());
            for value in 0u64..256 {
                let v = BitVec::from_u64(8, value);
                assert_eq!(s.contains(&v), member.contains(&v));
            }
        }
        // 50 random vectors of dim 8 span everything essentially always
        assert!(full_dim_hits >= 19);
    }

    #[test]
    fn echelon_canonicity_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let vecs: Vec<BitVec> = (0..6).map(|_| BitVec::random(10, &mut rng)).collect();
            let s = Subspace::span(10, &vecs).unwrap();
            let again = Subspace::span(10, s.basis()).unwrap();
            assert_eq!(s, again);
            // pivots strictly decreasing, pivot bits cleared elsewhere
            let pivots: Vec<usize> = s.basis().iter().map(|b| b.leading_bit().unwrap()).collect();
            for w in pivots.windows(2) {
                assert!(w[0] > w[1]);
            }
            for (i, row) in s.basis().iter().enumerate() {
                for (j, &p) in pivots.iter().enumerate() {
                    if i != j {
                        assert!(!row.get(p));
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_transversal_hits_every_coset_once() {
        let big = Subspace::span(6, &[bv("000001"), bv("000010"), bv("000100"), bv("001000")]).unwrap();
        let sub = Subspace::span(6, &[bv("000011"), bv("000100")]).unwrap();
        let reps = big.quotient_transversal(&sub, 20).unwrap();
        assert_eq!(reps.len(), 4);
        let mut seen = std::collections::HashSet::new();
        for r in &reps {
            assert!(big.contains(r));
            let canon = sub.reduce(r);
            assert!(seen.insert(canon));
        }
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let s = Subspace::full(25);
        assert!(matches!(
            s.try_enumerate(20),
            Err(Gf2Error::EnumerationTooLarge { dim: 25, cap: 20 })
        ));
    }
}
