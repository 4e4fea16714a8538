use std::collections::HashMap;

use rand::Rng;

use super::{SetError, SUMSET_BUDGET_DEFAULT};
use crate::gf2core::{check_dim, BitVec};

/// Ambient dimensions up to this size use dense bit-array kernels for
/// sumsets and coverage scans; 2^20 bits is 128 KiB.
pub(crate) const DENSE_AMBIENT_MAX: usize = 20;

/// An explicit finite subset of `F_2^n` with constant-time membership and an
/// indexable, insertion-ordered element list for uniform sampling.
#[derive(Debug, Clone)]
pub struct PointSet {
    ambient: usize,
    elements: Vec<BitVec>,
    index: HashMap<BitVec, usize>,
}

impl PointSet {
    pub fn new(ambient: usize) -> Self {
        PointSet {
            ambient,
            elements: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Builds from an iterator, deduplicating and checking dimensions.
    pub fn from_iter<I: IntoIterator<Item = BitVec>>(
        ambient: usize,
        points: I,
    ) -> Result<Self, SetError> {
        let mut s = Self::new(ambient);
        for p in points {
            check_dim(ambient, p.dim()).map_err(SetError::Gf2)?;
            s.insert(p);
        }
        Ok(s)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Inserts a point; returns false if it was already present.
    pub fn insert(&mut self, p: BitVec) -> bool {
        assert_eq!(p.dim(), self.ambient, "insert of mismatched dim");
        if self.index.contains_key(&p) {
            return false;
        }
        self.index.insert(p.clone(), self.elements.len());
        self.elements.push(p);
        true
    }

    pub fn remove(&mut self, p: &BitVec) -> bool {
        let Some(at) = self.index.remove(p) else {
            return false;
        };
        self.elements.swap_remove(at);
        if at < self.elements.len() {
            self.index.insert(self.elements[at].clone(), at);
        }
        true
    }

    pub fn contains(&self, p: &BitVec) -> bool {
        self.index.contains_key(p)
    }

    pub fn get(&self, i: usize) -> &BitVec {
        &self.elements[i]
    }

    /// Iterates in deterministic insertion order.
    pub fn iter(&self) -> impl Iterator<Item = &BitVec> {
        self.elements.iter()
    }

    /// Elements sorted numerically (lexicographically on bit strings).
    pub fn sorted_elements(&self) -> Vec<BitVec> {
        let mut v = self.elements.clone();
        v.sort();
        v
    }

    /// Uniform draw; the set must be nonempty.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<&BitVec, SetError> {
        if self.is_empty() {
            return Err(SetError::EmptyInput);
        }
        Ok(&self.elements[rng.gen_range(0..self.elements.len())])
    }
}

/// Dense bit-array view of a set over a small ambient space; used internally
/// by the sumset and covering kernels.
#[derive(Clone)]
pub(crate) struct DenseSet {
    n: usize,
    words: Vec<u64>,
}

impl DenseSet {
    pub(crate) fn new(n: usize) -> Self {
        debug_assert!(n <= DENSE_AMBIENT_MAX);
        DenseSet {
            n,
            words: vec![0; (1usize << n).div_ceil(64)],
        }
    }

    pub(crate) fn from_points(s: &PointSet) -> Self {
        let mut d = Self::new(s.ambient());
        for p in s.iter() {
            d.set(p.as_index());
        }
        d
    }

    pub(crate) fn set(&mut self, z: usize) {
        self.words[z / 64] |= 1u64 << (z % 64);
    }

    pub(crate) fn contains(&self, z: usize) -> bool {
        (self.words[z / 64] >> (z % 64)) & 1 == 1
    }

    pub(crate) fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn or_with(&mut self, other: &DenseSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub(crate) fn intersects(&self, other: &DenseSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// The image of the set under `z -> z ^ a`: words are gathered at
    /// index `w ^ a_hi` and bits inside each word are permuted by the
    /// butterfly network for `b -> b ^ a_lo`.
    pub(crate) fn translate_xor(&self, a: usize) -> DenseSet {
        let a_hi = a / 64;
        let a_lo = (a % 64) as u32;
        let mut out = DenseSet {
            n: self.n,
            words: vec![0; self.words.len()],
        };
        for (w, out_word) in out.words.iter_mut().enumerate() {
            let mut word = if self.words.len() > 1 {
                self.words[w ^ a_hi]
            } else {
                self.words[0]
            };
            word = xor_permute_word(word, a_lo, self.n.min(6) as u32);
            *out_word = word;
        }
        out
    }

    pub(crate) fn iter_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }

    pub(crate) fn to_points(&self, ambient: usize) -> PointSet {
        let mut s = PointSet::new(ambient);
        for z in self.iter_indices() {
            s.insert(BitVec::from_u64(ambient, z as u64));
        }
        s
    }
}

/// Permutes the bits of a word by `b -> b ^ mask` (for the low `bits` bit
/// positions): one conditional block swap per set bit of `mask`.
fn xor_permute_word(mut word: u64, mask: u32, bits: u32) -> u64 {
    const SWAP_MASKS: [u64; 6] = [
        0x5555_5555_5555_5555,
        0x3333_3333_3333_3333,
        0x0f0f_0f0f_0f0f_0f0f,
        0x00ff_00ff_00ff_00ff,
        0x0000_ffff_0000_ffff,
        0x0000_0000_ffff_ffff,
    ];
    for k in 0..bits.min(6) {
        if (mask >> k) & 1 == 1 {
            let s = 1u32 << k;
            let m = SWAP_MASKS[k as usize];
            word = ((word >> s) & m) | ((word & m) << s);
        }
    }
    word
}

/// `A + B = {a + b}` with the default point budget.
pub fn sumset(a: &PointSet, b: &PointSet) -> Result<PointSet, SetError> {
    sumset_with_budget(a, b, SUMSET_BUDGET_DEFAULT)
}

/// `A + B` with an explicit cap on the number of output points.
pub fn sumset_with_budget(a: &PointSet, b: &PointSet, budget: usize) -> Result<PointSet, SetError> {
    check_dim(a.ambient(), b.ambient()).map_err(SetError::Gf2)?;
    let n = a.ambient();
    if n <= DENSE_AMBIENT_MAX {
        let db = DenseSet::from_points(b);
        let mut out = DenseSet::new(n);
        let full = 1usize << n;
        for p in a.iter() {
            out.or_with(&db.translate_xor(p.as_index()));
            if out.count() == full {
                break;
            }
        }
        let size = out.count();
        if size > budget {
            return Err(SetError::BudgetExceeded { budget });
        }
        return Ok(out.to_points(n));
    }
    let mut out = PointSet::new(n);
    for x in a.iter() {
        for y in b.iter() {
            out.insert(x.xor(y));
            if out.len() > budget {
                return Err(SetError::BudgetExceeded { budget });
            }
        }
    }
    Ok(out)
}

/// The `k`-fold sumset; `k = 1` returns the set itself and `4A` is computed
/// as `2(2A)`.
pub fn iterated_sumset(a: &PointSet, k: u32) -> Result<PointSet, SetError> {
    super::iterated_sumset_with_budget(a, k, SUMSET_BUDGET_DEFAULT)
}

/// The smallest integer `K` with `|A+A| <= K|A|`.
pub fn doubling_constant(a: &PointSet) -> Result<u64, SetError> {
    if a.is_empty() {
        return Err(SetError::EmptyInput);
    }
    let two_a = sumset(a, a)?;
    Ok((two_a.len() as u64).div_ceil(a.len() as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2core::Subspace;
    use crate::setops::additive_energy;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set_of(n: usize, values: &[u64]) -> PointSet {
        PointSet::from_iter(n, values.iter().map(|&v| BitVec::from_u64(n, v))).unwrap()
    }

    #[test]
    fn subspace_is_closed_under_addition() {
        let a = set_of(3, &[0b000, 0b001]);
        let s = sumset(&a, &a).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.contains(&BitVec::from_u64(3, 0)));
        assert!(s.contains(&BitVec::from_u64(3, 1)));
    }

    #[test]
    fn three_point_set_doubles_to_four() {
        let a = set_of(2, &[0b00, 0b01, 0b10]);
        let s = sumset(&a, &a).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(doubling_constant(&a).unwrap(), 2);
    }

    #[test]
    fn sparse_and_dense_paths_agree_with_pair_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let mut a = PointSet::new(10);
            while a.len() < 64 {
                a.insert(BitVec::random(10, &mut rng));
            }
            let fast = sumset(&a, &a).unwrap();
            // independent computation #1: plain pair loop
            let mut naive = std::collections::HashSet::new();
            for x in a.iter() {
                for y in a.iter() {
                    naive.insert(x.xor(y));
                }
            }
            assert_eq!(fast.len(), naive.len());
            for p in fast.iter() {
                assert!(naive.contains(p));
            }
            // independent computation #2: support of the representation counts
            let profile = additive_energy(&a).unwrap();
            assert_eq!(profile.rep_counts.len(), fast.len());
            for z in profile.rep_counts.keys() {
                assert!(fast.contains(z));
            }
        }
    }

    #[test]
    fn coset_union_doubling_is_bounded_by_pair_count() {
        // 4 disjoint cosets of a dim-6 subspace in F_2^12: K <= C(4,2)+4 = 10
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let v = loop {
            let vecs: Vec<BitVec> = (0..6).map(|_| BitVec::random(12, &mut rng)).collect();
            let s = Subspace::span(12, &vecs).unwrap();
            if s.dim() == 6 {
                break s;
            }
        };
        let mut reps: Vec<BitVec> = vec![BitVec::zeros(12)];
        while reps.len() < 4 {
            let r = BitVec::random(12, &mut rng);
            if reps.iter().all(|p| !v.contains(&p.xor(&r))) {
                reps.push(r);
            }
        }
        let mut a = PointSet::new(12);
        for r in &reps {
            for p in v.try_enumerate(6).unwrap() {
                a.insert(r.xor(&p));
            }
        }
        assert_eq!(a.len(), 4 * 64);
        let k = doubling_constant(&a).unwrap();
        assert!(k <= 10, "doubling {k} out of range");
    }

    #[test]
    fn iterated_sumset_of_one_is_identity() {
        let a = set_of(4, &[1, 2, 9]);
        let one = iterated_sumset(&a, 1).unwrap();
        assert_eq!(one.len(), a.len());
        // and 4A = 2(2A) agrees with the triple-fold route
        let four = iterated_sumset(&a, 4).unwrap();
        let two = sumset(&a, &a).unwrap();
        let three = sumset(&two, &a).unwrap();
        let four_alt = sumset(&three, &a).unwrap();
        assert_eq!(four.len(), four_alt.len());
        for p in four.iter() {
            assert!(four_alt.contains(p));
        }
    }

    #[test]
    fn budget_is_enforced_on_sparse_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut a = PointSet::new(40);
        while a.len() < 64 {
            a.insert(BitVec::random(40, &mut rng));
        }
        assert!(matches!(
            sumset_with_budget(&a, &a, 1000),
            Err(SetError::BudgetExceeded { budget: 1000 })
        ));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = set_of(4, &[1]);
        let b = set_of(5, &[1]);
        assert!(sumset(&a, &b).is_err());
    }

    #[test]
    fn sampling_is_roughly_uniform() {
        let a = set_of(3, &[0b001, 0b100]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut hits = [0u32; 2];
        for _ in 0..10_000 {
            let p = a.sample(&mut rng).unwrap();
            if p.as_index() == 0b001 {
                hits[0] += 1;
            } else {
                hits[1] += 1;
            }
        }
        for h in hits {
            assert!((h as f64 / 10_000.0 - 0.5).abs() < 0.05);
        }
        assert!(PointSet::new(3).sample(&mut rng).is_err());
    }

    #[test]
    fn translate_xor_matches_pointwise_translation() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n in [3usize, 6, 7, 10] {
            let mut s = PointSet::new(n);
            for _ in 0..(1 << (n - 1)) {
                s.insert(BitVec::random(n, &mut rng));
            }
            let d = DenseSet::from_points(&s);
            for _ in 0..10 {
                let a = rng.gen_range(0..(1usize << n));
                let t = d.translate_xor(a);
                for z in 0..(1usize << n) {
                    assert_eq!(t.contains(z), d.contains(z ^ a), "n={n} a={a} z={z}");
                }
            }
        }
    }
}
