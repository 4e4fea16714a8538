use rand::Rng;
use serde::{Deserialize, Serialize};

use super::AccessError;
use crate::gf2core::{BitMat, BitVec, Subspace};
use crate::setops::{doubling_constant, PointSet};

/// Parameters of a planted cover instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlantedParams {
    pub n: usize,
    pub dim_v: usize,
    pub cosets: usize,
    pub noise: f64,
}

/// A set built as a union of cosets of a hidden subspace, optionally
/// perturbed, with the ground truth and the exact doubling constant
/// recorded.
#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub set: PointSet,
    pub hidden_v: Subspace,
    pub hidden_reps: Vec<BitVec>,
    pub params: PlantedParams,
    pub doubling: u64,
}

/// Plants `c` disjoint cosets of a random dim-`dim_v` subspace of `F_2^n`,
/// then replaces `floor(noise * |A|)` points with uniform points outside the
/// planted union, keeping `|A|` fixed.
pub fn gen_planted_cover<R: Rng + ?Sized>(
    n: usize,
    dim_v: usize,
    cosets: usize,
    noise: f64,
    rng: &mut R,
) -> Result<PlantedInstance, AccessError> {
    if dim_v > n || dim_v > 20 {
        return Err(AccessError::ParamRange(format!(
            "dim_v = {dim_v} must satisfy dim_v <= n = {n} and dim_v <= 20"
        )));
    }
    if cosets == 0 || (n - dim_v) < 63 && cosets as u64 > 1u64 << (n - dim_v) {
        return Err(AccessError::ParamRange(format!(
            "cosets = {cosets} does not fit in 2^(n - dim_v)"
        )));
    }
    if !(0.0..1.0).contains(&noise) {
        return Err(AccessError::ParamRange(format!("noise = {noise} must lie in [0, 1)")));
    }

    let mut v = Subspace::zero(n);
    while v.dim() < dim_v {
        v.insert(&BitVec::random(n, rng));
    }
    let mut reps: Vec<BitVec> = Vec::with_capacity(cosets);
    while reps.len() < cosets {
        let r = BitVec::random(n, rng);
        if reps.iter().all(|p| !v.contains(&p.xor(&r))) {
            reps.push(r);
        }
    }

    let coset_points = v.try_enumerate(20).expect("dim_v <= 20");
    let mut set = PointSet::new(n);
    for r in &reps {
        for p in &coset_points {
            set.insert(r.xor(p));
        }
    }

    let planted_size = set.len();
    let replace = (noise * planted_size as f64).floor() as usize;
    if replace > 0 {
        let in_union = |p: &BitVec| reps.iter().any(|r| v.contains(&p.xor(r)));
        // distinct planted victims via a partial shuffle
        let mut victims: Vec<BitVec> = set.iter().cloned().collect();
        for i in 0..replace {
            let j = rng.gen_range(i..victims.len());
            victims.swap(i, j);
        }
        for victim in &victims[..replace] {
            set.remove(victim);
            loop {
                let fresh = BitVec::random(n, rng);
                if !in_union(&fresh) && !set.contains(&fresh) {
                    set.insert(fresh);
                    break;
                }
            }
        }
        debug_assert_eq!(set.len(), planted_size);
    }

    let doubling = doubling_constant(&set)?;
    Ok(PlantedInstance {
        set,
        hidden_v: v,
        hidden_reps: reps,
        params: PlantedParams { n, dim_v, cosets, noise },
        doubling,
    })
}

/// Ground truth of a planted affine table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AffineTruth {
    pub matrix: BitMat,
    pub offset: BitVec,
    /// Number of points forced to agree with `Mx + v` (coincidental extra
    /// agreements possible).
    pub planted_agreements: u64,
}

/// A full table `f : F_2^m -> F_2^n` agreeing with a hidden affine map on at
/// least `ceil(rho * 2^m)` points, uniformly random elsewhere.
pub fn gen_planted_affine<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    rho: f64,
    rng: &mut R,
) -> Result<(Vec<BitVec>, AffineTruth), AccessError> {
    if !(0.0 < rho && rho <= 1.0) {
        return Err(AccessError::ParamRange(format!("rho = {rho} must lie in (0, 1]")));
    }
    if m > 24 {
        return Err(AccessError::ParamRange(format!("m = {m} too large for a full table")));
    }
    let size = 1usize << m;
    let matrix = BitMat::random(n, m, rng);
    let offset = BitVec::random(n, rng);
    let want = ((rho * size as f64).ceil() as usize).min(size);
    // partial Fisher-Yates: the first `want` entries are the agreement set
    let mut order: Vec<u32> = (0..size as u32).collect();
    for i in 0..want {
        let j = rng.gen_range(i..size);
        order.swap(i, j);
    }
    let mut agree = vec![false; size];
    for &i in &order[..want] {
        agree[i as usize] = true;
    }
    let mut table = Vec::with_capacity(size);
    for (xv, &planted) in agree.iter().enumerate() {
        let x = BitVec::from_u64(m, xv as u64);
        if planted {
            let mut y = matrix.apply(&x)?;
            y.xor_with(&offset);
            table.push(y);
        } else {
            table.push(BitVec::random(n, rng));
        }
    }
    Ok((
        table,
        AffineTruth { matrix, offset, planted_agreements: want as u64 },
    ))
}

/// Ground truth of a small-image decomposition instance.
#[derive(Debug, Clone)]
pub struct SmallImageTruth {
    pub matrix: BitMat,
    /// Subgroup `W` containing `Im(h)`; its size is at most `img_k` and the
    /// coboundary `Δf` stays inside `W`.
    pub image_subgroup: Subspace,
    pub quotient: BitMat,
    pub lookup: Vec<BitVec>,
}

/// A full table `f(x) = Mx + h(x)` where `h = φ ∘ L` factors through a small
/// quotient and takes values in a subgroup `W` with `|W| <= img_k`. Since
/// `W` is closed under addition, `|Δf| <= |W| <= img_k <= img_k^2` exactly.
pub fn gen_small_image<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    img_k: usize,
    rng: &mut R,
) -> Result<(Vec<BitVec>, SmallImageTruth), AccessError> {
    if img_k == 0 {
        return Err(AccessError::ParamRange("img_k must be at least 1".into()));
    }
    if m > 24 {
        return Err(AccessError::ParamRange(format!("m = {m} too large for a full table")));
    }
    let s = (img_k as f64).log2().floor() as usize; // |W| = 2^s <= img_k
    let mut w = Subspace::zero(n);
    while w.dim() < s.min(n) {
        w.insert(&BitVec::random(n, rng));
    }
    // quotient dimension: at least 2 when nontrivial so phi can be nonlinear
    let r = if s == 0 { 0 } else { (s + 2).min(m) };
    let quotient = loop {
        let q = BitMat::random(r, m, rng);
        if q.rank() == r {
            break q;
        }
    };
    let w_points = w.try_enumerate(20).expect("s is tiny");
    let mut lookup: Vec<BitVec> = Vec::with_capacity(1 << r);
    lookup.push(BitVec::zeros(n)); // phi(0) = 0 so img_k = 1 gives a linear f
    for _ in 1..(1usize << r) {
        lookup.push(w_points[rng.gen_range(0..w_points.len())].clone());
    }

    let matrix = BitMat::random(n, m, rng);
    let mut table = Vec::with_capacity(1usize << m);
    for xv in 0..(1usize << m) {
        let x = BitVec::from_u64(m, xv as u64);
        let mut y = matrix.apply(&x)?;
        y.xor_with(&lookup[quotient.apply(&x)?.as_index()]);
        table.push(y);
    }
    Ok((
        table,
        SmallImageTruth { matrix, image_subgroup: w, quotient, lookup },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_coset_is_a_coset() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let inst = gen_planted_cover(10, 5, 1, 0.0, &mut rng).unwrap();
        assert_eq!(inst.set.len(), 32);
        assert_eq!(inst.doubling, 1);
    }

    #[test]
    fn four_cosets_have_small_doubling() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let inst = gen_planted_cover(16, 8, 4, 0.0, &mut rng).unwrap();
        assert_eq!(inst.set.len(), 4 * 256);
        assert!(inst.doubling <= 10, "doubling {} too large", inst.doubling);
        // ground truth covers the noise-free instance
        let cert = crate::setops::verify_cover(&inst.set, &inst.hidden_v, &inst.hidden_reps);
        assert!(cert.covered);
    }

    #[test]
    fn noise_preserves_cardinality_and_leaves_the_union() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inst = gen_planted_cover(12, 5, 3, 0.2, &mut rng).unwrap();
        assert_eq!(inst.set.len(), 3 * 32);
        let outside = inst
            .set
            .iter()
            .filter(|p| {
                inst.hidden_reps
                    .iter()
                    .all(|r| !inst.hidden_v.contains(&p.xor(r)))
            })
            .count();
        assert_eq!(outside, (0.2_f64 * 96.0).floor() as usize);
    }

    #[test]
    fn planted_affine_agreement_is_at_least_rho() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (table, truth) = gen_planted_affine(8, 6, 0.6, &mut rng).unwrap();
        let agreements = table
            .iter()
            .enumerate()
            .filter(|(xv, y)| {
                let x = BitVec::from_u64(8, *xv as u64);
                let mut e = truth.matrix.apply(&x).unwrap();
                e.xor_with(&truth.offset);
                e == **y
            })
            .count() as u64;
        assert!(agreements >= truth.planted_agreements);
        assert_eq!(truth.planted_agreements, (0.6f64 * 256.0).ceil() as u64);
    }

    #[test]
    fn rho_one_is_exactly_affine() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (table, truth) = gen_planted_affine(6, 4, 1.0, &mut rng).unwrap();
        for (xv, y) in table.iter().enumerate() {
            let x = BitVec::from_u64(6, xv as u64);
            let mut e = truth.matrix.apply(&x).unwrap();
            e.xor_with(&truth.offset);
            assert_eq!(&e, y);
        }
    }

    #[test]
    fn small_image_structure_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for img_k in [1usize, 2, 4, 8] {
            let (table, truth) = gen_small_image(7, 5, img_k, &mut rng).unwrap();
            // image of h is inside W, so |Im h| <= img_k
            let mut h_image = std::collections::HashSet::new();
            for (xv, y) in table.iter().enumerate() {
                let x = BitVec::from_u64(7, xv as u64);
                let h = y.xor(&truth.matrix.apply(&x).unwrap());
                assert!(truth.image_subgroup.contains(&h));
                h_image.insert(h);
            }
            assert!(h_image.len() <= img_k);
            if img_k == 1 {
                assert_eq!(h_image.len(), 1);
                assert!(h_image.contains(&BitVec::zeros(5)));
            }
        }
    }

    #[test]
    fn parameter_errors_are_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(gen_planted_cover(4, 6, 1, 0.0, &mut rng).is_err());
        assert!(gen_planted_cover(6, 5, 4, 0.0, &mut rng).is_err());
        assert!(gen_planted_affine(6, 4, 0.0, &mut rng).is_err());
        assert!(gen_small_image(6, 4, 0, &mut rng).is_err());
    }
}
