use super::{wht_inplace, Correlation, QuadPoly, QuadfitError};
use crate::gf2core::BitVec;

/// Default dimension cap for the exhaustive backend; `2^(d(d-1)/2)` forms
/// are enumerated, which is about two million at `d = 7`.
pub const EXHAUSTIVE_CAP_DEFAULT: usize = 7;

/// Finds the quadratic polynomial maximizing `|E_z g(z)(-1)^(q(z))|` by
/// enumerating every strictly-upper-triangular form and taking the best
/// linear part from one Walsh transform of the form-twisted table.
///
/// Forms are visited in Gray-code order starting from the zero form, and the
/// running maximum is only replaced on strict improvement, so exact ties
/// resolve to the earliest candidate (the zero polynomial on an all-zero
/// table). The returned correlation is exact.
pub fn exhaustive_quad_fit(g: &[i64], cap: usize) -> Result<(QuadPoly, Correlation), QuadfitError> {
    let len = g.len();
    if len == 0 || !len.is_power_of_two() {
        return Err(QuadfitError::BadTableLength(len));
    }
    let d = len.trailing_zeros() as usize;
    if d > cap {
        return Err(QuadfitError::CapExceeded { dim: d, cap });
    }

    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
        .collect();
    let npairs = pairs.len();

    let mut twisted: Vec<i64> = g.to_vec();
    let mut scratch = vec![0i64; len];
    let mut best_abs: i64 = -1;
    let mut best_mask: u64 = 0;
    let mut best_freq: usize = 0;
    let mut best_raw: i64 = 0;

    for k in 0u64..(1u64 << npairs) {
        if k > 0 {
            // Gray step: exactly one pair toggles between consecutive masks
            let bit = k.trailing_zeros() as usize;
            let (i, j) = pairs[bit];
            let sel = (1usize << i) | (1usize << j);
            for (z, v) in twisted.iter_mut().enumerate() {
                if z & sel == sel {
                    *v = -*v;
                }
            }
        }
        scratch.copy_from_slice(&twisted);
        wht_inplace(&mut scratch).expect("length already validated");
        for (z, &w) in scratch.iter().enumerate() {
            if w.abs() > best_abs {
                best_abs = w.abs();
                best_raw = w;
                best_freq = z;
                best_mask = k ^ (k >> 1);
            }
        }
    }

    let mut poly = QuadPoly::zero(d);
    for (bit, &(i, j)) in pairs.iter().enumerate() {
        if (best_mask >> bit) & 1 == 1 {
            poly.set_form(i, j, true);
        }
    }
    poly.set_linear(BitVec::from_u64(d, best_freq as u64));
    // flip the constant so the signed correlation comes out nonnegative
    poly.set_constant(best_raw < 0);
    Ok((poly, Correlation::new(best_abs, d as u32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Independent oracle: enumerate (form, linear, constant) triples and
    /// evaluate the correlation sum directly, with no Walsh transform and no
    /// Gray-code sharing.
    fn oracle_best_correlation(g: &[i64]) -> i64 {
        let d = g.len().trailing_zeros() as usize;
        let pairs: Vec<(usize, usize)> = (0..d)
            .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
            .collect();
        let mut best = 0i64;
        for mask in 0u64..(1u64 << pairs.len()) {
            let form_eval: Vec<bool> = (0..g.len())
                .map(|z| {
                    let mut acc = false;
                    for (bit, &(i, j)) in pairs.iter().enumerate() {
                        if (mask >> bit) & 1 == 1 && (z >> i) & 1 == 1 && (z >> j) & 1 == 1 {
                            acc = !acc;
                        }
                    }
                    acc
                })
                .collect();
            for a in 0..g.len() {
                let mut sum = 0i64;
                for (z, &gz) in g.iter().enumerate() {
                    let lin = ((a & z).count_ones() % 2) == 1;
                    sum += if form_eval[z] ^ lin { -gz } else { gz };
                }
                best = best.max(sum.abs());
            }
        }
        best
    }

    #[test]
    fn recovers_a_planted_quadratic_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let d = 4;
        for _ in 0..10 {
            let q0 = QuadPoly::random(d, &mut rng);
            let g: Vec<i64> = (0..1 << d)
                .map(|z| q0.sign(&BitVec::from_u64(d, z as u64)))
                .collect();
            let (q, corr) = exhaustive_quad_fit(&g, 7).unwrap();
            assert_eq!(corr.raw_abs, 1 << d);
            assert_eq!(corr.as_f64(), 1.0);
            for z in 0..(1u64 << d) {
                let zv = BitVec::from_u64(d, z);
                assert_eq!(q.eval(&zv), q0.eval(&zv), "evaluations must match on all points");
            }
        }
    }

    #[test]
    fn zero_table_returns_zero_polynomial() {
        let g = vec![0i64; 16];
        let (q, corr) = exhaustive_quad_fit(&g, 7).unwrap();
        assert_eq!(corr.raw_abs, 0);
        assert_eq!(q, QuadPoly::zero(4));
    }

    #[test]
    fn matches_independent_double_loop_at_d5() {
        let mut rng = ChaCha8Rng::seed_from_u64(90);
        for _ in 0..8 {
            let g: Vec<i64> = (0..32).map(|_| if rng.gen() { 1 } else { -1 }).collect();
            let (q, corr) = exhaustive_quad_fit(&g, 7).unwrap();
            assert_eq!(corr.raw_abs, oracle_best_correlation(&g));
            // the reported correlation is attained by the returned polynomial
            let attained: i64 = g
                .iter()
                .enumerate()
                .map(|(z, &gz)| gz * q.sign(&BitVec::from_u64(5, z as u64)))
                .sum();
            assert_eq!(attained, corr.raw_abs);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = vec![1i64; 256];
        assert!(matches!(
            exhaustive_quad_fit(&g, 7),
            Err(QuadfitError::CapExceeded { dim: 8, cap: 7 })
        ));
    }
}
