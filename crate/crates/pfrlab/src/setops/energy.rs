use std::collections::HashMap;

use super::pointset::{PointSet, DENSE_AMBIENT_MAX};
use super::SetError;
use crate::gf2core::BitVec;
use crate::quadfit::wht_inplace;

/// Additive energy of a set together with its representation counts
/// `r(z) = #{(a, b) in S^2 : a + b = z}`.
#[derive(Debug, Clone)]
pub struct EnergyProfile {
    /// `E(S) = sum_z r(z)^2`, the number of additive quadruples.
    pub energy: u128,
    /// Nonzero representation counts; the support equals `S + S`.
    pub rep_counts: HashMap<BitVec, u64>,
}

impl EnergyProfile {
    /// `sum_z r(z)` must equal `|S|^2`.
    pub fn total_pairs(&self) -> u128 {
        self.rep_counts.values().map(|&c| c as u128).sum()
    }
}

/// Exact additive energy by a pair pass over `S^2`.
pub fn additive_energy(a: &PointSet) -> Result<EnergyProfile, SetError> {
    if a.is_empty() {
        return Err(SetError::EmptyInput);
    }
    let n = a.ambient();
    let mut rep_counts = HashMap::new();
    if n <= DENSE_AMBIENT_MAX {
        let mut counts = vec![0u64; 1usize << n];
        for x in a.iter() {
            let xi = x.as_index();
            for y in a.iter() {
                counts[xi ^ y.as_index()] += 1;
            }
        }
        for (z, &c) in counts.iter().enumerate() {
            if c > 0 {
                rep_counts.insert(BitVec::from_u64(n, z as u64), c);
            }
        }
    } else {
        for x in a.iter() {
            for y in a.iter() {
                *rep_counts.entry(x.xor(y)).or_insert(0) += 1;
            }
        }
    }
    let energy = rep_counts.values().map(|&c| (c as u128) * (c as u128)).sum();
    Ok(EnergyProfile { energy, rep_counts })
}

/// Cross-check route through the Walsh spectrum of the indicator:
/// `E(S) = 2^-n * sum_z W(z)^4` exactly in integers, where `W` is the
/// unnormalized transform of `1_S`. Requires a small ambient dimension.
pub fn additive_energy_via_wht(a: &PointSet) -> Result<u128, SetError> {
    if a.is_empty() {
        return Err(SetError::EmptyInput);
    }
    let n = a.ambient();
    if n > DENSE_AMBIENT_MAX {
        return Err(SetError::CapExceeded { size: n, cap: DENSE_AMBIENT_MAX });
    }
    let mut table = vec![0i64; 1usize << n];
    for x in a.iter() {
        table[x.as_index()] = 1;
    }
    wht_inplace(&mut table).expect("table length is a power of two");
    let sum: u128 = table
        .iter()
        .map(|&w| {
            let w2 = (w as i128 * w as i128) as u128;
            w2 * w2
        })
        .sum();
    Ok(sum >> n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2core::Subspace;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn set_of(n: usize, values: &[u64]) -> PointSet {
        PointSet::from_iter(n, values.iter().map(|&v| BitVec::from_u64(n, v))).unwrap()
    }

    #[test]
    fn hand_enumerated_three_point_profile() {
        // A = {00, 01, 10}: r(00)=3, r(01)=r(10)=r(11)=2, E = 9+4+4+4 = 21
        let a = set_of(2, &[0b00, 0b01, 0b10]);
        let p = additive_energy(&a).unwrap();
        assert_eq!(p.energy, 21);
        assert_eq!(p.rep_counts[&BitVec::from_u64(2, 0)], 3);
        for z in [0b01, 0b10, 0b11] {
            assert_eq!(p.rep_counts[&BitVec::from_u64(2, z)], 2);
        }
        assert_eq!(p.total_pairs(), 9);
    }

    #[test]
    fn subspace_energy_is_size_cubed() {
        let v = Subspace::span(5, &[BitVec::unit(5, 0), BitVec::unit(5, 2), BitVec::unit(5, 4)])
            .unwrap();
        let a = PointSet::from_iter(5, v.try_enumerate(5).unwrap()).unwrap();
        let p = additive_energy(&a).unwrap();
        assert_eq!(p.energy, (a.len() as u128).pow(3));
    }

    #[test]
    fn matches_cubic_brute_force_and_wht_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..5 {
            let mut a = PointSet::new(8);
            while a.len() < 32 {
                a.insert(BitVec::random(8, &mut rng));
            }
            // brute force: count quadruples x1+x2 = x3+x4 directly
            let mut quadruples = 0u128;
            for x1 in a.iter() {
                for x2 in a.iter() {
                    for x3 in a.iter() {
                        let x4 = x1.xor(x2).xor(x3);
                        if a.contains(&x4) {
                            quadruples += 1;
                        }
                    }
                }
            }
            let p = additive_energy(&a).unwrap();
            assert_eq!(p.energy, quadruples);
            assert_eq!(additive_energy_via_wht(&a).unwrap(), quadruples);
            // bounds |S|^2 <= E <= |S|^3
            let s = a.len() as u128;
            assert!(p.energy >= s * s && p.energy <= s * s * s);
            assert_eq!(p.total_pairs(), s * s);
        }
    }

    #[test]
    fn empty_set_is_an_error() {
        assert!(additive_energy(&PointSet::new(4)).is_err());
        assert!(additive_energy_via_wht(&PointSet::new(4)).is_err());
    }
}
