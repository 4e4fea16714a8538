use super::QuadfitError;
use crate::gf2core::BitVec;

/// In-place fast Walsh–Hadamard transform over `F_2^d` in exact integer
/// arithmetic. After the call, `values[z] = sum_x input[x] * (-1)^(z.x)`.
/// Applying it twice multiplies the input by `2^d`.
pub fn wht_inplace(values: &mut [i64]) -> Result<(), QuadfitError> {
    let len = values.len();
    if len == 0 || !len.is_power_of_two() {
        return Err(QuadfitError::BadTableLength(len));
    }
    let mut dist = 1;
    while dist < len {
        for block in (0..len).step_by(dist * 2) {
            for i in block..block + dist {
                let (a, b) = (values[i], values[i + dist]);
                values[i] = a + b;
                values[i + dist] = a - b;
            }
        }
        dist *= 2;
    }
    Ok(())
}

/// The Walsh spectrum of a table over `F_2^d`.
///
/// Coefficients are stored unnormalized: `raw(z) = sum_x h(x)(-1)^(z.x)`,
/// so the analytic coefficient is `raw(z) / 2^d`. Parseval holds exactly in
/// integers: `sum_z raw(z)^2 = 2^d * sum_x h(x)^2`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    d: usize,
    raw: Vec<i64>,
}

impl Spectrum {
    /// Transforms a value table of length `2^d`.
    pub fn from_table(values: &[i64]) -> Result<Self, QuadfitError> {
        let mut raw = values.to_vec();
        wht_inplace(&mut raw)?;
        Ok(Spectrum { d: raw.len().trailing_zeros() as usize, raw })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn raw(&self, z: usize) -> i64 {
        self.raw[z]
    }

    pub fn raw_table(&self) -> &[i64] {
        &self.raw
    }

    /// Normalized coefficient `E_x h(x)(-1)^(z.x)`.
    pub fn coefficient(&self, z: &BitVec) -> f64 {
        self.raw[z.as_index()] as f64 / (1u64 << self.d) as f64
    }

    /// The frequency with the largest absolute raw coefficient; ties resolve
    /// to the numerically smallest frequency.
    pub fn heaviest(&self) -> (usize, i64) {
        let mut best = (0usize, self.raw[0]);
        for (z, &w) in self.raw.iter().enumerate().skip(1) {
            if w.abs() > best.1.abs() {
                best = (z, w);
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Reference implementation: the quadratic-time transform straight from
    /// the definition.
    fn naive_wht(values: &[i64]) -> Vec<i64> {
        let len = values.len();
        (0..len)
            .map(|z| {
                (0..len)
                    .map(|x| {
                        let sign = if (z & x).count_ones() % 2 == 1 { -1 } else { 1 };
                        sign * values[x]
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn character_gives_one_hot_spectrum() {
        for d in 1..=6 {
            let len = 1usize << d;
            for a in 0..len {
                let table: Vec<i64> = (0..len)
                    .map(|y| if (a & y).count_ones() % 2 == 1 { -1 } else { 1 })
                    .collect();
                let spec = Spectrum::from_table(&table).unwrap();
                for z in 0..len {
                    assert_eq!(spec.raw(z), if z == a { len as i64 } else { 0 });
                }
            }
        }
    }

    #[test]
    fn constant_one_concentrates_at_zero() {
        let spec = Spectrum::from_table(&[1; 32]).unwrap();
        assert_eq!(spec.raw(0), 32);
        assert!(spec.raw_table()[1..].iter().all(|&w| w == 0));
    }

    #[test]
    fn matches_naive_dft_up_to_d8() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for d in 1..=8 {
            let len = 1usize << d;
            let table: Vec<i64> = (0..len).map(|_| if rng.gen() { 1 } else { -1 }).collect();
            let mut fast = table.clone();
            wht_inplace(&mut fast).unwrap();
            assert_eq!(fast, naive_wht(&table));
        }
    }

    #[test]
    fn involution_and_exact_parseval_at_d10() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let d = 10;
        let len = 1usize << d;
        let table: Vec<i64> = (0..len).map(|_| if rng.gen() { 1 } else { -1 }).collect();
        let mut once = table.clone();
        wht_inplace(&mut once).unwrap();
        let energy_in: i64 = table.iter().map(|v| v * v).sum();
        let energy_out: i64 = once.iter().map(|v| v * v).sum();
        assert_eq!(energy_out, (len as i64) * energy_in);
        let mut twice = once;
        wht_inplace(&mut twice).unwrap();
        let scaled: Vec<i64> = table.iter().map(|v| v * len as i64).collect();
        assert_eq!(twice, scaled);
    }

    #[test]
    fn rejects_non_power_of_two() {
        let mut v = vec![1i64; 5];
        assert!(matches!(wht_inplace(&mut v), Err(QuadfitError::BadTableLength(5))));
    }
}
