use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_dim, BitVec, Gf2Error, Subspace};

/// A dense matrix over `F_2`, stored row-major as packed bit vectors.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitMat {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl BitMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMat {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self, Gf2Error> {
        for r in &rows {
            check_dim(cols, r.dim())?;
        }
        Ok(BitMat { rows: rows.len(), cols, data: rows })
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        BitMat {
            rows,
            cols,
            data: (0..rows).map(|_| BitVec::random(cols, rng)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.data[i]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut BitVec {
        &mut self.data[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVec::is_zero)
    }

    /// Matrix-vector product `M x`; `x` lives in `F_2^cols`, result in
    /// `F_2^rows`.
    pub fn apply(&self, x: &BitVec) -> Result<BitVec, Gf2Error> {
        check_dim(self.cols, x.dim())?;
        let mut out = BitVec::zeros(self.rows);
        for (i, row) in self.data.iter().enumerate() {
            if row.dot(x) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> BitMat {
        let mut t = BitMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.data[r].support() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix product `self * rhs` over `F_2`.
    pub fn mul(&self, rhs: &BitMat) -> Result<BitMat, Gf2Error> {
        check_dim(self.cols, rhs.rows)?;
        let mut out = BitMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            // accumulate rows of rhs selected by row i of self
            let mut acc = BitVec::zeros(rhs.cols);
            for k in self.data[i].support() {
                acc.xor_with(&rhs.data[k]);
            }
            out.data[i] = acc;
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        Subspace::span(self.cols, &self.data)
            .expect("rows share ambient dim")
            .dim()
    }

    /// Basis of `{x : Mx = 0}` as a subspace of the domain `F_2^cols`.
    pub fn kernel_basis(&self) -> Subspace {
        // reduced row echelon over the rows; pivot columns per reduced row
        let mut pivots: Vec<usize> = Vec::new();
        let mut reduced: Vec<BitVec> = Vec::new();
        for r in &self.data {
            let mut r = r.clone();
            for (p, row) in pivots.iter().zip(&reduced) {
                if r.get(*p) {
                    r.xor_with(row);
                }
            }
            if let Some(p) = r.leading_bit() {
                for row in reduced.iter_mut() {
                    if row.get(p) {
                        row.xor_with(&r);
                    }
                }
                pivots.push(p);
                reduced.push(r);
            }
        }
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut kernel_vecs = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = BitVec::zeros(self.cols);
            v.set(free, true);
            for (p, row) in pivots.iter().zip(&reduced) {
                if row.get(free) {
                    v.set(*p, true);
                }
            }
            kernel_vecs.push(v);
        }
        Subspace::span(self.cols, &kernel_vecs).expect("kernel vectors share ambient dim")
    }

    /// Basis of the column space `{Mx}` as a subspace of `F_2^rows`.
    pub fn image_basis(&self) -> Subspace {
        let t = self.transpose();
        Subspace::span(self.rows, &t.data).expect("columns share ambient dim")
    }
}

impl std::fmt::Debug for BitMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMat({}x{})", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Independent elimination: naive boolean Gaussian elimination used as a
    /// reference, deliberately not sharing code with the implementation.
    fn naive_rank(m: &BitMat) -> usize {
        let mut a: Vec<Vec<bool>> = (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| m.get(r, c)).collect())
            .collect();
        let (nr, nc) = (m.rows(), m.cols());
        let mut rank = 0;
        for col in 0..nc {
            if let Some(pivot) = (rank..nr).find(|&r| a[r][col]) {
                a.swap(rank, pivot);
                for r in 0..nr {
                    if r != rank && a[r][col] {
                        for c in 0..nc {
                            let v = a[rank][c];
                            a[r][c] ^= v;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn identity_and_zero_ranks() {
        assert_eq!(BitMat::identity(4).rank(), 4);
        assert_eq!(BitMat::identity(4).kernel_basis().dim(), 0);
        let z = BitMat::zeros(3, 5);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.kernel_basis().dim(), 5);
        assert_eq!(z.image_basis().dim(), 0);
    }

    #[test]
    fn rank_nullity_and_transpose_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            let m = BitMat::random(6, 6, &mut rng);
            let r = m.rank();
            assert_eq!(r, naive_rank(&m));
            assert_eq!(r, m.transpose().rank());
            assert_eq!(r + m.kernel_basis().dim(), m.cols());
            assert_eq!(m.image_basis().dim(), r);
        }
        // rectangular shapes too
        for _ in 0..50 {
            let m = BitMat::random(4, 9, &mut rng);
            assert_eq!(m.rank(), naive_rank(&m));
            assert_eq!(m.rank() + m.kernel_basis().dim(), 9);
        }
    }

    #[test]
    fn kernel_vectors_map_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let m = BitMat::random(5, 8, &mut rng);
            let ker = m.kernel_basis();
            for b in ker.basis() {
                assert!(m.apply(b).unwrap().is_zero());
            }
            for v in ker.try_enumerate(8).unwrap() {
                assert!(m.apply(&v).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn image_basis_spans_all_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m = BitMat::random(7, 5, &mut rng);
            let img = m.image_basis();
            for value in 0u64..32 {
                let x = BitVec::from_u64(5, value);
                assert!(img.contains(&m.apply(&x).unwrap()));
            }
        }
    }

    #[test]
    fn mul_agrees_with_entrywise_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let a = BitMat::random(4, 6, &mut rng);
            let b = BitMat::random(6, 3, &mut rng);
            let c = a.mul(&b).unwrap();
            for i in 0..4 {
                for j in 0..3 {
                    let mut expect = false;
                    for k in 0..6 {
                        expect ^= a.get(i, k) && b.get(k, j);
                    }
                    assert_eq!(c.get(i, j), expect);
                }
            }
        }
    }

    #[test]
    fn apply_dimension_mismatch() {
        let m = BitMat::zeros(3, 5);
        let err = m.apply(&BitVec::zeros(4)).unwrap_err();
        assert_eq!(err, Gf2Error::DimensionMismatch { expected: 5, got: 4 });
    }
}
