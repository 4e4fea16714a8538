use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::gf2core::{BitMat, BitVec};

/// A quadratic polynomial over `F_2^d` in strictly-upper-triangular form.
///
/// Over `F_2` we have `z_i^2 = z_i`, so diagonal terms fold into the linear
/// part and the quadratic form keeps only entries with `i < j`:
/// `q(z) = sum_(i<j) form[i,j] z_i z_j + linear.z + constant`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadPoly {
    d: usize,
    form: BitMat,
    linear: BitVec,
    constant: bool,
}

impl QuadPoly {
    /// The zero polynomial over `F_2^d`.
    pub fn zero(d: usize) -> Self {
        QuadPoly {
            d,
            form: BitMat::zeros(d, d),
            linear: BitVec::zeros(d),
            constant: false,
        }
    }

    pub fn from_parts(form: BitMat, linear: BitVec, constant: bool) -> Self {
        let d = linear.dim();
        assert_eq!(form.rows(), d);
        assert_eq!(form.cols(), d);
        for i in 0..d {
            for j in 0..=i {
                assert!(!form.get(i, j), "form must be strictly upper triangular");
            }
        }
        QuadPoly { d, form, linear, constant }
    }

    /// Uniformly random polynomial, for tests.
    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        let mut q = Self::zero(d);
        for i in 0..d {
            for j in i + 1..d {
                if rng.gen() {
                    q.form.set(i, j, true);
                }
            }
        }
        q.linear = BitVec::random(d, rng);
        q.constant = rng.gen();
        q
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn form(&self) -> &BitMat {
        &self.form
    }

    pub fn linear(&self) -> &BitVec {
        &self.linear
    }

    pub fn constant(&self) -> bool {
        self.constant
    }

    pub fn set_form(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < j, "form entries live strictly above the diagonal");
        self.form.set(i, j, value);
    }

    pub fn set_linear(&mut self, linear: BitVec) {
        assert_eq!(linear.dim(), self.d);
        self.linear = linear;
    }

    pub fn set_constant(&mut self, c: bool) {
        self.constant = c;
    }

    /// Evaluates `q(z)` in `F_2`.
    pub fn eval(&self, z: &BitVec) -> bool {
        debug_assert_eq!(z.dim(), self.d);
        let mut acc = self.constant ^ self.linear.dot(z);
        // row i of the form holds only entries j > i, so the contribution of
        // all pairs through i is z_i * <row_i, z>
        for i in z.support() {
            acc ^= self.form.row(i).dot(z);
        }
        acc
    }

    /// `(-1)^q(z)` as a signed integer.
    pub fn sign(&self, z: &BitVec) -> i64 {
        if self.eval(z) {
            -1
        } else {
            1
        }
    }
}

/// Four-point second difference `B(x, y) = q(x,y) + q(x,0) + q(0,y) + q(0,0)`
/// under the `(x, y)` split; bilinear for every quadratic `q`.
pub fn second_difference(q: &QuadPoly, x: &BitVec, y: &BitVec) -> bool {
    let zero_x = BitVec::zeros(x.dim());
    let zero_y = BitVec::zeros(y.dim());
    q.eval(&x.concat(y)) ^ q.eval(&x.concat(&zero_y)) ^ q.eval(&zero_x.concat(y)) ^ q.eval(&zero_x.concat(&zero_y))
}

/// Reads the bilinear cross block of `q` under the `(x, y)` split: the
/// `n x m` matrix `M = A_12^T + A_21` with `B(x, y) = (Mx).y`.
pub fn quad_to_bilinear(q: &QuadPoly, m: usize, n: usize) -> BitMat {
    assert_eq!(q.dim(), m + n, "split dims must cover the polynomial");
    let mut mat = BitMat::zeros(n, m);
    for i in 0..n {
        for j in 0..m {
            let bit = q.form().get(j, m + i) ^ q.form().get(m + i, j);
            mat.set(i, j, bit);
        }
    }
    #[cfg(debug_assertions)]
    for i in 0..n {
        for j in 0..m {
            let x = BitVec::unit(m, j);
            let y = BitVec::unit(n, i);
            debug_assert_eq!(second_difference(q, &x, &y), mat.get(i, j));
        }
    }
    mat
}
