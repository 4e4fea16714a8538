use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_dim, BitMat, BitVec, Gf2Error, Subspace};

/// A linear map `F_2^n -> F_2^m`, represented by its `m x n` matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearMap {
    matrix: BitMat,
}

impl LinearMap {
    pub fn new(matrix: BitMat) -> Self {
        LinearMap { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        LinearMap { matrix: BitMat::identity(dim) }
    }

    pub fn domain_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn codomain_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &BitMat {
        &self.matrix
    }

    pub fn apply(&self, x: &BitVec) -> Result<BitVec, Gf2Error> {
        self.matrix.apply(x)
    }
}

/// An affine map `x -> linear * x + offset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMap {
    pub linear: BitMat,
    pub offset: BitVec,
}

impl AffineMap {
    pub fn new(linear: BitMat, offset: BitVec) -> Self {
        assert_eq!(linear.rows(), offset.dim(), "offset must live in the codomain");
        AffineMap { linear, offset }
    }

    pub fn apply(&self, x: &BitVec) -> Result<BitVec, Gf2Error> {
        let mut y = self.linear.apply(x)?;
        y.xor_with(&self.offset);
        Ok(y)
    }

    /// The image of the whole domain as an affine translate's direction
    /// space: `apply(x) + apply(0)` is linear in `x`.
    pub fn direction_image(&self) -> Subspace {
        self.linear.image_basis()
    }
}

/// Draws a linear map `F_2^n -> F_2^m` whose images of the echelon basis of
/// `U` are independent uniform points of `F_2^m`. Coordinates outside the
/// pivot set of `U` map to zero, so the map is the zero map when `U` is the
/// zero subspace.
pub fn random_linear_map<R: Rng + ?Sized>(u: &Subspace, m: usize, rng: &mut R) -> LinearMap {
    let n = u.ambient();
    let mut matrix = BitMat::zeros(m, n);
    for b in u.basis() {
        let pivot = b.leading_bit().expect("basis rows are nonzero");
        let image = BitVec::random(m, rng);
        for i in image.support() {
            matrix.set(i, pivot, true);
        }
    }
    LinearMap { matrix }
}

/// Preimage lookup for a linear map restricted to a subspace `U`.
///
/// Construction runs one elimination over the images of `U`'s basis; each
/// `preimage` call is a single reduction pass. The full preimage of a point
/// `x` in the restricted image is `preimage(x) + kernel`.
#[derive(Clone, Debug)]
pub struct RestrictedInverse {
    codomain_dim: usize,
    kernel: Subspace,
    /// (reduced image vector, accumulated domain combination), pivots of the
    /// image vectors strictly decreasing.
    pivots: Vec<(BitVec, BitVec)>,
}

impl RestrictedInverse {
    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    /// Some `u` in `U` with `pi(u) = x`, or `None` when `x` is outside the
    /// image of the restriction.
    pub fn preimage(&self, x: &BitVec) -> Result<Option<BitVec>, Gf2Error> {
        check_dim(self.codomain_dim, x.dim())?;
        let mut r = x.clone();
        let mut combo = BitVec::zeros(self.kernel.ambient());
        for (img, dom) in &self.pivots {
            let p = img.leading_bit().unwrap();
            if r.get(p) {
                r.xor_with(img);
                combo.xor_with(dom);
            }
        }
        if r.is_zero() {
            Ok(Some(combo))
        } else {
            Ok(None)
        }
    }
}

/// Builds the restricted inverse of `pi` on `U`, together with the kernel of
/// the restriction.
pub fn restricted_inverse(pi: &LinearMap, u: &Subspace) -> Result<RestrictedInverse, Gf2Error> {
    check_dim(pi.domain_dim(), u.ambient())?;
    let mut pivots: Vec<(BitVec, BitVec)> = Vec::new();
    let mut kernel = Subspace::zero(u.ambient());
    for b in u.basis() {
        let mut img = pi.apply(b)?;
        let mut dom = b.clone();
        for (pimg, pdom) in &pivots {
            let p = pimg.leading_bit().unwrap();
            if img.get(p) {
                img.xor_with(pimg);
                dom.xor_with(pdom);
            }
        }
        match img.leading_bit() {
            Some(p) => {
                let pos = pivots
                    .iter()
                    .position(|(pi_img, _)| pi_img.leading_bit().unwrap() < p)
                    .unwrap_or(pivots.len());
                pivots.insert(pos, (img, dom));
            }
            None => {
                // combination of independent basis vectors, so dom != 0
                kernel.insert(&dom);
            }
        }
    }
    Ok(RestrictedInverse {
        codomain_dim: pi.codomain_dim(),
        kernel,
        pivots,
    })
}
