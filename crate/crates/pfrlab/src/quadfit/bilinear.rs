use super::{wht_inplace, Correlation, QuadPoly, QuadfitError};
use crate::gf2core::{BitMat, BitVec, Subspace};

/// Query access to a split-domain target `g : F_2^m x F_2^n -> {-1, 0, 1}`.
///
/// When the target comes from set-and-function access it has the shape
/// `g(x, y) = 1_S(x) * (-1)^(f(x).y)`, and `profile` exposes the underlying
/// `(1_S(x), f(x))` pair directly; the default derivation recovers it from
/// `n + 1` point evaluations.
pub trait CorrelationTarget {
    /// `(m, n)`: input split dimensions.
    fn split_dims(&self) -> (usize, usize);

    /// One point evaluation of `g`.
    fn eval(&self, x: &BitVec, y: &BitVec) -> Result<i64, QuadfitError>;

    /// `None` when `g(x, .) = 0`; otherwise the vector `f(x)` with
    /// `g(x, y) = (-1)^(f(x).y)`.
    fn profile(&self, x: &BitVec) -> Result<Option<BitVec>, QuadfitError> {
        let (_, n) = self.split_dims();
        if self.eval(x, &BitVec::zeros(n))? == 0 {
            return Ok(None);
        }
        let mut f = BitVec::zeros(n);
        for i in 0..n {
            if self.eval(x, &BitVec::unit(n, i))? < 0 {
                f.set(i, true);
            }
        }
        Ok(Some(f))
    }
}

/// A fully tabulated target, indexed by the concatenated point `(x, y)`.
pub struct TableTarget {
    m: usize,
    n: usize,
    values: Vec<i64>,
}

impl TableTarget {
    pub fn new(m: usize, n: usize, values: Vec<i64>) -> Self {
        assert_eq!(values.len(), 1usize << (m + n));
        TableTarget { m, n, values }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

impl CorrelationTarget for TableTarget {
    fn split_dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    fn eval(&self, x: &BitVec, y: &BitVec) -> Result<i64, QuadfitError> {
        Ok(self.values[x.concat(y).as_index()])
    }
}

/// Output of the structured backend.
#[derive(Debug, Clone)]
pub struct BilinearFit {
    /// The recovered cross matrix `M`, one row per output coordinate.
    pub matrix: BitMat,
    /// The assembled polynomial `q(x, y) = (Mx).y`.
    pub poly: QuadPoly,
    /// Exact correlation of `poly` against the target, which for profile
    /// targets equals `#{x in S : f(x) = Mx} / 2^m`.
    pub correlation: Correlation,
}

/// Tuning knobs for [`bilinear_quad_fit`].
#[derive(Debug, Clone)]
pub struct BilinearParams {
    /// Near-tie tolerance on normalized coefficients; two distinct row
    /// candidates within this gap abort the row as ambiguous. Exact ties are
    /// resolved canonically instead (see below). `None` uses the default
    /// `2^(-m/2 + 1)`.
    pub tie_tolerance: Option<f64>,
}

impl Default for BilinearParams {
    fn default() -> Self {
        BilinearParams { tie_tolerance: None }
    }
}

/// Recovers an `n x m` bilinear cross matrix from heavy Walsh coefficients:
/// for each output row `i`, the restricted table `h_i(x) = g(x, e_i)` is
/// built over `F_2^m` and the largest-magnitude coefficient's frequency
/// becomes row `i` of `M`.
///
/// Coefficients of `h_i` depend only on the functional the frequency induces
/// on `span(S)`, so exactly tied frequencies are the same functional in
/// different clothing; the row is taken as the canonical representative
/// supported on the pivot coordinates of `span(S)`. Distinct functionals
/// within the near-tie tolerance are surfaced as [`QuadfitError::AmbiguousRow`]
/// so the caller can re-randomize instead of mis-assembling.
pub fn bilinear_quad_fit<T: CorrelationTarget + ?Sized>(
    target: &T,
    params: &BilinearParams,
) -> Result<BilinearFit, QuadfitError> {
    let (m, n) = target.split_dims();
    let len = 1usize << m;

    let profiles: Vec<Option<BitVec>> = (0..len)
        .map(|xv| target.profile(&BitVec::from_u64(m, xv as u64)))
        .collect::<Result<_, _>>()?;

    let support: Vec<BitVec> = profiles
        .iter()
        .enumerate()
        .filter(|(_, p)| p.is_some())
        .map(|(xv, _)| BitVec::from_u64(m, xv as u64))
        .collect();
    let span_s = Subspace::span(m, &support).expect("support shares ambient dim");

    let tol_raw = params
        .tie_tolerance
        .unwrap_or_else(|| 2f64.powf(-(m as f64) / 2.0 + 1.0))
        * len as f64;

    let mut rows: Vec<BitVec> = Vec::with_capacity(n);
    let mut table = vec![0i64; len];
    for i in 0..n {
        for (xv, p) in profiles.iter().enumerate() {
            table[xv] = match p {
                None => 0,
                Some(f) => {
                    if f.get(i) {
                        -1
                    } else {
                        1
                    }
                }
            };
        }
        wht_inplace(&mut table).expect("table length is a power of two");

        let t1 = table.iter().map(|w| w.abs()).max().unwrap();
        // every frequency at the exact maximum, canonicalized; plus the best
        // strictly-below-maximum magnitude within tolerance, if any
        let mut canon_max: Vec<BitVec> = Vec::new();
        let mut near: Option<(BitVec, i64)> = None;
        for (z, &w) in table.iter().enumerate() {
            let freq = BitVec::from_u64(m, z as u64);
            if w.abs() == t1 {
                let c = canonicalize(&freq, &span_s);
                if !canon_max.contains(&c) {
                    canon_max.push(c);
                }
            } else if t1 > 0 && (t1 - w.abs()) as f64 <= tol_raw {
                match &near {
                    Some((_, bw)) if bw.abs() >= w.abs() => {}
                    _ => near = Some((freq, w)),
                }
            }
        }
        canon_max.sort();
        if let Some((freq2, w2)) = near {
            return Err(QuadfitError::AmbiguousRow {
                row: i,
                first: canon_max[0].clone(),
                second: freq2,
                w1: t1,
                w2,
                m,
            });
        }
        rows.push(canon_max[0].clone());
    }

    let matrix = BitMat::from_rows(m, rows).expect("rows share dim m");
    let mut poly = QuadPoly::zero(m + n);
    for i in 0..n {
        for j in 0..m {
            if matrix.get(i, j) {
                poly.set_form(j, m + i, true);
            }
        }
    }

    // exact correlation of q(x, y) = (Mx).y against g:
    // E_(x,y) g(x,y)(-1)^((Mx).y) = #{x in S : f(x) = Mx} / 2^m
    let mut agree: i64 = 0;
    for (xv, p) in profiles.iter().enumerate() {
        if let Some(f) = p {
            let x = BitVec::from_u64(m, xv as u64);
            if &matrix.apply(&x).expect("dims match") == f {
                agree += 1;
            }
        }
    }

    Ok(BilinearFit {
        matrix,
        poly,
        correlation: Correlation::new(agree, m as u32),
    })
}

/// The canonical representative of a frequency's functional on `span(S)`:
/// supported on the pivot coordinates, with `canon(a).b_k = a.b_k` for every
/// reduced-echelon basis vector `b_k`.
fn canonicalize(freq: &BitVec, span_s: &Subspace) -> BitVec {
    let mut canon = BitVec::zeros(freq.dim());
    for b in span_s.basis() {
        if freq.dot(b) {
            canon.set(b.leading_bit().expect("basis rows are nonzero"), true);
        }
    }
    canon
}
