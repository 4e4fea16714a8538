use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use rand::Rng;

use super::{FitBackend, PfrError, PipelineConfig};
use crate::access::SfQueries;
use crate::gf2core::{BitMat, BitVec};
use crate::quadfit::{
    bilinear_quad_fit, exhaustive_quad_fit, quad_to_bilinear, BilinearParams, Correlation,
    CorrelationTarget, QuadfitError,
};

/// Largest domain dimension for which the fit enumerates `F_2^m` (table
/// build and exact recount).
pub const RECOUNT_CAP: usize = 24;

/// Fit-stage configuration, normally derived from a [`PipelineConfig`].
#[derive(Debug, Clone)]
pub struct FitConfig {
    pub backend: FitBackend,
    pub exhaustive_cap: usize,
    pub offset_candidates: usize,
    pub estimator_samples: usize,
    pub tie_tolerance: Option<f64>,
    pub min_agreement: u64,
}

impl From<&PipelineConfig> for FitConfig {
    fn from(cfg: &PipelineConfig) -> Self {
        FitConfig {
            backend: cfg.backend,
            exhaustive_cap: cfg.exhaustive_cap,
            offset_candidates: cfg.offset_candidates,
            estimator_samples: cfg.estimator_samples,
            tie_tolerance: None,
            min_agreement: cfg.min_agreement,
        }
    }
}

impl FitConfig {
    pub fn new() -> Self {
        (&PipelineConfig::new(1)).into()
    }
}

impl Default for FitConfig {
    fn default() -> Self {
        Self::new()
    }
}

/// Result of the restricted-homomorphism fit.
#[derive(Debug, Clone)]
pub struct HomFit {
    /// Linear part, `n x m`.
    pub matrix: BitMat,
    /// Voted offset `v`.
    pub offset: BitVec,
    /// Exact recount of `|{x in S : f(x) = Mx + v}|`.
    pub agreement: u64,
    /// Backend-reported correlation of the fitted quadratic.
    pub correlation: Correlation,
}

/// Memoizing adapter from [`SfQueries`] to [`CorrelationTarget`].
///
/// Each domain point is profiled through the underlying oracle exactly once
/// (one `query_s`, plus one `query_f` for points of `S`); the voting and
/// recount stages replay cached profiles, so the query counters reflect one
/// enumeration pass.
pub struct CachedSf<'a, Q: SfQueries + ?Sized> {
    inner: &'a Q,
    cache: RefCell<HashMap<u64, Option<BitVec>>>,
}

impl<'a, Q: SfQueries + ?Sized> CachedSf<'a, Q> {
    pub fn new(inner: &'a Q) -> Self {
        CachedSf { inner, cache: RefCell::new(HashMap::new()) }
    }

    pub fn profile_cached(&self, x: &BitVec) -> Result<Option<BitVec>, PfrError> {
        let key = x.as_index() as u64;
        if let Some(hit) = self.cache.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let value = if self.inner.query_s(x)? {
            self.inner.query_f(x)?
        } else {
            None
        };
        self.cache.borrow_mut().insert(key, value.clone());
        Ok(value)
    }
}

impl<Q: SfQueries + ?Sized> CorrelationTarget for CachedSf<'_, Q> {
    fn split_dims(&self) -> (usize, usize) {
        (self.inner.domain_dim(), self.inner.codomain_dim())
    }

    fn eval(&self, x: &BitVec, y: &BitVec) -> Result<i64, QuadfitError> {
        let prof = self
            .profile_cached(x)
            .map_err(|e| QuadfitError::Target(e.to_string()))?;
        Ok(match prof {
            None => 0,
            Some(f) => {
                if f.dot(y) {
                    -1
                } else {
                    1
                }
            }
        })
    }

    fn profile(&self, x: &BitVec) -> Result<Option<BitVec>, QuadfitError> {
        self.profile_cached(x)
            .map_err(|e| QuadfitError::Target(e.to_string()))
    }
}

/// Recovers an affine map `x -> Mx + v` agreeing with `f` on a noticeable
/// part of `S`.
///
/// Stages: fit a quadratic against `g(x, y) = 1_S(x)(-1)^(f(x).y)` with the
/// configured backend; read the bilinear cross block `M`; draw offset
/// candidates `d(x) = f(x) + Mx` at sampled points of `S`; pick the
/// candidate maximizing an empirical agreement estimate; recount the
/// winner's agreement exactly over the whole domain. The recount is
/// authoritative — the estimator only selects the candidate.
pub fn restricted_hom_fit<Q, R>(
    sf: &Q,
    cfg: &FitConfig,
    rng: &mut R,
) -> Result<HomFit, PfrError>
where
    Q: SfQueries + ?Sized,
    R: Rng + ?Sized,
{
    let (m, n) = (sf.domain_dim(), sf.codomain_dim());
    if m > RECOUNT_CAP {
        return Err(PfrError::DomainTooLarge { m, cap: RECOUNT_CAP });
    }
    let cached = CachedSf::new(sf);

    let use_exhaustive = match cfg.backend {
        FitBackend::Exhaustive => true,
        FitBackend::Bilinear => false,
        FitBackend::Auto => m + n <= cfg.exhaustive_cap,
    };

    let (matrix, correlation) = if use_exhaustive {
        let mut table = vec![0i64; 1usize << (m + n)];
        for xv in 0..(1usize << m) {
            let x = BitVec::from_u64(m, xv as u64);
            if let Some(fx) = cached.profile_cached(&x)? {
                for yv in 0..(1usize << n) {
                    let y = BitVec::from_u64(n, yv as u64);
                    table[xv | (yv << m)] = if fx.dot(&y) { -1 } else { 1 };
                }
            }
        }
        let (q, corr) = exhaustive_quad_fit(&table, cfg.exhaustive_cap)?;
        (quad_to_bilinear(&q, m, n), corr)
    } else {
        let params = BilinearParams { tie_tolerance: cfg.tie_tolerance };
        let fit = bilinear_quad_fit(&cached, &params)?;
        (fit.matrix, fit.correlation)
    };

    // offset voting: candidates are differences observed at sampled points
    let mut candidates: BTreeSet<BitVec> = BTreeSet::new();
    for _ in 0..cfg.offset_candidates {
        let x = BitVec::random(m, rng);
        if let Some(fx) = cached.profile_cached(&x)? {
            candidates.insert(fx.xor(&matrix.apply(&x)?));
        }
    }
    if candidates.is_empty() {
        return Err(PfrError::DensificationFailure { samples: cfg.offset_candidates });
    }

    let mut best: Option<(u64, BitVec)> = None;
    for z in &candidates {
        let mut hits = 0u64;
        for _ in 0..cfg.estimator_samples {
            let x = BitVec::random(m, rng);
            if let Some(fx) = cached.profile_cached(&x)? {
                let mut expect = matrix.apply(&x)?;
                expect.xor_with(z);
                if fx == expect {
                    hits += 1;
                }
            }
        }
        if best.as_ref().map(|(h, _)| hits > *h).unwrap_or(true) {
            best = Some((hits, z.clone()));
        }
    }
    let offset = best.expect("candidate set is nonempty").1;

    // authoritative exact recount over the whole domain
    let mut agreement = 0u64;
    for xv in 0..(1u64 << m) {
        let x = BitVec::from_u64(m, xv);
        if let Some(fx) = cached.profile_cached(&x)? {
            let mut expect = matrix.apply(&x)?;
            expect.xor_with(&offset);
            if fx == expect {
                agreement += 1;
            }
        }
    }

    if agreement < cfg.min_agreement {
        return Err(PfrError::LowAgreement { got: agreement, want: cfg.min_agreement });
    }
    Ok(HomFit { matrix, offset, agreement, correlation })
}
