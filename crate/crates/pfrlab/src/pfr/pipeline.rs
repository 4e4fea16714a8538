use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::fit::{restricted_hom_fit, FitConfig, HomFit};
use super::{derive_seed, PfrError, PipelineConfig};
use crate::access::{
    make_sf_access, LocalizedOracle, MembershipOracle, SfAccess, SfCounters,
};
use crate::gf2core::{random_linear_map, BitMat, BitVec, LinearMap, Subspace};
use crate::setops::{
    freiman_iso_check, ruzsa_cover, verify_cover, CoverCertificate, PointSet,
    SUMSET_BUDGET_DEFAULT,
};

/// Stage 1: spans `t` uniform samples and wraps the oracle into its
/// localized view `A ∩ U`. Costs `t` sample draws and no membership queries.
pub fn localize<'a, R: Rng + ?Sized>(
    oracle: &'a MembershipOracle,
    t: u64,
    rng: &mut R,
) -> Result<(Subspace, LocalizedOracle<'a>), PfrError> {
    let mut u = Subspace::zero(oracle.ambient());
    for _ in 0..t {
        let s = oracle.sample(rng)?;
        u.insert(&s);
    }
    Ok((u.clone(), LocalizedOracle::new(oracle, u)))
}

/// Stage 2: draws random linear maps `U -> F_2^m` until one passes the
/// Freiman-isomorphism kernel criterion against the localized set, then
/// wires up coset-query access. The criterion is checked exactly against
/// the enumerated `A ∩ U` when configured (desk scale); otherwise maps are
/// accepted optimistically and violations surface later as retriable
/// errors.
pub fn dense_model<'a, R: Rng + ?Sized>(
    u: &Subspace,
    oracle: &'a MembershipOracle,
    m: usize,
    cfg: &PipelineConfig,
    rng: &mut R,
) -> Result<(LinearMap, SfAccess<'a>), PfrError> {
    let attempts = cfg.iso_restarts.max(1);
    let aprime = if cfg.exact_iso_check {
        Some(LocalizedOracle::new(oracle, u.clone()).audit_points())
    } else {
        None
    };
    for _ in 0..attempts {
        let pi = random_linear_map(u, m, rng);
        let ok = match &aprime {
            Some(points) if !points.is_empty() => {
                freiman_iso_check(&pi, points, SUMSET_BUDGET_DEFAULT)?.is_iso()
            }
            _ => true,
        };
        if ok {
            let local = LocalizedOracle::new(oracle, u.clone());
            let sf = make_sf_access(pi.clone(), u, local, cfg.kernel_cap)?;
            return Ok((pi, sf));
        }
    }
    Err(PfrError::ModelFailure { attempts })
}

/// Stage 4a: a subspace of `Im(M)` of size at most `cap`, plus the span of
/// the dropped rows. Keeps the leading echelon rows and drops trailing ones
/// (lowest pivots) until `2^dim <= cap`.
pub fn extract_subspace(matrix: &BitMat, cap: u64) -> (Subspace, Subspace) {
    let img = matrix.image_basis();
    let max_dim = 63 - cap.max(1).leading_zeros() as usize;
    let keep = img.dim().min(max_dim);
    let ambient = img.ambient();
    let v = Subspace::span(ambient, &img.basis()[..keep]).expect("echelon rows share dim");
    let dropped = Subspace::span(ambient, &img.basis()[keep..]).expect("echelon rows share dim");
    (v, dropped)
}

/// Per-stage wall-clock times, milliseconds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageMillis {
    pub localize: u64,
    pub dense_model: u64,
    pub fit: u64,
    pub cover: u64,
}

/// The auditable output of one pipeline invocation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineReport {
    pub success: bool,
    pub covered: bool,
    pub n: usize,
    #[serde(rename = "K")]
    pub k: u64,
    pub m: usize,
    #[serde(rename = "dimU")]
    pub dim_u: usize,
    #[serde(rename = "dimV")]
    pub dim_v: usize,
    pub cover_size: usize,
    pub samples: u64,
    pub membership_queries: u64,
    pub sf_query_s: u64,
    pub sf_query_f: u64,
    pub sf_fiber_enumerations: u64,
    pub kernel_dim: usize,
    pub agreement: u64,
    pub restarts: usize,
    pub seed: u64,
    pub stage_ms: StageMillis,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CoverCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl PipelineReport {
    /// Copy with wall-clock fields zeroed; report files are written in this
    /// form so reruns of a manifest are byte-identical.
    pub fn canonicalized(&self) -> PipelineReport {
        let mut r = self.clone();
        r.stage_ms = StageMillis::default();
        r
    }
}

struct RunOutcome {
    m: usize,
    dim_u: usize,
    kernel_dim: usize,
    sf_counters: SfCounters,
    fit: HomFit,
    cert: CoverCertificate,
    stage_ms: StageMillis,
}

/// Runs localize → dense model → restricted-homomorphism fit → subspace
/// extraction and covering, restarting the whole chain on stage failures up
/// to the configured budget. On success the report's certificate was
/// re-verified by enumeration: coverage and `|V| <= |A|` hold
/// unconditionally.
pub fn run_pipeline(oracle: &MembershipOracle, cfg: &PipelineConfig) -> PipelineReport {
    let audit_size = oracle.audit_set().len() as u64;
    let size = cfg.set_size.unwrap_or(audit_size);
    let n = oracle.ambient();
    let m = cfg.dense_model_dim(size);
    let mut last_err: Option<PfrError> = None;

    for attempt in 0..=cfg.max_restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, attempt as u64));
        match run_once(oracle, cfg, size, audit_size, &mut rng) {
            Ok(out) => {
                let counters = oracle.counters();
                return PipelineReport {
                    success: true,
                    covered: out.cert.covered,
                    n,
                    k: cfg.k,
                    m: out.m,
                    dim_u: out.dim_u,
                    dim_v: out.cert.subspace.dim(),
                    cover_size: out.cert.cover_size,
                    samples: counters.sample_draws,
                    membership_queries: counters.membership_queries,
                    sf_query_s: out.sf_counters.query_s_calls,
                    sf_query_f: out.sf_counters.query_f_calls,
                    sf_fiber_enumerations: out.sf_counters.fiber_enumerations,
                    kernel_dim: out.kernel_dim,
                    agreement: out.fit.agreement,
                    restarts: attempt,
                    seed: cfg.seed,
                    stage_ms: out.stage_ms,
                    certificate: Some(out.cert),
                    error: None,
                };
            }
            Err(e) => last_err = Some(e),
        }
    }

    let counters = oracle.counters();
    PipelineReport {
        success: false,
        covered: false,
        n,
        k: cfg.k,
        m,
        dim_u: 0,
        dim_v: 0,
        cover_size: 0,
        samples: counters.sample_draws,
        membership_queries: counters.membership_queries,
        sf_query_s: 0,
        sf_query_f: 0,
        sf_fiber_enumerations: 0,
        kernel_dim: 0,
        agreement: 0,
        restarts: cfg.max_restarts,
        seed: cfg.seed,
        stage_ms: StageMillis::default(),
        certificate: None,
        error: Some(
            last_err
                .map(|e| e.to_string())
                .unwrap_or_else(|| "no attempt ran".into()),
        ),
    }
}

fn run_once(
    oracle: &MembershipOracle,
    cfg: &PipelineConfig,
    size: u64,
    audit_size: u64,
    rng: &mut ChaCha8Rng,
) -> Result<RunOutcome, PfrError> {
    let n = oracle.ambient();
    let mut stage_ms = StageMillis::default();

    let t0 = Instant::now();
    let t = cfg.localize_samples(size);
    let (u, _aprime) = localize(oracle, t, rng)?;
    stage_ms.localize = t0.elapsed().as_millis() as u64;

    let t1 = Instant::now();
    let m = cfg.dense_model_dim(size);
    let (_pi, sf) = dense_model(&u, oracle, m, cfg, rng)?;
    stage_ms.dense_model = t1.elapsed().as_millis() as u64;

    let t2 = Instant::now();
    let fit = restricted_hom_fit(&sf, &FitConfig::from(cfg), rng)?;
    stage_ms.fit = t2.elapsed().as_millis() as u64;

    let t3 = Instant::now();
    let (v, dropped) = extract_subspace(&fit.matrix, audit_size.max(1));
    let im_full = fit.matrix.image_basis();
    let a_points = oracle.audit_set();

    // dense patch A ∩ (v + Im(M)); 2·patch lies inside Im(M), so covering A
    // by translates of the patch re-expresses as translates of Im(M)
    let mut patch = PointSet::new(n);
    for a in a_points.iter() {
        if im_full.contains(&a.xor(&fit.offset)) {
            patch.insert(a.clone());
        }
    }
    if patch.is_empty() {
        return Err(PfrError::EmptyPatch);
    }
    let (x_sel, _containment) = ruzsa_cover(&patch, a_points)?;

    // fold Im(M) = V ⊕ dropped into translates of V, then discard translates
    // that cover no point
    let offsets = dropped.try_enumerate(cfg.kernel_cap)?;
    let mut reps: Vec<BitVec> = Vec::new();
    let mut covered = vec![false; a_points.len()];
    for x in x_sel.iter() {
        for w in &offsets {
            let rep = x.xor(w);
            let mut used = false;
            for (i, a) in a_points.iter().enumerate() {
                if !covered[i] && v.contains(&a.xor(&rep)) {
                    covered[i] = true;
                    used = true;
                }
            }
            if used {
                reps.push(rep);
            }
        }
    }
    let cert = verify_cover(a_points, &v, &reps);
    stage_ms.cover = t3.elapsed().as_millis() as u64;

    debug_assert!(
        (1u128 << cert.subspace.dim()) <= audit_size.max(1) as u128,
        "extraction must respect the size cap"
    );
    if !cert.covered {
        return Err(PfrError::CoverFailed);
    }

    Ok(RunOutcome {
        m,
        dim_u: u.dim(),
        kernel_dim: sf.kernel_dim(),
        sf_counters: sf.counters(),
        fit,
        cert,
        stage_ms,
    })
}
