use serde::{Deserialize, Serialize};

/// Which quadratic-correlation backend the fit stage uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitBackend {
    /// Exhaustive when `m + n` fits under the cap, structured otherwise.
    Auto,
    Exhaustive,
    Bilinear,
}

/// Knobs for one pipeline run. The zero-argument defaults reproduce the
/// standard formulas: `t = ceil(28 log2 |A|) + 56K` localization samples and
/// dense-model dimension `m = ceil(log2 |A|) + ceil(4 log2 K) + m_slack`
/// with `m_slack = 10`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Doubling bound `K >= 1`, supplied by the caller.
    pub k: u64,
    /// Exact `|A|` when known, or an upper bound; `None` reads the audit
    /// size (desk scale only).
    pub set_size: Option<u64>,
    /// Overrides the localization sample count `t`.
    pub t_override: Option<u64>,
    /// Additive slack in the dense-model dimension formula.
    pub m_slack: i64,
    /// Random-map redraws inside the dense-model stage.
    pub iso_restarts: usize,
    /// Whole-pipeline restarts on stage failure.
    pub max_restarts: usize,
    /// Refuse kernels (and dropped-row enumerations) above this dimension.
    pub kernel_cap: usize,
    /// Offset candidates drawn in the voting stage (`t_z`).
    pub offset_candidates: usize,
    /// Empirical-estimator samples per offset candidate; the default gives
    /// Hoeffding confidence ~0.9 at resolution ~0.05 rather than a
    /// worst-case polynomial.
    pub estimator_samples: usize,
    pub backend: FitBackend,
    /// Cap for the exhaustive backend (`m + n <= cap`).
    pub exhaustive_cap: usize,
    /// Check the Freiman isomorphism exactly against the enumerated
    /// localized set; when false, violations surface lazily as retriable
    /// query errors.
    pub exact_iso_check: bool,
    /// Minimum exact agreement for the fit stage to count as a success.
    pub min_agreement: u64,
    pub seed: u64,
}

impl PipelineConfig {
    pub fn new(k: u64) -> Self {
        PipelineConfig {
            k: k.max(1),
            set_size: None,
            t_override: None,
            m_slack: 10,
            iso_restarts: 16,
            max_restarts: 8,
            kernel_cap: 20,
            offset_candidates: 64,
            estimator_samples: 512,
            backend: FitBackend::Auto,
            exhaustive_cap: 7,
            exact_iso_check: true,
            min_agreement: 1,
            seed: 0,
        }
    }

    /// `t = ceil(28 log2 |A|) + 56K`, unless overridden.
    pub fn localize_samples(&self, set_size: u64) -> u64 {
        if let Some(t) = self.t_override {
            return t;
        }
        let log = (set_size.max(2) as f64).log2();
        (28.0 * log).ceil() as u64 + 56 * self.k
    }

    /// `m = ceil(log2 |A|) + ceil(4 log2 K) + m_slack`, at least 1.
    pub fn dense_model_dim(&self, set_size: u64) -> usize {
        let log_a = ceil_log2(set_size.max(1)) as i64;
        let log_k = (4.0 * (self.k as f64).log2()).ceil() as i64;
        (log_a + log_k + self.m_slack).max(1) as usize
    }
}

pub(crate) fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}
