//! Experiment drivers that estimate expectations and probabilities by Monte
//! Carlo and judge them against closed-form bounds.

mod contraction;
mod density;
mod disagreement;
mod premetric_range;
mod report;
mod ssm;
mod stationarity;

pub use contraction::{contraction_experiment, ContractionCaseBreakdown, ContractionConfig, ContractionOutcome};
pub use density::{density_sweep, free_volume_identity_check, DensityConfig, FreeVolumeConfig};
pub use disagreement::{disagreement_experiment, DisagreementConfig};
pub use premetric_range::{premetric_range_check, PreMetricRangeConfig};
pub use report::{
    judge, judge_point, Comparison, ExperimentReport, MeanEstimate, Rule, Verdict, CODE_VERSION, SIGMA_BAND,
};
pub use ssm::{spatial_mixing_scan, SsmConfig, TauPair, EXACT_SAMPLING_LIMIT};
pub use stationarity::{
    mixing_ceiling_check, oracle_equivalence_check, stationarity_check, MixingCeilingConfig, OracleEquivalenceConfig,
    StationarityConfig,
};

use rayon::prelude::*;

use crate::error::Result;

/// Default burn-in `10 n (1 + lambda)` steps.
pub fn default_burn_in(n: f64, lambda: f64) -> u64 {
    (10.0 * n * (1.0 + lambda)).ceil() as u64
}

/// Runs `f` for every replica id in parallel and returns the results in id
/// order, so downstream reductions are independent of scheduling.
pub(crate) fn replicate<T, F>(count: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}
