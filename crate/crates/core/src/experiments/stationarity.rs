use crate::bounds::{lambda_for_gamma, mixing_time_bound};
use crate::dynamics::{ChainState, Kernel};
use crate::error::{invalid, Error, Result};
use crate::metrics::tv_to_reference;
use crate::model::{
    oracle_with_bins, outcome_index, sample_hard_sphere_rejection, Configuration, ModelParams, Oracle, StateClass,
    DEFAULT_POSITION_BINS, DEFAULT_QUADRATURE_CELLS,
};
use crate::rng::rng_stream;

use super::report::{Comparison, ExperimentReport};
use super::replicate;

/// Oracle with the smallest sphere capacity that the domain certifies.
fn oracle_for(params: &ModelParams, cells: usize, bins: usize) -> Result<Oracle> {
    match oracle_with_bins(params, 1, cells, bins) {
        Err(Error::OracleDomainTooLarge { .. }) => oracle_with_bins(params, 2, cells, bins),
        other => other,
    }
}

fn add_counts(total: &mut [u64], part: &[u64]) {
    for (t, p) in total.iter_mut().zip(part) {
        *t += p;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StationarityConfig {
    pub params: ModelParams,
    pub kernel: Kernel,
    /// Recorded steps per replica after burn-in.
    pub steps: u64,
    pub burn_in: u64,
    pub replicas: u64,
    pub stride: u64,
    pub threshold: f64,
    pub bins_per_axis: usize,
    pub quadrature_cells: usize,
}

impl StationarityConfig {
    pub fn new(params: ModelParams, kernel: Kernel, steps: u64) -> Self {
        StationarityConfig {
            params,
            kernel,
            steps,
            burn_in: 1000,
            replicas: 8,
            stride: 1,
            threshold: 0.02,
            bins_per_axis: DEFAULT_POSITION_BINS,
            quadrature_cells: DEFAULT_QUADRATURE_CELLS,
        }
    }
}

/// TV between the time-averaged law of the (count, position-bin) outcome and
/// the oracle law; passes iff at most the threshold.
pub fn stationarity_check(cfg: &StationarityConfig, seed: u64) -> Result<ExperimentReport> {
    let params = &cfg.params;
    cfg.kernel.validate(params)?;
    if cfg.replicas == 0 || cfg.stride == 0 || cfg.steps < cfg.stride {
        return Err(invalid("steps", "need at least one recorded step"));
    }
    let oracle = oracle_for(params, cfg.quadrature_cells, cfg.bins_per_axis)?;
    let outcomes = oracle.outcome_pmf.len();
    let parts = replicate(cfg.replicas, |i| {
        let mut chain = ChainState::empty(params.clone(), StateClass::Omega, rng_stream(seed, i));
        chain.run(&cfg.kernel, cfg.burn_in)?;
        let mut counts = vec![0u64; outcomes];
        for t in 1..=cfg.steps {
            chain.step_with(&cfg.kernel)?;
            if t % cfg.stride == 0 {
                counts[outcome_index(&chain.config, params.interior(), cfg.bins_per_axis)] += 1;
            }
        }
        Ok(counts)
    })?;
    let mut counts = vec![0u64; outcomes];
    for p in &parts {
        add_counts(&mut counts, p);
    }
    let tv = tv_to_reference(&counts, &oracle.outcome_pmf)?;
    let kernel = match &cfg.kernel {
        Kernel::SingleCenter => "single_center".to_string(),
        Kernel::HeatBath { l, .. } => format!("heat_bath(L={l})"),
        Kernel::Restricted(_) => "restricted".to_string(),
    };
    Ok(
        ExperimentReport::point("stationarity", tv.tv, tv.std_error, cfg.threshold, Comparison::Le)
            .param("kernel", kernel)
            .param("d", params.d())
            .param("lambda", params.lambda)
            .param("sides", params.domain.sides())
            .param("steps", cfg.steps)
            .param("burn_in", cfg.burn_in)
            .param("stride", cfg.stride)
            .param("bins_per_axis", cfg.bins_per_axis)
            .param("quadrature_cells", cfg.quadrature_cells)
            .param("oracle_z", oracle.z)
            .replicas(cfg.replicas)
            .seed(seed)
            .note("TV of the (count, position bin) law to the quadrature oracle"),
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleEquivalenceConfig {
    pub params: ModelParams,
    pub rejection_draws: u64,
    pub chain_steps: u64,
    pub burn_in: u64,
    pub threshold: f64,
    pub quadrature_cells: usize,
}

impl OracleEquivalenceConfig {
    pub fn new(params: ModelParams) -> Self {
        OracleEquivalenceConfig {
            params,
            rejection_draws: 100_000,
            chain_steps: 1_000_000,
            burn_in: 10_000,
            threshold: 0.01,
            quadrature_cells: DEFAULT_QUADRATURE_CELLS,
        }
    }
}

const REJECTION_CHUNKS: u64 = 64;
const REJECTION_BUDGET: u64 = 1_000_000;

fn count_index(config: &Configuration, len: usize) -> usize {
    config.len().min(len - 1)
}

/// Count laws of the rejection sampler and of one long single-centre chain
/// against the oracle count law: one report each.
pub fn oracle_equivalence_check(cfg: &OracleEquivalenceConfig, seed: u64) -> Result<Vec<ExperimentReport>> {
    let params = &cfg.params;
    if cfg.rejection_draws == 0 || cfg.chain_steps == 0 {
        return Err(invalid("draws", "need at least one draw and one step"));
    }
    let oracle = oracle_for(params, cfg.quadrature_cells, DEFAULT_POSITION_BINS)?;
    // One extra bin catches counts above the oracle's capacity.
    let mut reference = oracle.count_pmf.clone();
    reference.push(0.0);
    let len = reference.len();

    let parts = replicate(REJECTION_CHUNKS, |chunk| {
        let mut rng = rng_stream(seed, chunk);
        let draws = cfg.rejection_draws / REJECTION_CHUNKS + u64::from(chunk < cfg.rejection_draws % REJECTION_CHUNKS);
        let mut counts = vec![0u64; len];
        for _ in 0..draws {
            let c = sample_hard_sphere_rejection(params, &mut rng, REJECTION_BUDGET)?;
            counts[count_index(&c, len)] += 1;
        }
        Ok(counts)
    })?;
    let mut rejection = vec![0u64; len];
    for p in &parts {
        add_counts(&mut rejection, p);
    }

    let mut chain = ChainState::empty(params.clone(), StateClass::Omega, rng_stream(seed, REJECTION_CHUNKS));
    for _ in 0..cfg.burn_in {
        chain.single_center_step();
    }
    let mut chain_counts = vec![0u64; len];
    for _ in 0..cfg.chain_steps {
        chain.single_center_step();
        chain_counts[count_index(&chain.config, len)] += 1;
    }

    let tag = |r: ExperimentReport| {
        r.param("d", params.d())
            .param("lambda", params.lambda)
            .param("sides", params.domain.sides())
            .param("oracle_count_pmf", oracle.count_pmf.clone())
            .param("quadrature_cells", cfg.quadrature_cells)
            .seed(seed)
    };
    let tv_rej = tv_to_reference(&rejection, &reference)?;
    let tv_chain = tv_to_reference(&chain_counts, &reference)?;
    Ok(vec![
        tag(ExperimentReport::point("oracle_rejection", tv_rej.tv, tv_rej.std_error, cfg.threshold, Comparison::Le))
            .param("draws", cfg.rejection_draws)
            .replicas(cfg.rejection_draws)
            .note("TV of the rejection sampler's count law to the oracle"),
        tag(ExperimentReport::point("oracle_chain", tv_chain.tv, tv_chain.std_error, cfg.threshold, Comparison::Le))
            .param("steps", cfg.chain_steps)
            .param("burn_in", cfg.burn_in)
            .note("TV of the time-averaged count law of one chain to the oracle"),
    ])
}

#[derive(Clone, Debug, PartialEq)]
pub struct MixingCeilingConfig {
    /// Domain; the fugacity is replaced by `(1 - gamma) 2^{1-d}`.
    pub params: ModelParams,
    pub gamma: f64,
    pub eps: f64,
    /// Independent chains per starting state.
    pub replicas: u64,
    pub quadrature_cells: usize,
}

/// TV to the oracle after the mixing-time bound, maximised over an empty
/// start and a one-centre start.
pub fn mixing_ceiling_check(cfg: &MixingCeilingConfig, seed: u64) -> Result<ExperimentReport> {
    if cfg.replicas == 0 {
        return Err(invalid("replicas", "must be at least 1"));
    }
    let d = cfg.params.d();
    let lambda = lambda_for_gamma(cfg.gamma, d)?;
    let params = cfg.params.with_lambda(lambda)?;
    let t = mixing_time_bound(params.n(), d, cfg.gamma, cfg.eps)?;
    let interior = params.interior().ok_or(Error::EmptyInterior)?.clone();
    let oracle = oracle_for(&params, cfg.quadrature_cells, DEFAULT_POSITION_BINS)?;
    let outcomes = oracle.outcome_pmf.len();

    let starts = [Configuration::empty(&params), Configuration::from_points(&params, [interior.center()])?];
    let mut worst = None::<(f64, f64)>;
    let mut per_start = Vec::new();
    for (k, start) in starts.iter().enumerate() {
        let finals = replicate(cfg.replicas, |i| {
            let id = ((k as u64) << 32) | i;
            let mut chain = ChainState::new(params.clone(), start.clone(), StateClass::Omega, rng_stream(seed, id))?;
            for _ in 0..t {
                chain.single_center_step();
            }
            Ok(outcome_index(&chain.config, Some(&interior), DEFAULT_POSITION_BINS))
        })?;
        let mut counts = vec![0u64; outcomes];
        for o in finals {
            counts[o] += 1;
        }
        let tv = tv_to_reference(&counts, &oracle.outcome_pmf)?;
        per_start.push(tv.tv);
        if worst.is_none_or(|w| tv.tv > w.0) {
            worst = Some((tv.tv, tv.std_error));
        }
    }
    let (tv, se) = worst.expect("two starts");
    Ok(
        ExperimentReport::point("mixing_ceiling", tv, se, cfg.eps, Comparison::Le)
            .param("d", d)
            .param("gamma", cfg.gamma)
            .param("lambda", lambda)
            .param("n", params.n())
            .param("t", t)
            .param("tv_empty_start", per_start[0])
            .param("tv_one_center_start", per_start[1])
            .replicas(cfg.replicas)
            .seed(seed)
            .note("largest TV over the two starting states"),
    )
}
