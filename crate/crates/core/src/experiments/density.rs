use crate::bounds::{density_bound_easy_finite, density_bound_crossing};
use crate::dynamics::ChainState;
use crate::error::{invalid, Result};
use crate::geometry::Cuboid;
use crate::model::{free_volume_fraction_estimate, BoundaryCondition, ModelParams, StateClass};
use crate::rng::rng_stream;

use super::report::{Comparison, ExperimentReport, MeanEstimate};
use super::{default_burn_in, replicate};

#[derive(Clone, Debug, PartialEq)]
pub struct DensityConfig {
    pub d: usize,
    pub lambdas: Vec<f64>,
    /// Cube side lengths.
    pub sides: Vec<f64>,
    /// Measured steps per replica after burn-in.
    pub steps: u64,
    /// Defaults to `10 n (1 + lambda)`.
    pub burn_in: Option<u64>,
    pub replicas: u64,
    /// Steps between recorded densities.
    pub stride: u64,
}

fn check_run(steps: u64, stride: u64, replicas: u64) -> Result<()> {
    if replicas < 2 {
        return Err(invalid("replicas", "need at least 2 for a standard error"));
    }
    if stride == 0 || steps < stride {
        return Err(invalid("steps", "need at least one recorded step"));
    }
    Ok(())
}

/// Stream ids `point << 32 | replica`.
fn stream_id(point: usize, replica: u64) -> u64 {
    ((point as u64) << 32) | replica
}

/// Time-averaged density of each replica, in replica order.
fn replica_densities(
    params: &ModelParams,
    steps: u64,
    burn_in: u64,
    stride: u64,
    replicas: u64,
    seed: u64,
    point: usize,
) -> Result<Vec<f64>> {
    let n = params.n();
    replicate(replicas, |i| {
        let mut chain = ChainState::empty(params.clone(), StateClass::Omega, rng_stream(seed, stream_id(point, i)));
        for _ in 0..burn_in {
            chain.single_center_step();
        }
        let (mut sum, mut count) = (0.0, 0u64);
        for t in 1..=steps {
            chain.single_center_step();
            if t % stride == 0 {
                sum += chain.config.len() as f64 / n;
                count += 1;
            }
        }
        Ok(sum / count as f64)
    })
}

/// Two reports per `(lambda, side)`: the finite-volume easy bound and the
/// crossing bound. The crossing report is skipped at `lambda = 0`.
pub fn density_sweep(cfg: &DensityConfig, seed: u64) -> Result<Vec<ExperimentReport>> {
    check_run(cfg.steps, cfg.stride, cfg.replicas)?;
    let mut out = Vec::new();
    let mut point = 0;
    for &lambda in &cfg.lambdas {
        for &side in &cfg.sides {
            let params = ModelParams::cube(cfg.d, side, lambda)?;
            let burn_in = cfg.burn_in.unwrap_or_else(|| default_burn_in(params.n(), lambda));
            let rho = replica_densities(&params, cfg.steps, burn_in, cfg.stride, cfg.replicas, seed, point)?;
            point += 1;
            let m = MeanEstimate::from_values(&rho);
            let fraction = params.interior_volume() / params.n();
            let easy = density_bound_easy_finite(lambda, cfg.d, fraction)?;
            let tag = |r: ExperimentReport| {
                r.param("d", cfg.d)
                    .param("lambda", lambda)
                    .param("side", side)
                    .param("n", params.n())
                    .param("interior_fraction", fraction)
                    .param("steps", cfg.steps)
                    .param("burn_in", burn_in)
                    .param("stride", cfg.stride)
                    .param("stream_prefix", point as u64 - 1)
                    .replicas(cfg.replicas)
                    .seed(seed)
            };
            out.push(tag(ExperimentReport::new("density_easy", m.mean, m.std_error, easy, Comparison::Ge)));
            if lambda > 0.0 {
                let crossing = density_bound_crossing(lambda, cfg.d)?;
                out.push(tag(
                    ExperimentReport::new("density_crossing", m.mean, m.std_error, crossing, Comparison::Ge)
                        .note("infinite-volume bound compared with a finite box"),
                ));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FreeVolumeConfig {
    pub params: ModelParams,
    pub steps: u64,
    pub burn_in: Option<u64>,
    pub replicas: u64,
    pub stride: u64,
    /// Points per free-volume estimate.
    pub free_samples: u64,
}

impl FreeVolumeConfig {
    pub fn cube(d: usize, side: f64, lambda: f64) -> Result<Self> {
        Ok(FreeVolumeConfig {
            params: ModelParams::new(lambda, Cuboid::cube(d, side)?, BoundaryCondition::free())?,
            steps: 20_000,
            burn_in: None,
            replicas: 32,
            stride: 100,
            free_samples: 256,
        })
    }
}

/// Compares the density with `lambda` times the free-volume fraction; both
/// are read off the same chain so their errors are paired per replica.
pub fn free_volume_identity_check(cfg: &FreeVolumeConfig, seed: u64) -> Result<ExperimentReport> {
    let params = &cfg.params;
    if params.lambda <= 0.0 {
        return Err(invalid("lambda", "must be positive"));
    }
    check_run(cfg.steps, cfg.stride, cfg.replicas)?;
    if cfg.free_samples == 0 {
        return Err(invalid("free_samples", "must be at least 1"));
    }
    let n = params.n();
    let burn_in = cfg.burn_in.unwrap_or_else(|| default_burn_in(n, params.lambda));
    let per_replica = replicate(cfg.replicas, |i| {
        let mut chain = ChainState::empty(params.clone(), StateClass::Omega, rng_stream(seed, i));
        for _ in 0..burn_in {
            chain.single_center_step();
        }
        let (mut rho, mut free, mut count) = (0.0, 0.0, 0u64);
        for t in 1..=cfg.steps {
            chain.single_center_step();
            if t % cfg.stride == 0 {
                rho += chain.config.len() as f64 / n;
                free += free_volume_fraction_estimate(&chain.config, params, cfg.free_samples, &mut chain.rng)?.value;
                count += 1;
            }
        }
        Ok((rho / count as f64, free / count as f64))
    })?;
    let rho: Vec<f64> = per_replica.iter().map(|p| p.0).collect();
    let lf: Vec<f64> = per_replica.iter().map(|p| params.lambda * p.1).collect();
    let diff: Vec<f64> = per_replica.iter().map(|p| p.0 - params.lambda * p.1).collect();
    let (rho, lf, diff) = (
        MeanEstimate::from_values(&rho),
        MeanEstimate::from_values(&lf),
        MeanEstimate::from_values(&diff),
    );
    Ok(
        ExperimentReport::new("free_volume_identity", diff.mean, diff.std_error, 0.0, Comparison::Eq)
            .param("d", params.d())
            .param("lambda", params.lambda)
            .param("n", n)
            .param("rho", rho.mean)
            .param("rho_stderr", rho.std_error)
            .param("lambda_free", lf.mean)
            .param("lambda_free_stderr", lf.std_error)
            .param("steps", cfg.steps)
            .param("burn_in", burn_in)
            .param("stride", cfg.stride)
            .param("free_samples", cfg.free_samples)
            .replicas(cfg.replicas)
            .seed(seed)
            .note("estimate is rho - lambda F"),
    )
}
