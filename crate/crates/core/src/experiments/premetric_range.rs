use rand::Rng;

use crate::dynamics::ChainState;
use crate::error::{invalid, Error, Result};
use crate::geometry::{uniform_in_cuboid, Point};
use crate::metrics::{premetric_edge_weight, PreMetricParams};
use crate::model::{star_insertion_ok, Configuration, ModelParams, StateClass};
use crate::rng::{rng_stream, Stream};

use super::report::{Comparison, ExperimentReport};
use super::{default_burn_in, replicate};

#[derive(Clone, Debug, PartialEq)]
pub struct PreMetricRangeConfig {
    pub d: usize,
    pub side: f64,
    pub edges: u64,
    pub blocked_samples: u64,
    /// At most this many overlapping centres are added before `v`.
    pub max_star_extras: u64,
    pub v_attempts: u64,
}

impl PreMetricRangeConfig {
    pub fn new(d: usize, side: f64, edges: u64) -> Self {
        PreMetricRangeConfig {
            d,
            side,
            edges,
            blocked_samples: 2048,
            max_star_extras: 2,
            v_attempts: 10_000,
        }
    }
}

fn star_point(config: &Configuration, params: &ModelParams, attempts: u64, rng: &mut Stream) -> Result<Point> {
    let interior = params.interior().ok_or(Error::EmptyInterior)?;
    for _ in 0..attempts {
        let v = uniform_in_cuboid(interior, rng);
        if !config.contains(&v) && star_insertion_ok(config, params, &v) {
            return Ok(v);
        }
    }
    Err(Error::NoValidEdge { attempts })
}

/// Fraction of random extended-space edges whose estimated weight lies in
/// `[2^{d-1} - 3 SE, 2^d + 3 SE]` at `lambda = 2^{1-d}`; passes iff all do.
pub fn premetric_range_check(cfg: &PreMetricRangeConfig, seed: u64) -> Result<ExperimentReport> {
    if cfg.edges == 0 {
        return Err(invalid("edges", "must be at least 1"));
    }
    let lambda = 2.0 / 2f64.powi(cfg.d as i32);
    let params = ModelParams::cube(cfg.d, cfg.side, lambda)?;
    let pm = PreMetricParams::for_model(&params, cfg.blocked_samples)?;
    let hi = 2f64.powi(cfg.d as i32);
    let lo = hi / 2.0;
    let burn_max = default_burn_in(params.n(), lambda);

    let weights = replicate(cfg.edges, |e| {
        let mut chain = ChainState::empty(params.clone(), StateClass::OmegaStar, rng_stream(seed, e));
        let burn = chain.rng.random_range(0..=burn_max);
        for _ in 0..burn {
            chain.single_center_step();
        }
        let mut x = chain.config;
        let mut rng = chain.rng;
        let extras = rng.random_range(0..=cfg.max_star_extras);
        for _ in 0..extras {
            let p = star_point(&x, &params, cfg.v_attempts, &mut rng)?;
            x.insert(p);
        }
        let v = star_point(&x, &params, cfg.v_attempts, &mut rng)?;
        premetric_edge_weight(&x, &v, &params, &pm, &mut rng)
    })?;

    let inside = weights
        .iter()
        .filter(|w| w.value >= lo - 3.0 * w.std_error && w.value <= hi + 3.0 * w.std_error)
        .count() as u64;
    let min = weights.iter().map(|w| w.value).fold(f64::INFINITY, f64::min);
    let max = weights.iter().map(|w| w.value).fold(f64::NEG_INFINITY, f64::max);
    let fraction = inside as f64 / cfg.edges as f64;
    Ok(
        ExperimentReport::point("premetric_range", fraction, 0.0, 1.0, Comparison::Ge)
            .param("d", cfg.d)
            .param("lambda", lambda)
            .param("side", cfg.side)
            .param("blocked_samples", cfg.blocked_samples)
            .param("min_weight", min)
            .param("max_weight", max)
            .param("lower", lo)
            .param("upper", hi)
            .replicas(cfg.edges)
            .seed(seed)
            .note("estimate is the fraction of edges inside the 3 SE band"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::Verdict;

    #[test]
    fn weights_in_range_in_two_and_three_dimensions() {
        for (d, side) in [(2, 5.0), (3, 3.0)] {
            let rep = premetric_range_check(&PreMetricRangeConfig::new(d, side, 40), 1).unwrap();
            assert_eq!(rep.verdict, Verdict::Pass, "{rep:?}");
        }
    }
}
