use crate::bounds::disagreement_bound;
use crate::dynamics::{ChainState, CoupledState};
use crate::error::{invalid, Error, Result};
use crate::geometry::Cuboid;
use crate::metrics::project_to_subregion;
use crate::model::{BoundaryCondition, Configuration, ModelParams, StateClass};
use crate::rng::rng_stream;

use super::report::{Comparison, ExperimentReport, MeanEstimate};
use super::{default_burn_in, replicate};

/// Two chains that start and are conditioned differently only inside `a`;
/// disagreement is read off in `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct DisagreementConfig {
    pub params: ModelParams,
    pub a: Cuboid,
    pub b: Cuboid,
    /// Boundary condition of the second chain; must differ from the first
    /// only inside `a`.
    pub tau_y: BoundaryCondition,
    /// Defaults to the largest admissible value.
    pub eta: Option<f64>,
    pub trials: u64,
    /// Burn-in of the first chain; defaults to `10 n (1 + lambda)`.
    pub burn_in: Option<u64>,
}

/// `s = dist(A, B_Int)`, with `B_Int` the points of `B` at depth at least `r`.
fn separation(a: &Cuboid, b: &Cuboid, r: f64) -> Result<f64> {
    let b_int = b.shrink(r).ok_or_else(|| invalid("B", "has an empty interior"))?;
    Ok(a.dist_to_box(&b_int))
}

pub fn disagreement_experiment(cfg: &DisagreementConfig, seed: u64) -> Result<ExperimentReport> {
    let params = &cfg.params;
    let d = params.d();
    let r = params.r();
    if cfg.trials == 0 {
        return Err(invalid("trials", "must be at least 1"));
    }
    if !cfg.a.is_subset_of(&params.domain) || !cfg.b.is_subset_of(&params.domain) {
        return Err(Error::NotASubregion);
    }
    let s = separation(&cfg.a, &cfg.b, r)?;
    if s <= 0.0 {
        return Err(invalid("A, B", "A must be separated from the interior of B"));
    }
    for ball in cfg.tau_y.balls.iter().filter(|ball| !params.tau.balls.contains(ball)) {
        if !ball.bounding_box().is_subset_of(&cfg.a) {
            return Err(invalid("tau_y", "boundary conditions may differ only inside A"));
        }
    }
    let probe = disagreement_bound(cfg.b.volume(), s, d, f64::MIN_POSITIVE)?;
    let eta = cfg.eta.unwrap_or(probe.eta_max);
    let bound = disagreement_bound(cfg.b.volume(), s, d, eta)?;
    if !bound.eta_ok {
        return Err(Error::EtaTooLarge {
            eta,
            eta_max: bound.eta_max,
        });
    }
    let steps = (eta * params.n()).floor() as u64;
    let params_y = params.with_tau(cfg.tau_y.clone())?;
    let burn_in = cfg.burn_in.unwrap_or_else(|| default_burn_in(params.n(), params.lambda));

    let outcomes = replicate(cfg.trials, |t| {
        let mut x = ChainState::empty(params.clone(), StateClass::Omega, rng_stream(seed, 2 * t));
        for _ in 0..burn_in {
            x.single_center_step();
        }
        let kept = x.config.iter().filter(|p| !cfg.a.contains(p)).cloned().collect::<Vec<_>>();
        let y0 = Configuration::from_points(&params_y, kept)?;
        let y = ChainState::new(params_y.clone(), y0, StateClass::Omega, rng_stream(seed, 2 * t + 1))?;
        let mut pair = CoupledState::new(x, y, rng_stream(seed, 2 * t + 1))?;
        for _ in 0..steps {
            pair.single_center_step();
        }
        let px = project_to_subregion(&pair.x.config, &cfg.b)?;
        let py = project_to_subregion(&pair.y.config, &cfg.b)?;
        Ok(px != py)
    })?;
    let hits = outcomes.iter().filter(|&&h| h).count() as u64;
    let freq = MeanEstimate::from_successes(hits, cfg.trials);

    Ok(
        ExperimentReport::new("disagreement", freq.mean, freq.std_error, bound.bound, Comparison::Le)
            .param("d", d)
            .param("lambda", params.lambda)
            .param("n", params.n())
            .param("s", s)
            .param("s_over_r", s / r)
            .param("eta", eta)
            .param("eta_max", bound.eta_max)
            .param("steps", steps)
            .param("burn_in", burn_in)
            .param("b_volume", cfg.b.volume())
            .param("disagreements", hits)
            .replicas(cfg.trials)
            .seed(seed)
            .note("identity coupling of the single-centre chains"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{sphere_radius, Point};

    fn setup(tau_y: BoundaryCondition, eta: Option<f64>) -> DisagreementConfig {
        let r = sphere_radius(2).unwrap();
        let params = ModelParams::cube(2, 12.0, 0.25).unwrap();
        let a = Cuboid::new(Point::new([0.0, 0.0]), Point::new([2.0, 12.0])).unwrap();
        let b = Cuboid::new(Point::new([2.0 + 7.0 * r, 5.0]), Point::new([4.0 + 7.0 * r, 7.0])).unwrap();
        DisagreementConfig {
            params,
            a,
            b,
            tau_y,
            eta,
            trials: 50,
            burn_in: Some(200),
        }
    }

    #[test]
    fn identical_chains_never_disagree() {
        let rep = disagreement_experiment(&setup(BoundaryCondition::free(), None), 1).unwrap();
        assert_eq!(rep.estimate, 0.0);
        assert!((rep.params["s_over_r"].as_f64().unwrap() - 8.0).abs() < 1e-9);
        assert!((rep.bound - 4.0 * (-2.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn zero_steps_for_tiny_eta() {
        let tau = BoundaryCondition::free().with_ball(Point::new([1.0, 6.0]), 0.9);
        let rep = disagreement_experiment(&setup(tau, Some(1e-6)), 2).unwrap();
        assert_eq!(rep.params["steps"].as_u64().unwrap(), 0);
        assert_eq!(rep.estimate, 0.0);
    }

    #[test]
    fn eta_precondition_is_checked() {
        match disagreement_experiment(&setup(BoundaryCondition::free(), Some(0.5)), 0) {
            Err(Error::EtaTooLarge { eta_max, .. }) => assert!((eta_max - 0.016917).abs() < 1e-5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tau_difference_outside_a_rejected() {
        let tau = BoundaryCondition::free().with_ball(Point::new([8.0, 6.0]), 0.5);
        assert!(disagreement_experiment(&setup(tau, None), 0).is_err());
    }
}
