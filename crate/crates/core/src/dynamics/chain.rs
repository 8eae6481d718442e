use crate::error::{invalid, Error, Result};
use crate::geometry::Region;
use crate::model::{first_violation, Configuration, ModelParams, StateClass};
use crate::rng::Stream;

use super::heat_bath::{heat_bath_update, DEFAULT_HEAT_BATH_ATTEMPTS};
use super::single::{apply_restricted_move, apply_single_move, draw_single_move, MoveOutcome};

/// Transition kernel of a chain.
#[derive(Clone, Debug, PartialEq)]
pub enum Kernel {
    SingleCenter,
    /// Heat-bath update with radius `l` (at least `r`).
    HeatBath { l: f64, max_attempts: u64 },
    /// Lazy single-centre chain acting only on a region.
    Restricted(Region),
}

impl Kernel {
    pub fn heat_bath(l: f64) -> Self {
        Kernel::HeatBath {
            l,
            max_attempts: DEFAULT_HEAT_BATH_ATTEMPTS,
        }
    }

    pub fn validate(&self, params: &ModelParams) -> Result<()> {
        match self {
            Kernel::SingleCenter => Ok(()),
            Kernel::HeatBath { l, max_attempts } => {
                if !(l.is_finite() && *l >= params.r()) {
                    return Err(invalid("L", "update radius must be at least r"));
                }
                if *max_attempts == 0 {
                    return Err(invalid("max_attempts", "must be at least 1"));
                }
                Ok(())
            }
            Kernel::Restricted(Region::Box(b)) => {
                if b.is_subset_of(&params.domain) {
                    Ok(())
                } else {
                    Err(Error::NotASubregion)
                }
            }
            Kernel::Restricted(Region::Ball(b)) => {
                if b.bounding_box().is_subset_of(&params.domain) {
                    Ok(())
                } else {
                    Err(Error::NotASubregion)
                }
            }
        }
    }
}

/// One Markov chain: configuration, model, step counter and its own stream.
#[derive(Clone, Debug)]
pub struct ChainState {
    pub config: Configuration,
    pub params: ModelParams,
    pub step: u64,
    pub rng: Stream,
    pub class: StateClass,
}

impl ChainState {
    /// Validates `config` against `class` before building the chain.
    pub fn new(params: ModelParams, config: Configuration, class: StateClass, rng: Stream) -> Result<Self> {
        if config.domain() != &params.domain {
            return Err(invalid("config", "domain differs from the model domain"));
        }
        if let Some(msg) = first_violation(&config, &params, class) {
            return Err(invalid("config", msg));
        }
        Ok(ChainState {
            config,
            params,
            step: 0,
            rng,
            class,
        })
    }

    pub fn empty(params: ModelParams, class: StateClass, rng: Stream) -> Self {
        let config = Configuration::empty(&params);
        ChainState {
            config,
            params,
            step: 0,
            rng,
            class,
        }
    }

    pub fn single_center_step(&mut self) -> MoveOutcome {
        let mv = draw_single_move(&self.params, &mut self.rng);
        self.step += 1;
        apply_single_move(&mut self.config, &self.params, &mv)
    }

    pub fn heat_bath_step(&mut self, l: f64) -> Result<()> {
        self.heat_bath_step_with(l, DEFAULT_HEAT_BATH_ATTEMPTS)
    }

    pub fn heat_bath_step_with(&mut self, l: f64, max_attempts: u64) -> Result<()> {
        if l < self.params.r() {
            return Err(invalid("L", "update radius must be at least r"));
        }
        heat_bath_update(&mut self.config, &self.params, l, max_attempts, &mut self.rng)?;
        self.step += 1;
        Ok(())
    }

    pub fn restricted_lazy_step(&mut self, region: &Region) -> MoveOutcome {
        let mv = draw_single_move(&self.params, &mut self.rng);
        self.step += 1;
        apply_restricted_move(&mut self.config, &self.params, region, &mv)
    }

    pub fn step_with(&mut self, kernel: &Kernel) -> Result<()> {
        match kernel {
            Kernel::SingleCenter => {
                self.single_center_step();
                Ok(())
            }
            Kernel::HeatBath { l, max_attempts } => self.heat_bath_step_with(*l, *max_attempts),
            Kernel::Restricted(region) => {
                self.restricted_lazy_step(region);
                Ok(())
            }
        }
    }

    pub fn run(&mut self, kernel: &Kernel, steps: u64) -> Result<()> {
        for _ in 0..steps {
            self.step_with(kernel)?;
        }
        Ok(())
    }
}

/// Receives the chain state every `stride` steps.
pub trait Observer {
    fn observe(&mut self, state: &ChainState);
}

impl<F: FnMut(&ChainState)> Observer for F {
    fn observe(&mut self, state: &ChainState) {
        self(state)
    }
}

/// Applies `kernel` `steps` times, calling every observer after each block
/// of `stride` steps. Returns the number of observation rounds.
pub fn run_chain(
    state: &mut ChainState,
    kernel: &Kernel,
    steps: u64,
    stride: u64,
    observers: &mut [&mut dyn Observer],
) -> Result<u64> {
    if stride == 0 {
        return Err(invalid("stride", "must be at least 1"));
    }
    kernel.validate(&state.params)?;
    let mut rounds = 0;
    for t in 1..=steps {
        state.step_with(kernel)?;
        if t % stride == 0 {
            for o in observers.iter_mut() {
                o.observe(state);
            }
            rounds += 1;
        }
    }
    Ok(rounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Cuboid, Point};
    use crate::model::{is_star_configuration, BoundaryCondition};
    use crate::rng::rng_stream;

    fn chain(side: f64, lambda: f64, seed: u64) -> ChainState {
        ChainState::empty(ModelParams::cube(2, side, lambda).unwrap(), StateClass::Omega, rng_stream(seed, 0))
    }

    #[test]
    fn zero_steps_is_identity() {
        let mut s = chain(5.0, 1.0, 0);
        let mut seen = Vec::new();
        let mut obs = |st: &ChainState| seen.push(st.config.len());
        assert_eq!(run_chain(&mut s, &Kernel::SingleCenter, 0, 1, &mut [&mut obs]).unwrap(), 0);
        assert_eq!(s.step, 0);
        assert!(seen.is_empty());
    }

    #[test]
    fn seeded_runs_are_identical() {
        let mut a = chain(6.0, 0.5, 11);
        let mut b = chain(6.0, 0.5, 11);
        let mut ta = Vec::new();
        let mut tb = Vec::new();
        run_chain(&mut a, &Kernel::SingleCenter, 5000, 1, &mut [&mut |s: &ChainState| ta.push(s.config.sorted_points())]).unwrap();
        run_chain(&mut b, &Kernel::SingleCenter, 5000, 1, &mut [&mut |s: &ChainState| tb.push(s.config.sorted_points())]).unwrap();
        assert_eq!(ta, tb);
    }

    #[test]
    fn observer_stride() {
        let mut s = chain(5.0, 1.0, 1);
        let mut counts = Vec::new();
        let mut obs = |st: &ChainState| counts.push(st.config.len());
        let rounds = run_chain(&mut s, &Kernel::SingleCenter, 1000, 7, &mut [&mut obs]).unwrap();
        assert_eq!(rounds, 1000 / 7);
        assert_eq!(counts.len(), 1000 / 7);
        assert_eq!(s.step, 1000);
        assert!(run_chain(&mut s, &Kernel::SingleCenter, 1, 0, &mut []).is_err());
    }

    #[test]
    fn zero_fugacity_drains() {
        let p = ModelParams::cube(2, 4.0, 0.0).unwrap();
        let r = p.r();
        let pts = [Point::new([1.0, 1.0]), Point::new([1.0 + 2.5 * r, 1.0])];
        let c = Configuration::from_points(&p, pts).unwrap();
        let mut s = ChainState::new(p, c, StateClass::Omega, rng_stream(2, 0)).unwrap();
        s.run(&Kernel::SingleCenter, 2000).unwrap();
        assert!(s.config.is_empty());
    }

    #[test]
    fn star_start_enters_omega() {
        let p = ModelParams::cube(2, 5.0, 0.5)
            .unwrap()
            .with_tau(BoundaryCondition::free().with_ball(Point::new([2.5, 2.5]), 0.8))
            .unwrap();
        let r = p.r();
        // Overlapping pair inside tau: in the extended space only.
        let c = Configuration::from_points(&p, [Point::new([2.5, 2.5]), Point::new([2.5 + 1.2 * r, 2.5])]).unwrap();
        let budget = (10.0 * p.n() * (1.0 + p.lambda)) as u64;
        let mut entered = 0;
        for seed in 0..20 {
            let mut s = ChainState::new(p.clone(), c.clone(), StateClass::OmegaStar, rng_stream(seed, 0)).unwrap();
            for _ in 0..budget {
                s.single_center_step();
                assert!(is_star_configuration(&s.config, &p));
                if crate::model::is_valid_configuration(&s.config, &p) {
                    entered += 1;
                    break;
                }
            }
        }
        assert!(entered >= 18, "{entered}/20 entered");
    }

    #[test]
    fn restricted_rate_matches_region_fraction() {
        let p = ModelParams::cube(2, 10.0, 1.0).unwrap();
        let region = Region::Box(Cuboid::new(Point::new([2.0, 2.0]), Point::new([4.0, 4.0])).unwrap());
        let mut s = ChainState::empty(p, StateClass::Omega, rng_stream(3, 0));
        let n = 200_000;
        let mut active = 0;
        for _ in 0..n {
            let mv = draw_single_move(&s.params, &mut s.rng.clone());
            if region.contains(&mv.x) {
                active += 1;
            }
            s.restricted_lazy_step(&region);
        }
        let frac = active as f64 / n as f64;
        assert!((frac - 0.04).abs() < 4.0 * (0.04 * 0.96 / n as f64).sqrt());
        assert!(Kernel::Restricted(Region::Box(Cuboid::cube(2, 11.0).unwrap())).validate(&s.params).is_err());
    }

    #[test]
    fn restricted_to_whole_domain_is_plain_chain() {
        let p = ModelParams::cube(2, 6.0, 1.0).unwrap();
        let whole = Region::Box(p.domain.clone());
        let mut a = ChainState::empty(p.clone(), StateClass::Omega, rng_stream(4, 0));
        let mut b = ChainState::empty(p, StateClass::Omega, rng_stream(4, 0));
        for _ in 0..20_000 {
            a.single_center_step();
            b.restricted_lazy_step(&whole);
            assert_eq!(a.config, b.config);
        }
    }

    #[test]
    fn invalid_start_rejected() {
        let p = ModelParams::cube(2, 5.0, 1.0).unwrap();
        let c = Configuration::from_points(&p, [Point::new([2.0, 2.0]), Point::new([2.1, 2.0])]).unwrap();
        assert!(ChainState::new(p.clone(), c.clone(), StateClass::Omega, rng_stream(0, 0)).is_err());
        assert!(ChainState::new(p, c, StateClass::OmegaStar, rng_stream(0, 0)).is_ok());
    }
}
