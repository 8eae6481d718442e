use crate::error::{invalid, Result};
use crate::rng::Stream;

use super::chain::ChainState;
use super::heat_bath::{coupled_heat_bath_update_at, draw_heat_bath_center, DEFAULT_HEAT_BATH_ATTEMPTS};
use super::single::{apply_single_move, draw_single_move, MoveOutcome, SingleMove};

/// Two chains on the same domain and fugacity driven by one shared stream.
/// Their own streams are not used by coupled steps.
#[derive(Clone, Debug)]
pub struct CoupledState {
    pub x: ChainState,
    pub y: ChainState,
    pub rng: Stream,
}

impl CoupledState {
    pub fn new(x: ChainState, y: ChainState, rng: Stream) -> Result<Self> {
        if x.params.domain != y.params.domain {
            return Err(invalid("coupling", "chains must share the domain"));
        }
        if x.params.lambda != y.params.lambda {
            return Err(invalid("coupling", "chains must share the fugacity"));
        }
        Ok(CoupledState { x, y, rng })
    }

    /// Identity coupling: same update point and coin in both chains.
    pub fn single_center_step(&mut self) -> (SingleMove, MoveOutcome, MoveOutcome) {
        let mv = draw_single_move(&self.x.params, &mut self.rng);
        let ox = apply_single_move(&mut self.x.config, &self.x.params, &mv);
        let oy = apply_single_move(&mut self.y.config, &self.y.params, &mv);
        self.x.step += 1;
        self.y.step += 1;
        (mv, ox, oy)
    }

    /// Same update ball in both chains and shared-proposal resampling.
    pub fn heat_bath_step(&mut self, l: f64) -> Result<()> {
        if l < self.x.params.r() {
            return Err(invalid("L", "update radius must be at least r"));
        }
        if let Some(center) = draw_heat_bath_center(&self.x.params, l, &mut self.rng) {
            coupled_heat_bath_update_at(
                &mut self.x.config,
                &self.x.params,
                &mut self.y.config,
                &self.y.params,
                &center,
                l,
                DEFAULT_HEAT_BATH_ATTEMPTS,
                &mut self.rng,
            )?;
        }
        self.x.step += 1;
        self.y.step += 1;
        Ok(())
    }

    /// Configurations and boundary conditions agree.
    pub fn coalesced(&self) -> bool {
        self.x.params.tau == self.y.params.tau && self.x.config == self.y.config
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::metrics::hamming_distance;
    use crate::model::{sample_hard_sphere_rejection, Configuration, ModelParams, StateClass};
    use crate::rng::rng_stream;

    fn pair(p: &ModelParams, a: Configuration, b: Configuration, seed: u64) -> CoupledState {
        let x = ChainState::new(p.clone(), a, StateClass::OmegaStar, rng_stream(seed, 1)).unwrap();
        let y = ChainState::new(p.clone(), b, StateClass::OmegaStar, rng_stream(seed, 2)).unwrap();
        CoupledState::new(x, y, rng_stream(seed, 0)).unwrap()
    }

    #[test]
    fn coalescence_is_absorbing() {
        let p = ModelParams::cube(2, 6.0, 0.5).unwrap();
        let start = sample_hard_sphere_rejection(&p, &mut rng_stream(0, 9), 100_000).unwrap();
        let mut cs = pair(&p, start.clone(), start, 1);
        for t in 0..20_000 {
            if t % 2 == 0 {
                cs.single_center_step();
            } else {
                cs.heat_bath_step(2.0 * p.r()).unwrap();
            }
            assert!(cs.coalesced());
        }
    }

    #[test]
    fn deleting_v_coalesces() {
        let p = ModelParams::cube(2, 6.0, 0.25).unwrap();
        let r = p.r();
        let x = Configuration::from_points(&p, [Point::new([1.5, 1.5])]).unwrap();
        let v = Point::new([4.0, 4.0]);
        let mut y = x.clone();
        y.insert(v.clone());
        let mut cs = pair(&p, x, y, 2);
        // Force the deletion coin at a point near v.
        let mv = SingleMove { x: Point::new([4.0 + 0.5 * r, 4.0]), add: false };
        apply_single_move(&mut cs.x.config, &cs.x.params, &mv);
        apply_single_move(&mut cs.y.config, &cs.y.params, &mv);
        assert!(cs.coalesced());
    }

    #[test]
    fn far_free_insertion_keeps_distance() {
        let p = ModelParams::cube(2, 8.0, 0.25).unwrap();
        let x = Configuration::empty(&p);
        let mut y = x.clone();
        y.insert(Point::new([2.0, 2.0]));
        let mut cs = pair(&p, x, y, 3);
        let mv = SingleMove { x: Point::new([6.0, 6.0]), add: true };
        assert_eq!(apply_single_move(&mut cs.x.config, &cs.x.params, &mv), MoveOutcome::Added);
        assert_eq!(apply_single_move(&mut cs.y.config, &cs.y.params, &mv), MoveOutcome::Added);
        assert_eq!(hamming_distance(&cs.x.config, &cs.y.config), 1);
    }

    #[test]
    fn heat_bath_coalesces_when_extra_centre_in_ball() {
        let p = ModelParams::cube(2, 10.0, 0.5).unwrap();
        let r = p.r();
        let l = 3.0 * r;
        for seed in 0..50 {
            let y0 = sample_hard_sphere_rejection(&p.with_lambda(0.2).unwrap(), &mut rng_stream(seed, 5), 100_000).unwrap();
            let u = Point::new([5.0, 5.0]);
            let mut y = Configuration::empty(&p);
            for q in y0.iter().filter(|q| q.dist(&u) >= 2.0 * r) {
                y.insert(q.clone());
            }
            let mut x = y.clone();
            x.insert(u.clone());
            let mut cs = pair(&p, x, y, seed);
            let center = Point::new([5.0 + 0.5 * (l - r), 5.0]);
            coupled_heat_bath_update_at(
                &mut cs.x.config, &cs.x.params, &mut cs.y.config, &cs.y.params,
                &center, l, DEFAULT_HEAT_BATH_ATTEMPTS, &mut cs.rng,
            )
            .unwrap();
            assert_eq!(hamming_distance(&cs.x.config, &cs.y.config), 0);
        }
    }

    #[test]
    fn heat_bath_far_disagreement_unchanged() {
        let p = ModelParams::cube(2, 12.0, 0.5).unwrap();
        let r = p.r();
        let l = 2.0 * r;
        for seed in 0..50 {
            let u = Point::new([2.0, 2.0]);
            let y = Configuration::empty(&p);
            let mut x = y.clone();
            x.insert(u.clone());
            let mut cs = pair(&p, x, y, seed);
            let center = Point::new([2.0 + l + 2.0 * r + 0.01, 6.0]);
            assert!(center.dist(&u) >= l + 2.0 * r);
            coupled_heat_bath_update_at(
                &mut cs.x.config, &cs.x.params, &mut cs.y.config, &cs.y.params,
                &center, l, DEFAULT_HEAT_BATH_ATTEMPTS, &mut cs.rng,
            )
            .unwrap();
            assert_eq!(hamming_distance(&cs.x.config, &cs.y.config), 1);
        }
    }
}
