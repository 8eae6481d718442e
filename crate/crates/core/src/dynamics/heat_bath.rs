use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{uniform_in_cuboid, uniform_point_in_parallel_set, Ball, Cuboid, Point};
use crate::model::{poisson_count, Configuration, ModelParams};

pub const DEFAULT_HEAT_BATH_ATTEMPTS: u64 = 10_000;

/// The part of the update ball where new centres may appear, with the box
/// proposals are drawn from.
pub(crate) struct ResampleRegion {
    pub ball: Ball,
    pub proposal_box: Option<Cuboid>,
}

impl ResampleRegion {
    pub fn new(params: &ModelParams, x: &Point, radius: f64) -> Self {
        let ball = Ball::new(x.clone(), radius.max(0.0));
        let proposal_box = params
            .interior()
            .and_then(|i| ball.bounding_box().intersection(i));
        ResampleRegion { ball, proposal_box }
    }

    fn mean(&self, lambda: f64) -> f64 {
        self.proposal_box.as_ref().map_or(0.0, |b| lambda * b.volume())
    }
}

/// Draws the heat-bath update centre, uniform in the `l`-parallel set of the
/// interior. `None` when the interior is empty.
pub fn draw_heat_bath_center<R: Rng + ?Sized>(params: &ModelParams, l: f64, rng: &mut R) -> Option<Point> {
    params
        .interior()
        .map(|i| uniform_point_in_parallel_set(i, l, rng))
}

/// Whether proposal `y` survives thinning for the chain with these centres
/// and boundary condition.
#[inline]
fn admissible_in(y: &Point, region: &ResampleRegion, config: &Configuration, params: &ModelParams) -> bool {
    region.ball.contains(y) && params.admissible(y) && !config.any_within(y, 2.0 * params.r())
}

/// Draws one batch of proposals into `buf`.
fn propose<R: Rng + ?Sized>(region: &ResampleRegion, lambda: f64, buf: &mut Vec<Point>, rng: &mut R) {
    buf.clear();
    if let Some(b) = &region.proposal_box {
        let n = poisson_count(region.mean(lambda), rng);
        buf.extend((0..n).map(|_| uniform_in_cuboid(b, rng)));
    }
}

/// Filters a batch for one chain; `None` if two survivors conflict.
fn accept_batch(
    batch: &[Point],
    region: &ResampleRegion,
    config: &Configuration,
    params: &ModelParams,
) -> Option<Vec<Point>> {
    let four_r2 = 4.0 * params.r() * params.r();
    let mut kept: Vec<Point> = Vec::new();
    for y in batch {
        if !admissible_in(y, region, config, params) {
            continue;
        }
        if kept.iter().any(|k| k.dist_sq(y) < four_r2) {
            return None;
        }
        kept.push(y.clone());
    }
    Some(kept)
}

fn exhausted(attempts: u64, region: &ResampleRegion) -> Error {
    Error::HeatBathExhausted {
        attempts,
        radius: region.ball.radius,
        center: region.ball.center.coords().to_vec(),
    }
}

/// Removes the centres in `B_{l-r}(x)` and resamples that ball from the
/// conditional measure given the remaining centres, by rejection. On
/// failure the configuration is restored.
pub fn heat_bath_update_at<R: Rng + ?Sized>(
    config: &mut Configuration,
    params: &ModelParams,
    x: &Point,
    l: f64,
    max_attempts: u64,
    rng: &mut R,
) -> Result<()> {
    let region = ResampleRegion::new(params, x, l - params.r());
    let removed = config.remove_within(x, region.ball.radius);
    let mut buf = Vec::new();
    for _ in 0..max_attempts {
        propose(&region, params.lambda, &mut buf, rng);
        if let Some(kept) = accept_batch(&buf, &region, config, params) {
            for y in kept {
                config.insert(y);
            }
            return Ok(());
        }
    }
    for y in removed {
        config.insert(y);
    }
    Err(exhausted(max_attempts, &region))
}

/// One heat-bath update with a random centre.
pub fn heat_bath_update<R: Rng + ?Sized>(
    config: &mut Configuration,
    params: &ModelParams,
    l: f64,
    max_attempts: u64,
    rng: &mut R,
) -> Result<()> {
    match draw_heat_bath_center(params, l, rng) {
        Some(x) => heat_bath_update_at(config, params, &x, l, max_attempts, rng),
        None => Ok(()),
    }
}

/// Coupled update of two chains sharing domain and fugacity: same centre,
/// same proposal stream, each chain accepting by its own constraints.
/// When the constraints agree on the ball, both chains get the same
/// resampled centres.
#[allow(clippy::too_many_arguments)]
pub fn coupled_heat_bath_update_at<R: Rng + ?Sized>(
    x_config: &mut Configuration,
    x_params: &ModelParams,
    y_config: &mut Configuration,
    y_params: &ModelParams,
    center: &Point,
    l: f64,
    max_attempts: u64,
    rng: &mut R,
) -> Result<()> {
    let radius = l - x_params.r();
    let region_x = ResampleRegion::new(x_params, center, radius);
    let region_y = ResampleRegion::new(y_params, center, radius);
    let removed_x = x_config.remove_within(center, radius);
    let removed_y = y_config.remove_within(center, radius);
    let mut done_x: Option<Vec<Point>> = None;
    let mut done_y: Option<Vec<Point>> = None;
    let mut buf = Vec::new();
    for _ in 0..max_attempts {
        propose(&region_x, x_params.lambda, &mut buf, rng);
        if done_x.is_none() {
            done_x = accept_batch(&buf, &region_x, x_config, x_params);
        }
        if done_y.is_none() {
            done_y = accept_batch(&buf, &region_y, y_config, y_params);
        }
        if done_x.is_some() && done_y.is_some() {
            break;
        }
    }
    match (done_x, done_y) {
        (Some(a), Some(b)) => {
            for p in a {
                x_config.insert(p);
            }
            for p in b {
                y_config.insert(p);
            }
            Ok(())
        }
        _ => {
            for p in removed_x {
                x_config.insert(p);
            }
            for p in removed_y {
                y_config.insert(p);
            }
            Err(exhausted(max_attempts, &region_x))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{is_valid_configuration, BoundaryCondition};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_fugacity_empties_the_ball() {
        let p = ModelParams::cube(2, 6.0, 0.0).unwrap();
        let mut c = Configuration::from_points(&p, [Point::new([3.0, 3.0])]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        heat_bath_update_at(&mut c, &p, &Point::new([3.2, 3.0]), 2.0, 10, &mut rng).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn resamples_remain_valid() {
        let p = ModelParams::cube(2, 8.0, 0.5)
            .unwrap()
            .with_tau(BoundaryCondition::free().with_ball(Point::new([4.0, 4.0]), 1.0))
            .unwrap();
        let mut c = Configuration::empty(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            heat_bath_update(&mut c, &p, 3.0 * p.r(), DEFAULT_HEAT_BATH_ATTEMPTS, &mut rng).unwrap();
        }
        assert!(is_valid_configuration(&c, &p));
        assert!(!c.is_empty());
    }

    #[test]
    fn exhaustion_restores_configuration() {
        let p = ModelParams::cube(2, 20.0, 50.0).unwrap();
        let start = Configuration::from_points(&p, [Point::new([10.0, 10.0])]).unwrap();
        let mut c = start.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let err = heat_bath_update_at(&mut c, &p, &Point::new([10.0, 10.0]), 8.0, 3, &mut rng).unwrap_err();
        assert!(matches!(err, Error::HeatBathExhausted { attempts: 3, .. }));
        assert_eq!(c, start);
    }

    #[test]
    fn ball_outside_interior_only_deletes() {
        let p = ModelParams::cube(2, 6.0, 1.0).unwrap();
        let mut c = Configuration::empty(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // Ball of radius 0.1 centred outside the domain.
        heat_bath_update_at(&mut c, &p, &Point::new([-1.0, 3.0]), p.r() + 0.1, 1, &mut rng).unwrap();
        assert!(c.is_empty());
    }
}
