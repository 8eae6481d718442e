use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{invalid, Error, Result};
use crate::geometry::{uniform_in_cuboid, Cuboid, Point};

use super::config::Configuration;
use super::params::ModelParams;

/// Draws `N ~ Poisson(mean)`; `0` for a zero mean.
pub(crate) fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).map_or(0, |p| p.sample(rng) as u64)
}

/// Exact sample of the hard sphere measure by rejection from the Poisson
/// process of intensity `lambda` on the interior, thinned by `tau`.
pub fn sample_hard_sphere_rejection<R: Rng + ?Sized>(
    params: &ModelParams,
    rng: &mut R,
    max_attempts: u64,
) -> Result<Configuration> {
    sample_with_stats(params, rng, max_attempts).map(|(c, _)| c)
}

/// As [`sample_hard_sphere_rejection`], also returning the number of
/// attempts used.
pub fn sample_with_stats<R: Rng + ?Sized>(
    params: &ModelParams,
    rng: &mut R,
    max_attempts: u64,
) -> Result<(Configuration, u64)> {
    if max_attempts == 0 {
        return Err(invalid("max_attempts", "must be at least 1"));
    }
    let mut config = Configuration::empty(params);
    let Some(interior) = params.interior().cloned() else {
        return Ok((config, 1));
    };
    let mean = params.lambda * interior.volume();
    for attempt in 1..=max_attempts {
        config.clear();
        if try_fill(params, &interior, mean, &mut config, rng) {
            return Ok((config, attempt));
        }
    }
    Err(Error::RejectionExhausted {
        attempts: max_attempts,
    })
}

fn try_fill<R: Rng + ?Sized>(
    params: &ModelParams,
    interior: &Cuboid,
    mean: f64,
    config: &mut Configuration,
    rng: &mut R,
) -> bool {
    let two_r = 2.0 * params.r();
    let n = poisson_count(mean, rng);
    for _ in 0..n {
        let x: Point = uniform_in_cuboid(interior, rng);
        if params.tau.contains(&x, interior) {
            continue;
        }
        if config.any_within(&x, two_r) {
            return false;
        }
        config.insert(x);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{is_valid_configuration, BoundaryCondition};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_fugacity_gives_empty() {
        let p = ModelParams::cube(2, 5.0, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..10 {
            assert!(sample_hard_sphere_rejection(&p, &mut rng, 1).unwrap().is_empty());
        }
    }

    #[test]
    fn samples_are_valid_and_acceptance_positive() {
        let p = ModelParams::cube(2, 10.0, 0.25).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut attempts = 0;
        for _ in 0..200 {
            let (c, a) = sample_with_stats(&p, &mut rng, 100_000).unwrap();
            assert!(is_valid_configuration(&c, &p));
            attempts += a;
        }
        let rate = 200.0 / attempts as f64;
        assert!(rate > 0.0 && rate < 1.0, "acceptance {rate}");
    }

    #[test]
    fn tau_is_respected() {
        let p = ModelParams::cube(2, 6.0, 0.5)
            .unwrap()
            .with_tau(BoundaryCondition::free().with_ball(Point::new([3.0, 3.0]), 1.5))
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let c = sample_hard_sphere_rejection(&p, &mut rng, 10_000).unwrap();
            assert!(is_valid_configuration(&c, &p));
        }
    }

    #[test]
    fn exhaustion_is_reported() {
        let p = ModelParams::cube(2, 30.0, 5.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(
            sample_hard_sphere_rejection(&p, &mut rng, 3).unwrap_err(),
            Error::RejectionExhausted { attempts: 3 }
        );
        assert!(sample_hard_sphere_rejection(&p, &mut rng, 0).is_err());
    }

    #[test]
    fn empty_interior_gives_empty() {
        let p = ModelParams::cube(2, 1.0, 3.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert!(sample_hard_sphere_rejection(&p, &mut rng, 1).unwrap().is_empty());
    }
}
