use rand::Rng;

use crate::error::{invalid, Result};
use crate::geometry::{uniform_in_cuboid, VolumeEstimate};

use super::config::Configuration;
use super::params::ModelParams;

/// Hit-or-miss estimate of `|{y in Lambda_Int \ tau : dist(y, X) >= 2r}| / |Lambda|`.
pub fn free_volume_fraction_estimate<R: Rng + ?Sized>(
    config: &Configuration,
    params: &ModelParams,
    samples: u64,
    rng: &mut R,
) -> Result<VolumeEstimate> {
    if samples == 0 {
        return Err(invalid("samples", "must be at least 1"));
    }
    let Some(interior) = params.interior() else {
        return Ok(VolumeEstimate::from_hits(0.0, 0, samples));
    };
    let two_r = 2.0 * params.r();
    let mut hits = 0;
    for _ in 0..samples {
        let y = uniform_in_cuboid(interior, rng);
        if !params.tau.contains(&y, interior) && !config.any_within(&y, two_r) {
            hits += 1;
        }
    }
    Ok(VolumeEstimate::from_hits(
        interior.volume() / params.n(),
        hits,
        samples,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_configuration_is_interior_fraction() {
        let p = ModelParams::cube(2, 4.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let f = free_volume_fraction_estimate(&Configuration::empty(&p), &p, 1000, &mut rng).unwrap();
        assert_eq!(f.value, p.interior_volume() / 16.0);
        assert_eq!(f.std_error, 0.0);
    }

    #[test]
    fn jammed_configuration_has_no_free_volume() {
        let p = ModelParams::cube(2, 4.0, 1.0).unwrap();
        let i = p.interior().unwrap().clone();
        // A lattice with spacing r covers the interior with 2r-balls.
        let r = p.r();
        let mut pts = Vec::new();
        let mut x = i.low()[0];
        while x <= i.high()[0] + r {
            let mut y = i.low()[1];
            while y <= i.high()[1] + r {
                pts.push(Point::new([x.min(i.high()[0]), y.min(i.high()[1])]));
                y += r;
            }
            x += r;
        }
        let c = Configuration::from_points(&p, pts).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = free_volume_fraction_estimate(&c, &p, 1000, &mut rng).unwrap();
        assert_eq!(f.value, 0.0);
        assert!(free_volume_fraction_estimate(&c, &p, 0, &mut rng).is_err());
    }

    #[test]
    fn empty_interior() {
        let p = ModelParams::cube(2, 1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = free_volume_fraction_estimate(&Configuration::empty(&p), &p, 10, &mut rng).unwrap();
        assert_eq!(f.value, 0.0);
    }
}
