//! Uniform point sampling and hit-or-miss volume estimation.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};

use super::point::Point;
use super::shape::{Ball, Cuboid};
use super::volume::unit_ball_volume;

pub fn uniform_in_cuboid<R: Rng + ?Sized>(b: &Cuboid, rng: &mut R) -> Point {
    Point::new(
        b.low()
            .coords()
            .iter()
            .zip(b.high().coords())
            .map(|(l, h)| l + (h - l) * rng.random::<f64>()),
    )
}

/// Uniform point in an open ball. Rejection from the bounding cube up to
/// `d = 4`, Gaussian direction with radial inversion above.
pub fn uniform_in_ball<R: Rng + ?Sized>(ball: &Ball, rng: &mut R) -> Point {
    let d = ball.center.dim();
    let mut u = Point::origin(d);
    if d <= 4 {
        loop {
            let mut s = 0.0;
            for c in u.coords_mut() {
                *c = 2.0 * rng.random::<f64>() - 1.0;
                s += *c * *c;
            }
            if s < 1.0 {
                break;
            }
        }
    } else {
        let mut s = 0.0;
        for c in u.coords_mut() {
            *c = rng.sample(StandardNormal);
            s += *c * *c;
        }
        let scale = rng.random::<f64>().powf(1.0 / d as f64) / s.sqrt();
        for c in u.coords_mut() {
            *c *= scale;
        }
    }
    for (c, x) in u.coords_mut().iter_mut().zip(ball.center.coords()) {
        *c = x + ball.radius * *c;
    }
    u
}

/// Uniform point of the `l`-parallel set of a non-empty box, by rejection
/// from the box expanded by `l` on every side.
pub fn uniform_point_in_parallel_set<R: Rng + ?Sized>(
    interior: &Cuboid,
    l: f64,
    rng: &mut R,
) -> Point {
    let outer = interior.expand(l);
    loop {
        let x = uniform_in_cuboid(&outer, rng);
        if interior.dist_to(&x) <= l {
            return x;
        }
    }
}

/// Fallible wrapper of [`uniform_point_in_parallel_set`] for optional boxes.
pub fn try_uniform_point_in_parallel_set<R: Rng + ?Sized>(
    interior: Option<&Cuboid>,
    l: f64,
    rng: &mut R,
) -> Result<Point> {
    let b = interior.ok_or(Error::EmptyInterior)?;
    if l < 0.0 {
        return Err(invalid("radius", "must be non-negative"));
    }
    Ok(uniform_point_in_parallel_set(b, l, rng))
}

/// Monte-Carlo volume estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeEstimate {
    pub value: f64,
    pub std_error: f64,
    pub hits: u64,
    pub samples: u64,
}

impl VolumeEstimate {
    pub fn from_hits(total: f64, hits: u64, samples: u64) -> Self {
        let p = hits as f64 / samples as f64;
        VolumeEstimate {
            value: total * p,
            std_error: total * (p * (1.0 - p) / samples as f64).sqrt(),
            hits,
            samples,
        }
    }

    /// Complementary estimate over the same samples.
    pub fn complement(&self, total: f64) -> Self {
        VolumeEstimate::from_hits(total, self.samples - self.hits, self.samples)
    }
}

/// Hit-or-miss estimate of `|{x in ball : member(x)}|`.
pub fn estimate_region_volume<R, F>(
    member: F,
    ball: &Ball,
    samples: u64,
    rng: &mut R,
) -> Result<VolumeEstimate>
where
    R: Rng + ?Sized,
    F: FnMut(&Point) -> bool,
{
    if samples == 0 {
        return Err(invalid("samples", "must be at least 1"));
    }
    let d = ball.center.dim();
    let total = unit_ball_volume(d) * ball.radius.powi(d as i32);
    Ok(count_hits(member, ball, total, samples, rng))
}

pub(crate) fn count_hits<R, F>(
    mut member: F,
    ball: &Ball,
    total: f64,
    samples: u64,
    rng: &mut R,
) -> VolumeEstimate
where
    R: Rng + ?Sized,
    F: FnMut(&Point) -> bool,
{
    let mut hits = 0;
    for _ in 0..samples {
        if member(&uniform_in_ball(ball, rng)) {
            hits += 1;
        }
    }
    VolumeEstimate::from_hits(total, hits, samples)
}
