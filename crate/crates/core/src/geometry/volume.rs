//! Ball volumes, the unit-volume sphere radius and Steiner volumes of
//! parallel sets of boxes.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

use super::shape::Cuboid;

/// Volume of the unit ball in `R^k` (`1` for `k = 0`).
///
/// Uses the recurrence `kappa_k = kappa_{k-2} * 2 pi / k`, which is exact up
/// to rounding for every `k` and avoids evaluating the Gamma function.
pub fn unit_ball_volume(k: usize) -> f64 {
    let (mut v, start) = if k.is_multiple_of(2) { (1.0, 2) } else { (2.0, 3) };
    let mut j = start;
    while j <= k {
        v *= 2.0 * PI / j as f64;
        j += 2;
    }
    v
}

/// Radius `r_d` of a ball of volume one in `R^d`.
pub fn sphere_radius(d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(unit_ball_volume(d).powf(-1.0 / d as f64))
}

/// `|B_l(x)| = (l / r_d)^d` in `R^d`.
pub fn ball_volume(l: f64, d: usize) -> Result<f64> {
    Space::new(d)?.ball_volume(l)
}

/// Dimension plus the derived sphere radius, computed once per experiment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Space {
    pub d: usize,
    pub r: f64,
}

impl Space {
    pub fn new(d: usize) -> Result<Self> {
        Ok(Space {
            d,
            r: sphere_radius(d)?,
        })
    }

    pub fn ball_volume(&self, l: f64) -> Result<f64> {
        if l < 0.0 || l.is_nan() {
            return Err(invalid("radius", "must be non-negative"));
        }
        Ok(self.ball_volume_unchecked(l))
    }

    #[inline]
    pub(crate) fn ball_volume_unchecked(&self, l: f64) -> f64 {
        (l / self.r).powi(self.d as i32)
    }

    /// `2^d`, the volume of `B_{2r}`.
    #[inline]
    pub fn exclusion_volume(&self) -> f64 {
        (2.0f64).powi(self.d as i32)
    }

    /// The interior `Lambda_Int` of a domain.
    pub fn interior(&self, domain: &Cuboid) -> Option<Cuboid> {
        box_interior(domain, self.r)
    }
}

/// `{x in box : dist(x, box^c) >= margin}`, or `None` if empty.
pub fn box_interior(domain: &Cuboid, margin: f64) -> Option<Cuboid> {
    domain.shrink(margin)
}

/// Exact volume of the `l`-parallel set of a box by the Steiner formula
/// `sum_k kappa_k l^k e_{d-k}(sides)`.
pub fn parallel_set_volume_box(domain: &Cuboid, l: f64) -> f64 {
    let sides = domain.sides();
    let d = sides.len();
    // e[j] = elementary symmetric polynomial of degree j in the sides.
    let mut e = vec![0.0; d + 1];
    e[0] = 1.0;
    for (i, &a) in sides.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            e[j] += a * e[j - 1];
        }
    }
    (0..=d)
        .map(|k| unit_ball_volume(k) * l.powi(k as i32) * e[d - k])
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_matches_unit_volume() {
        assert!((sphere_radius(2).unwrap() - 0.564190).abs() < 1e-6);
        assert!((sphere_radius(3).unwrap() - 0.620350).abs() < 1e-6);
        assert_eq!(sphere_radius(1).unwrap(), 0.5);
        assert_eq!(sphere_radius(0), Err(Error::ZeroDimension));
        let r2 = sphere_radius(2).unwrap();
        assert!((PI * r2 * r2 - 1.0).abs() < 1e-14);
        let r3 = sphere_radius(3).unwrap();
        assert!((4.0 / 3.0 * PI * r3.powi(3) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn unit_ball_small_dims() {
        assert_eq!(unit_ball_volume(0), 1.0);
        assert_eq!(unit_ball_volume(1), 2.0);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-15);
        assert!((unit_ball_volume(4) - PI * PI / 2.0).abs() < 1e-14);
        assert!((unit_ball_volume(5) - 8.0 * PI * PI / 15.0).abs() < 1e-13);
    }

    #[test]
    fn ball_volume_normalisation() {
        for d in 1..=10 {
            let s = Space::new(d).unwrap();
            assert_eq!(s.ball_volume(2.0 * s.r).unwrap(), 2f64.powi(d as i32));
        }
        let s7 = Space::new(7).unwrap();
        assert!((s7.ball_volume(s7.r).unwrap() - 1.0).abs() < 1e-15);
        assert!((ball_volume(1.0, 2).unwrap() - PI).abs() < 1e-13);
        assert!(ball_volume(-0.1, 2).is_err());
    }

    #[test]
    fn interior_shrinks_sides() {
        let b = Cuboid::cube(2, 2.0).unwrap();
        let i = box_interior(&b, 0.5).unwrap();
        assert_eq!(i.low().coords(), &[0.5, 0.5]);
        assert_eq!(i.high().coords(), &[1.5, 1.5]);
        assert!(box_interior(&Cuboid::cube(2, 1.0).unwrap(), 0.6).is_none());
        assert_eq!(box_interior(&b, 0.0).unwrap(), b);
    }

    #[test]
    fn steiner_unit_square() {
        let b = Cuboid::cube(2, 1.0).unwrap();
        assert!((parallel_set_volume_box(&b, 1.0) - (5.0 + PI)).abs() < 1e-12);
        assert_eq!(parallel_set_volume_box(&b, 0.0), 1.0);
        let b3 = Cuboid::with_sides(&[1.0, 2.0, 3.0]).unwrap();
        // abc + 2(ab+bc+ca) l + pi (a+b+c) l^2 + 4/3 pi l^3
        let l = 0.7;
        let want = 6.0 + 2.0 * 11.0 * l + PI * 6.0 * l * l + 4.0 / 3.0 * PI * l.powi(3);
        assert!((parallel_set_volume_box(&b3, l) - want).abs() < 1e-12);
    }
}
