//! Partition function of boxes that hold at most two spheres, by midpoint
//! quadrature on a tensor grid over the interior.

use crate::error::{invalid, Error, Result};
use crate::geometry::{Cuboid, Point};

use super::config::Configuration;
use super::params::ModelParams;

pub const DEFAULT_QUADRATURE_CELLS: usize = 200;
pub const DEFAULT_POSITION_BINS: usize = 2;

/// Exact law of a small-domain model, resolved by sphere count and by the
/// position of a lone sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct Oracle {
    pub z: f64,
    pub expected_count: f64,
    /// `P(|X| = k)` for `k = 0..=max_spheres`.
    pub count_pmf: Vec<f64>,
    /// `k`-sphere integrals `int 1[pairwise >= 2r]` (unordered `k!` excluded).
    pub integrals: Vec<f64>,
    pub bins_per_axis: usize,
    /// Law of [`outcome_index`]: empty, one sphere per position bin, two
    /// spheres, more spheres.
    pub outcome_pmf: Vec<f64>,
}

/// Largest admissible sphere count certified for the interior box, and the
/// diameter that certifies it.
fn capacity_check(interior: &Cuboid, r: f64, max_spheres: usize) -> Result<()> {
    let limit = 2.0 * r;
    let diameter = match max_spheres {
        1 => interior.diameter(),
        2 => {
            let (a, b) = interior.halves();
            a.diameter().max(b.diameter())
        }
        _ => return Err(invalid("max_spheres", "must be 1 or 2")),
    };
    if diameter < limit {
        Ok(())
    } else {
        Err(Error::OracleDomainTooLarge {
            max_spheres,
            diameter,
            limit,
        })
    }
}

pub fn oracle_small_domain(
    params: &ModelParams,
    max_spheres: usize,
    quadrature_cells: usize,
) -> Result<Oracle> {
    oracle_with_bins(params, max_spheres, quadrature_cells, DEFAULT_POSITION_BINS)
}

pub fn oracle_with_bins(
    params: &ModelParams,
    max_spheres: usize,
    quadrature_cells: usize,
    bins_per_axis: usize,
) -> Result<Oracle> {
    if quadrature_cells == 0 {
        return Err(invalid("quadrature_cells", "must be at least 1"));
    }
    if bins_per_axis == 0 {
        return Err(invalid("bins_per_axis", "must be at least 1"));
    }
    let d = params.d();
    let n_bins = bins_per_axis.pow(d as u32);
    let lambda = params.lambda;
    let Some(interior) = params.interior() else {
        if !(1..=2).contains(&max_spheres) {
            return Err(invalid("max_spheres", "must be 1 or 2"));
        }
        let mut outcome_pmf = vec![0.0; n_bins + 3];
        outcome_pmf[0] = 1.0;
        let mut count_pmf = vec![0.0; max_spheres + 1];
        count_pmf[0] = 1.0;
        return Ok(Oracle {
            z: 1.0,
            expected_count: 0.0,
            count_pmf,
            integrals: vec![0.0; max_spheres],
            bins_per_axis,
            outcome_pmf,
        });
    };
    capacity_check(interior, params.r(), max_spheres)?;

    let q = quadrature_cells;
    let sides = interior.sides();
    let h: Vec<f64> = sides.iter().map(|s| s / q as f64).collect();
    let cell_volume: f64 = h.iter().product();
    let mids: Vec<Vec<f64>> = (0..d)
        .map(|a| (0..q).map(|j| interior.low()[a] + (j as f64 + 0.5) * h[a]).collect())
        .collect();
    let total = q.pow(d as u32);

    // Allowed cells and lone-sphere bin masses.
    let mut allowed = vec![false; total];
    let mut bin_mass = vec![0.0; n_bins];
    let mut idx = vec![0usize; d];
    let mut count = 0usize;
    for slot in allowed.iter_mut() {
        let x = Point::new((0..d).map(|a| mids[a][idx[a]]));
        if !params.tau.contains(&x, interior) {
            *slot = true;
            count += 1;
            let bin = (0..d).fold(0, |acc, a| acc * bins_per_axis + idx[a] * bins_per_axis / q);
            bin_mass[bin] += cell_volume;
        }
        odometer(&mut idx, q);
    }
    let i1 = count as f64 * cell_volume;

    let i2 = if max_spheres == 2 {
        ordered_pair_integral(&allowed, &mids, q, d, params.r()) * cell_volume * cell_volume
    } else {
        0.0
    };

    let mut integrals = vec![i1];
    let mut terms = vec![1.0, lambda * i1];
    if max_spheres == 2 {
        integrals.push(i2);
        terms.push(lambda * lambda * i2 / 2.0);
    }
    let z: f64 = terms.iter().sum();
    let count_pmf: Vec<f64> = terms.iter().map(|t| t / z).collect();
    let expected_count = count_pmf.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
    let mut outcome_pmf = vec![0.0; n_bins + 3];
    outcome_pmf[0] = count_pmf[0];
    for (b, m) in bin_mass.iter().enumerate() {
        outcome_pmf[1 + b] = lambda * m / z;
    }
    if max_spheres == 2 {
        outcome_pmf[1 + n_bins] = count_pmf[2];
    }
    Ok(Oracle {
        z,
        expected_count,
        count_pmf,
        integrals,
        bins_per_axis,
        outcome_pmf,
    })
}

fn odometer(idx: &mut [usize], q: usize) {
    for a in (0..idx.len()).rev() {
        idx[a] += 1;
        if idx[a] < q {
            return;
        }
        idx[a] = 0;
    }
}

/// Number of ordered allowed cell pairs with midpoints at least `2r` apart.
/// Rows along the last axis carry prefix sums of allowed cells, so each
/// (cell, row) pair costs O(1).
fn ordered_pair_integral(allowed: &[bool], mids: &[Vec<f64>], q: usize, d: usize, r: f64) -> f64 {
    let rows = allowed.len() / q;
    let mut prefix = vec![0u64; rows * (q + 1)];
    let mut n_allowed = 0u64;
    for row in 0..rows {
        let base = row * (q + 1);
        for j in 0..q {
            let a = allowed[row * q + j] as u64;
            prefix[base + j + 1] = prefix[base + j] + a;
            n_allowed += a;
        }
    }
    let last = d - 1;
    let low = mids[last][0];
    let step = if q > 1 { mids[last][1] - mids[last][0] } else { 1.0 };
    let four_r2 = 4.0 * r * r;
    let mut row_coords = vec![vec![0.0; last]; rows];
    let mut ridx = vec![0usize; last];
    for rc in row_coords.iter_mut() {
        for a in 0..last {
            rc[a] = mids[a][ridx[a]];
        }
        odometer(&mut ridx, q);
    }
    let mut close = 0u64;
    for (xrow, xrc) in row_coords.iter().enumerate() {
        for jx in 0..q {
            if !allowed[xrow * q + jx] {
                continue;
            }
            let xl = mids[last][jx];
            for (yrow, yrc) in row_coords.iter().enumerate() {
                let delta2: f64 = xrc.iter().zip(yrc).map(|(a, b)| (a - b) * (a - b)).sum();
                if delta2 >= four_r2 {
                    continue;
                }
                let hh = (four_r2 - delta2).sqrt();
                // Cells j with |low + j*step - xl| < hh.
                let lo = ((xl - hh - low) / step).floor() + 1.0;
                let hi = ((xl + hh - low) / step).ceil();
                let lo = lo.clamp(0.0, q as f64) as usize;
                let hi = hi.clamp(0.0, q as f64) as usize;
                if hi > lo {
                    let base = yrow * (q + 1);
                    close += prefix[base + hi] - prefix[base + lo];
                }
            }
        }
    }
    (n_allowed * n_allowed - close) as f64
}

/// Outcome of the stationarity statistic: `0` for the empty configuration,
/// `1 + bin` for a lone sphere (bins split the interior evenly per axis),
/// `1 + bins^d` for two spheres and `2 + bins^d` for more.
pub fn outcome_index(config: &Configuration, interior: Option<&Cuboid>, bins_per_axis: usize) -> usize {
    let d = config.domain().dim();
    let n_bins = bins_per_axis.pow(d as u32);
    match config.len() {
        0 => 0,
        1 => {
            let Some(interior) = interior else { return 1 + n_bins + 1 };
            let p = config.iter().next().expect("one centre");
            let bin = (0..d).fold(0, |acc, a| {
                let t = (p[a] - interior.low()[a]) / (interior.high()[a] - interior.low()[a]);
                let b = ((t * bins_per_axis as f64).floor() as isize).clamp(0, bins_per_axis as isize - 1);
                acc * bins_per_axis + b as usize
            });
            1 + bin
        }
        2 => 1 + n_bins,
        _ => 2 + n_bins,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Cuboid;
    use crate::model::BoundaryCondition;

    fn single_box(side: f64, lambda: f64) -> ModelParams {
        ModelParams::cube(2, side, lambda).unwrap()
    }

    #[test]
    fn single_sphere_closed_form() {
        for lambda in [0.5, 1.0, 2.0] {
            let p = single_box(1.6, lambda);
            let v = p.interior_volume();
            let o = oracle_small_domain(&p, 1, 50).unwrap();
            assert!((o.z - (1.0 + lambda * v)).abs() < 1e-12);
            assert!((o.expected_count - lambda * v / (1.0 + lambda * v)).abs() < 1e-12);
            assert!((o.outcome_pmf.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_fugacity() {
        let o = oracle_small_domain(&single_box(1.6, 0.0), 1, 20).unwrap();
        assert_eq!((o.z, o.expected_count), (1.0, 0.0));
    }

    #[test]
    fn rejects_large_domain_with_diameter() {
        let p = single_box(3.0, 1.0);
        match oracle_small_domain(&p, 1, 10) {
            Err(Error::OracleDomainTooLarge { diameter, limit, .. }) => {
                assert!(diameter >= limit);
                assert!((diameter - p.interior().unwrap().diameter()).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        assert!(oracle_small_domain(&p, 3, 10).is_err());
    }

    fn two_sphere_params() -> ModelParams {
        let r = crate::geometry::sphere_radius(2).unwrap();
        let b = Cuboid::with_sides(&[5.0 * r, 3.0 * r]).unwrap();
        ModelParams::new(1.0, b, BoundaryCondition::free()).unwrap()
    }

    #[test]
    fn two_sphere_quadrature_converges() {
        let p = two_sphere_params();
        assert!(oracle_small_domain(&p, 1, 10).is_err());
        let e: Vec<f64> = [100, 200, 400]
            .iter()
            .map(|&q| oracle_small_domain(&p, 2, q).unwrap().expected_count)
            .collect();
        assert!((e[1] - e[0]).abs() < 1e-3, "{e:?}");
        assert!((e[2] - e[1]).abs() < 1e-3, "{e:?}");
        assert!(e[2] > 0.0);
    }

    /// For a 1-D interval the pair integral is known in closed form:
    /// ordered pairs in `[0, a]^2` with `|x - y| >= 2r` have area `(a - 2r)^2`.
    #[test]
    fn pair_integral_matches_interval_closed_form() {
        let r = 0.5;
        let a = 1.6;
        let b = Cuboid::with_sides(&[a + 2.0 * r]).unwrap();
        let p = ModelParams::new(1.0, b, BoundaryCondition::free()).unwrap();
        let o = oracle_small_domain(&p, 2, 2000).unwrap();
        let want = (a - 2.0 * r).powi(2);
        assert!((o.integrals[1] - want).abs() < 2e-3, "{} vs {want}", o.integrals[1]);
    }

    #[test]
    fn tau_monotonicity() {
        let p = single_box(1.7, 1.0);
        let c = p.interior().unwrap().center();
        let small = p.with_tau(BoundaryCondition::free().with_ball(c.clone(), 0.05)).unwrap();
        let big = p.with_tau(BoundaryCondition::free().with_ball(c, 0.15)).unwrap();
        let z0 = oracle_small_domain(&p, 1, 200).unwrap().z;
        let z1 = oracle_small_domain(&small, 1, 200).unwrap().z;
        let z2 = oracle_small_domain(&big, 1, 200).unwrap().z;
        assert!(z0 >= z1 && z1 >= z2, "{z0} {z1} {z2}");
        assert!(z2 < z0);
    }

    #[test]
    fn outcome_bins() {
        let p = single_box(1.6, 1.0);
        let i = p.interior().unwrap();
        let lowish = Point::new([i.low()[0] + 0.01, i.high()[1] - 0.01]);
        let c = Configuration::from_points(&p, [lowish]).unwrap();
        assert_eq!(outcome_index(&c, Some(i), 2), 1 + 1);
        assert_eq!(outcome_index(&Configuration::empty(&p), Some(i), 2), 0);
    }
}
