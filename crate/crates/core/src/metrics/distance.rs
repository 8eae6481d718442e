use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geometry::{Cuboid, Point};
use crate::model::Configuration;

/// `|X sym-diff Y|`, matching centres by exact coordinates (multisets).
pub fn hamming_distance(x: &Configuration, y: &Configuration) -> usize {
    let mut net: BTreeMap<_, i64> = BTreeMap::new();
    for p in x.iter() {
        *net.entry(p.bit_key()).or_default() += 1;
    }
    for p in y.iter() {
        *net.entry(p.bit_key()).or_default() -= 1;
    }
    net.values().map(|v| v.unsigned_abs() as usize).sum()
}

/// Centres whose spheres lie entirely inside `sub`, as a configuration on
/// `sub`.
pub fn project_to_subregion(config: &Configuration, sub: &Cuboid) -> Result<Configuration> {
    if !sub.is_subset_of(config.domain()) {
        return Err(Error::NotASubregion);
    }
    let r = config.r();
    let mut out = Configuration::empty_in(sub, r);
    if let Some(inner) = sub.shrink(r) {
        for p in config.iter().filter(|p| inner.contains(p)) {
            out.insert(p.clone());
        }
    }
    Ok(out)
}

/// Discrete summary of the projection to a subregion: sphere count plus a
/// bitmask of occupied cells of a `grid_cells`-per-axis grid.
#[derive(Clone, Debug, PartialEq)]
pub struct OccupancyStatistic {
    pub subregion: Cuboid,
    pub grid_cells: usize,
}

/// Value of an [`OccupancyStatistic`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccupancyKey {
    pub count: usize,
    pub mask: Vec<u64>,
}

impl OccupancyStatistic {
    pub const DEFAULT_GRID_CELLS: usize = 4;

    pub fn new(subregion: Cuboid, grid_cells: usize) -> Self {
        OccupancyStatistic {
            subregion,
            grid_cells,
        }
    }

    pub fn counts_only(subregion: Cuboid) -> Self {
        OccupancyStatistic::new(subregion, 0)
    }

    fn cell_of(&self, p: &Point) -> usize {
        let g = self.grid_cells;
        let lo = self.subregion.low();
        let hi = self.subregion.high();
        (0..p.dim()).fold(0, |acc, a| {
            let t = (p[a] - lo[a]) / (hi[a] - lo[a]);
            let c = ((t * g as f64).floor() as isize).clamp(0, g as isize - 1) as usize;
            acc * g + c
        })
    }

    pub fn evaluate(&self, config: &Configuration) -> OccupancyKey {
        let r = config.r();
        let inner = self.subregion.shrink(r);
        let d = self.subregion.dim();
        let words = if self.grid_cells == 0 {
            0
        } else {
            self.grid_cells.pow(d as u32).div_ceil(64)
        };
        let mut key = OccupancyKey {
            count: 0,
            mask: vec![0; words],
        };
        let Some(inner) = inner else { return key };
        for p in config.iter().filter(|p| inner.contains(p)) {
            key.count += 1;
            if words > 0 {
                let c = self.cell_of(p);
                key.mask[c / 64] |= 1 << (c % 64);
            }
        }
        key
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use proptest::prelude::*;

    fn params() -> ModelParams {
        ModelParams::cube(2, 10.0, 1.0).unwrap()
    }

    #[test]
    fn hamming_examples() {
        let p = params();
        let x = Configuration::from_points(&p, [Point::new([2.0, 2.0]), Point::new([5.0, 5.0])]).unwrap();
        assert_eq!(hamming_distance(&x, &x), 0);
        let mut y = x.clone();
        y.insert(Point::new([8.0, 8.0]));
        assert_eq!(hamming_distance(&x, &y), 1);
        let z = Configuration::from_points(&p, [Point::new([3.0, 3.0])]).unwrap();
        assert_eq!(hamming_distance(&x, &z), 3);
    }

    #[test]
    fn projection_examples() {
        let p = params();
        let r = p.r();
        let x = Configuration::from_points(&p, [Point::new([2.0, 2.0]), Point::new([5.0, 5.0])]).unwrap();
        assert_eq!(project_to_subregion(&x, &p.domain).unwrap(), x);
        let tiny = Cuboid::new(Point::new([1.7, 1.7]), Point::new([2.6, 2.6])).unwrap();
        assert!(tiny.volume() < 1.0);
        assert!(project_to_subregion(&x, &tiny).unwrap().is_empty());
        let sub = Cuboid::new(Point::new([2.0 - r + 1e-9, 0.0]), Point::new([6.0, 6.0])).unwrap();
        let proj = project_to_subregion(&x, &sub).unwrap();
        assert_eq!(proj.len(), 1);
        let outside = Cuboid::new(Point::new([5.0, 5.0]), Point::new([11.0, 6.0])).unwrap();
        assert_eq!(project_to_subregion(&x, &outside).unwrap_err(), Error::NotASubregion);
    }

    #[test]
    fn occupancy_keys() {
        let p = params();
        let stat = OccupancyStatistic::new(p.domain.clone(), 4);
        let x = Configuration::from_points(&p, [Point::new([1.0, 1.0]), Point::new([9.0, 9.0])]).unwrap();
        let k = stat.evaluate(&x);
        assert_eq!(k.count, 2);
        assert_eq!(k.mask, vec![1 | (1 << 15)]);
        assert_eq!(OccupancyStatistic::counts_only(p.domain.clone()).evaluate(&x).mask, Vec::<u64>::new());
    }

    fn config_from(p: &ModelParams, raw: &[(f64, f64)]) -> Configuration {
        Configuration::from_points(p, raw.iter().map(|&(a, b)| Point::new([a, b]))).unwrap()
    }

    proptest! {
        #[test]
        fn hamming_is_a_metric(
            a in proptest::collection::vec((0.0f64..4.0, 0.0f64..4.0), 0..6),
            b in proptest::collection::vec((0.0f64..4.0, 0.0f64..4.0), 0..6),
            c in proptest::collection::vec((0.0f64..4.0, 0.0f64..4.0), 0..6),
            shared in proptest::collection::vec((0.0f64..4.0, 0.0f64..4.0), 0..4),
        ) {
            let p = ModelParams::cube(2, 4.0, 1.0).unwrap();
            let mk = |v: &Vec<(f64, f64)>| {
                let mut all = v.clone();
                all.extend_from_slice(&shared);
                config_from(&p, &all)
            };
            let (x, y, z) = (mk(&a), mk(&b), mk(&c));
            prop_assert_eq!(hamming_distance(&x, &x), 0);
            prop_assert_eq!(hamming_distance(&x, &y), hamming_distance(&y, &x));
            prop_assert!(hamming_distance(&x, &z) <= hamming_distance(&x, &y) + hamming_distance(&y, &z));
            if hamming_distance(&x, &y) == 0 {
                prop_assert!(x.same_centers(&y));
            }
        }
    }
}
