use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CellGrid, Cuboid, Point};

use super::params::ModelParams;

/// Which state space a configuration is required to live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateClass {
    /// Pairwise distances at least `2r`, no centre in `tau`.
    Omega,
    /// No point covered by three radius-`r` balls.
    OmegaStar,
}

impl fmt::Display for StateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateClass::Omega => "omega",
            StateClass::OmegaStar => "omega_star",
        })
    }
}

/// A finite set of sphere centres indexed by a cell list over the domain.
#[derive(Clone, Debug)]
pub struct Configuration {
    grid: CellGrid,
    domain: Cuboid,
    r: f64,
}

impl Configuration {
    pub fn empty(params: &ModelParams) -> Self {
        Configuration::empty_in(&params.domain, params.r())
    }

    pub fn empty_in(domain: &Cuboid, r: f64) -> Self {
        Configuration {
            grid: CellGrid::new(domain, 2.0 * r),
            domain: domain.clone(),
            r,
        }
    }

    pub fn from_points<I>(params: &ModelParams, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = Point>,
    {
        let mut c = Configuration::empty(params);
        for p in points {
            params.check_point(&p)?;
            if !p.is_finite() {
                return Err(Error::OutsideDomain);
            }
            c.insert(p);
        }
        Ok(c)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn domain(&self) -> &Cuboid {
        &self.domain
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    #[inline]
    pub fn insert(&mut self, p: Point) {
        self.grid.insert(p);
    }

    #[inline]
    pub fn remove(&mut self, p: &Point) -> bool {
        self.grid.remove(p)
    }

    #[inline]
    pub fn contains(&self, p: &Point) -> bool {
        self.grid.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Point> {
        self.grid.iter()
    }

    pub fn clear(&mut self) {
        self.grid.clear();
    }

    pub fn grid(&self) -> &CellGrid {
        &self.grid
    }

    #[inline]
    pub fn any_within(&self, x: &Point, radius: f64) -> bool {
        self.grid.any_within(x, radius)
    }

    pub fn neighbors_within(&self, x: &Point, radius: f64) -> Vec<Point> {
        self.grid.neighbors_within(x, radius)
    }

    pub fn remove_within(&mut self, x: &Point, radius: f64) -> Vec<Point> {
        self.grid.remove_within(x, radius)
    }

    /// Centres in lexicographic coordinate order.
    pub fn sorted_points(&self) -> Vec<Point> {
        let mut v: Vec<Point> = self.iter().cloned().collect();
        v.sort_by(|a, b| {
            a.coords()
                .iter()
                .zip(b.coords())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        v
    }

    /// Same centre multiset, regardless of storage order.
    pub fn same_centers(&self, other: &Configuration) -> bool {
        self.len() == other.len() && self.sorted_points() == other.sorted_points()
    }
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.same_centers(other)
    }
}
