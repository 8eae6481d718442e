use crate::error::{invalid, Error, Result};

use super::point::Point;

/// An axis-aligned box `[low, high]` in `R^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cuboid {
    low: Point,
    high: Point,
}

impl Cuboid {
    pub fn new(low: Point, high: Point) -> Result<Self> {
        if low.dim() != high.dim() {
            return Err(Error::DimensionMismatch {
                expected: low.dim(),
                found: high.dim(),
            });
        }
        if low.dim() == 0 {
            return Err(Error::ZeroDimension);
        }
        if !low.is_finite() || !high.is_finite() {
            return Err(invalid("box", "coordinates must be finite"));
        }
        if low.coords().iter().zip(high.coords()).any(|(l, h)| h <= l) {
            return Err(invalid("box", "every side must have positive length"));
        }
        Ok(Cuboid { low, high })
    }

    /// The cube `[0, side]^d`.
    pub fn cube(d: usize, side: f64) -> Result<Self> {
        Cuboid::new(Point::origin(d), Point::new(std::iter::repeat_n(side, d)))
    }

    /// The box `[0, sides[0]] x ... x [0, sides[d-1]]`.
    pub fn with_sides(sides: &[f64]) -> Result<Self> {
        Cuboid::new(Point::origin(sides.len()), Point::from_slice(sides))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.low.dim()
    }

    #[inline]
    pub fn low(&self) -> &Point {
        &self.low
    }

    #[inline]
    pub fn high(&self) -> &Point {
        &self.high
    }

    pub fn sides(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.high[i] - self.low[i]).collect()
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|i| self.high[i] - self.low[i]).product()
    }

    pub fn diameter(&self) -> f64 {
        self.low.dist(&self.high)
    }

    pub fn center(&self) -> Point {
        Point::new((0..self.dim()).map(|i| 0.5 * (self.low[i] + self.high[i])))
    }

    /// Closed-box membership.
    #[inline]
    pub fn contains(&self, x: &Point) -> bool {
        (0..self.dim()).all(|i| x[i] >= self.low[i] && x[i] <= self.high[i])
    }

    /// Euclidean distance from `x` to the box (zero inside).
    #[inline]
    pub fn dist_to(&self, x: &Point) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim() {
            let g = (self.low[i] - x[i]).max(x[i] - self.high[i]).max(0.0);
            s += g * g;
        }
        s.sqrt()
    }

    /// Distance from an interior point to the complement of the box.
    pub fn depth(&self, x: &Point) -> f64 {
        (0..self.dim())
            .map(|i| (x[i] - self.low[i]).min(self.high[i] - x[i]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Shrinks every side by `margin` at both ends. `None` when a side is
    /// not longer than `2 * margin`.
    pub fn shrink(&self, margin: f64) -> Option<Cuboid> {
        if margin == 0.0 {
            return Some(self.clone());
        }
        let low = Point::new(self.low.coords().iter().map(|l| l + margin));
        let high = Point::new(self.high.coords().iter().map(|h| h - margin));
        Cuboid::new(low, high).ok()
    }

    pub fn expand(&self, margin: f64) -> Cuboid {
        Cuboid {
            low: Point::new(self.low.coords().iter().map(|l| l - margin)),
            high: Point::new(self.high.coords().iter().map(|h| h + margin)),
        }
    }

    pub fn is_subset_of(&self, other: &Cuboid) -> bool {
        self.dim() == other.dim()
            && (0..self.dim()).all(|i| self.low[i] >= other.low[i] && self.high[i] <= other.high[i])
    }

    pub fn intersection(&self, other: &Cuboid) -> Option<Cuboid> {
        let low = Point::new((0..self.dim()).map(|i| self.low[i].max(other.low[i])));
        let high = Point::new((0..self.dim()).map(|i| self.high[i].min(other.high[i])));
        Cuboid::new(low, high).ok()
    }

    /// Euclidean distance between two boxes.
    pub fn dist_to_box(&self, other: &Cuboid) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim() {
            let g = (other.low[i] - self.high[i])
                .max(self.low[i] - other.high[i])
                .max(0.0);
            s += g * g;
        }
        s.sqrt()
    }

    /// Splits the box in two halves across its longest side.
    pub fn halves(&self) -> (Cuboid, Cuboid) {
        let sides = self.sides();
        let axis = (0..self.dim())
            .max_by(|&a, &b| sides[a].total_cmp(&sides[b]))
            .unwrap_or(0);
        let mid = 0.5 * (self.low[axis] + self.high[axis]);
        let mut high = self.high.clone();
        high.coords_mut()[axis] = mid;
        let mut low = self.low.clone();
        low.coords_mut()[axis] = mid;
        (
            Cuboid {
                low: self.low.clone(),
                high,
            },
            Cuboid {
                low,
                high: self.high.clone(),
            },
        )
    }
}

/// An open ball `B_radius(center)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Self {
        Ball { center, radius }
    }

    #[inline]
    pub fn contains(&self, x: &Point) -> bool {
        self.center.dist_sq(x) < self.radius * self.radius
    }

    pub fn bounding_box(&self) -> Cuboid {
        Cuboid {
            low: Point::new(self.center.coords().iter().map(|c| c - self.radius)),
            high: Point::new(self.center.coords().iter().map(|c| c + self.radius)),
        }
    }
}

/// A region used as the active set of a restricted chain.
#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    Box(Cuboid),
    Ball(Ball),
}

impl Region {
    pub fn contains(&self, x: &Point) -> bool {
        match self {
            Region::Box(b) => b.contains(x),
            Region::Ball(b) => b.contains(x),
        }
    }

    /// Membership in the region's interior `{x : dist(x, region^c) >= margin}`.
    pub fn interior_contains(&self, x: &Point, margin: f64) -> bool {
        match self {
            Region::Box(b) => b.contains(x) && b.depth(x) >= margin,
            Region::Ball(b) => b.center.dist(x) <= b.radius - margin,
        }
    }
}
