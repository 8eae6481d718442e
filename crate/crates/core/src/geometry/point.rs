use std::fmt;
use std::ops::Index;

use smallvec::SmallVec;

/// Inline storage for low-dimensional coordinates.
pub type Coords = SmallVec<[f64; 4]>;

/// A point of `R^d`.
///
/// Equality is exact coordinate equality; couplings copy shared centres
/// bit-for-bit, so no tolerance is ever needed when matching them.
#[derive(Clone, PartialEq)]
pub struct Point(Coords);

impl Point {
    pub fn new(coords: impl IntoIterator<Item = f64>) -> Self {
        Point(coords.into_iter().collect())
    }

    pub fn from_slice(coords: &[f64]) -> Self {
        Point(SmallVec::from_slice(coords))
    }

    pub fn origin(d: usize) -> Self {
        Point(SmallVec::from_elem(0.0, d))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    #[inline]
    pub fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    #[inline]
    pub fn dist_sq(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    #[inline]
    pub fn dist(&self, other: &Point) -> f64 {
        self.dist_sq(other).sqrt()
    }

    /// Bit patterns of the coordinates, usable as an exact sort key.
    pub fn bit_key(&self) -> SmallVec<[u64; 4]> {
        self.0.iter().map(|c| c.to_bits()).collect()
    }
}

impl Index<usize> for Point {
    type Output = f64;

    #[inline]
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point(SmallVec::from_vec(v))
    }
}

impl<const N: usize> From<[f64; N]> for Point {
    fn from(v: [f64; N]) -> Self {
        Point::from_slice(&v)
    }
}
