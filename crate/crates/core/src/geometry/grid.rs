//! Dense cell list over a bounding box.

use smallvec::SmallVec;

use super::point::Point;
use super::shape::Cuboid;

type CellIndex = SmallVec<[usize; 4]>;

/// Uniform cell list holding points of a fixed bounding box.
///
/// Each stored point lives in exactly one bucket. Queries may use any radius;
/// with `radius <= cell_side` they touch `3^d` cells.
#[derive(Clone, Debug)]
pub struct CellGrid {
    origin: Point,
    cell_side: f64,
    dims: CellIndex,
    strides: CellIndex,
    buckets: Vec<Vec<Point>>,
    len: usize,
}

impl CellGrid {
    pub fn new(bounds: &Cuboid, cell_side: f64) -> Self {
        assert!(cell_side > 0.0 && cell_side.is_finite());
        let d = bounds.dim();
        let dims: CellIndex = bounds
            .sides()
            .iter()
            .map(|s| ((s / cell_side).ceil() as usize).max(1))
            .collect();
        let mut strides = CellIndex::from_elem(1, d);
        for i in (0..d.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let total = dims.iter().product();
        CellGrid {
            origin: bounds.low().clone(),
            cell_side,
            dims,
            strides,
            buckets: vec![Vec::new(); total],
            len: 0,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn cell_side(&self) -> f64 {
        self.cell_side
    }

    #[inline]
    fn axis_cell(&self, axis: usize, x: f64) -> isize {
        ((x - self.origin[axis]) / self.cell_side).floor() as isize
    }

    fn bucket_of(&self, p: &Point) -> usize {
        let mut idx = 0;
        for a in 0..self.dims.len() {
            let c = self.axis_cell(a, p[a]).clamp(0, self.dims[a] as isize - 1) as usize;
            idx += c * self.strides[a];
        }
        idx
    }

    pub fn insert(&mut self, p: Point) {
        let b = self.bucket_of(&p);
        self.buckets[b].push(p);
        self.len += 1;
    }

    /// Removes one stored copy of `p` (exact equality).
    pub fn remove(&mut self, p: &Point) -> bool {
        let b = self.bucket_of(p);
        let bucket = &mut self.buckets[b];
        if let Some(pos) = bucket.iter().position(|q| q == p) {
            bucket.swap_remove(pos);
            self.len -= 1;
            true
        } else {
            false
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.buckets[self.bucket_of(p)].iter().any(|q| q == p)
    }

    /// Stored points in bucket order.
    pub fn iter(&self) -> impl Iterator<Item = &Point> {
        self.buckets.iter().flatten()
    }

    pub fn clear(&mut self) {
        for b in &mut self.buckets {
            b.clear();
        }
        self.len = 0;
    }

    /// Visits the buckets overlapping the cube of half-width `radius` at `x`.
    /// Returns early when `visit` returns `true`.
    fn scan<F>(&self, x: &Point, radius: f64, mut visit: F) -> bool
    where
        F: FnMut(usize) -> bool,
    {
        let d = self.dims.len();
        let mut lo = CellIndex::with_capacity(d);
        let mut hi = CellIndex::with_capacity(d);
        for a in 0..d {
            let top = self.dims[a] as isize - 1;
            let l = self.axis_cell(a, x[a] - radius);
            let h = self.axis_cell(a, x[a] + radius);
            if h < 0 || l > top {
                return false;
            }
            lo.push(l.max(0) as usize);
            hi.push(h.min(top) as usize);
        }
        let mut cur = lo.clone();
        loop {
            let idx: usize = cur.iter().zip(&self.strides).map(|(c, s)| c * s).sum();
            if visit(idx) {
                return true;
            }
            let mut a = d;
            loop {
                if a == 0 {
                    return false;
                }
                a -= 1;
                if cur[a] < hi[a] {
                    cur[a] += 1;
                    break;
                }
                cur[a] = lo[a];
            }
        }
    }

    /// True iff some stored point lies at distance `< radius` from `x`.
    pub fn any_within(&self, x: &Point, radius: f64) -> bool {
        let r2 = radius * radius;
        self.scan(x, radius, |b| self.buckets[b].iter().any(|q| q.dist_sq(x) < r2))
    }

    pub fn for_each_within<F: FnMut(&Point)>(&self, x: &Point, radius: f64, mut f: F) {
        let r2 = radius * radius;
        self.scan(x, radius, |b| {
            for q in &self.buckets[b] {
                if q.dist_sq(x) < r2 {
                    f(q);
                }
            }
            false
        });
    }

    /// Stored points at distance `< radius` from `x`.
    pub fn neighbors_within(&self, x: &Point, radius: f64) -> Vec<Point> {
        let mut out = Vec::new();
        self.for_each_within(x, radius, |q| out.push(q.clone()));
        out
    }

    pub fn count_within(&self, x: &Point, radius: f64) -> usize {
        let mut n = 0;
        self.for_each_within(x, radius, |_| n += 1);
        n
    }

    /// Removes and returns every stored point at distance `< radius` from `x`.
    pub fn remove_within(&mut self, x: &Point, radius: f64) -> Vec<Point> {
        let r2 = radius * radius;
        let mut hits = Vec::new();
        let mut removed = Vec::new();
        self.scan(x, radius, |b| {
            hits.push(b);
            false
        });
        for b in hits {
            let bucket = &mut self.buckets[b];
            let mut i = 0;
            while i < bucket.len() {
                if bucket[i].dist_sq(x) < r2 {
                    removed.push(bucket.swap_remove(i));
                } else {
                    i += 1;
                }
            }
        }
        self.len -= removed.len();
        removed
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(points: &[Point], x: &Point, l: f64) -> Vec<Vec<u64>> {
        let mut v: Vec<Vec<u64>> = points
            .iter()
            .filter(|p| p.dist_sq(x) < l * l)
            .map(|p| p.bit_key().to_vec())
            .collect();
        v.sort();
        v
    }

    fn keys(points: Vec<Point>) -> Vec<Vec<u64>> {
        let mut v: Vec<Vec<u64>> = points.iter().map(|p| p.bit_key().to_vec()).collect();
        v.sort();
        v
    }

    #[test]
    fn ten_thousand_points_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let bounds = Cuboid::cube(2, 40.0).unwrap();
        let mut grid = CellGrid::new(&bounds, 1.2);
        let pts: Vec<Point> = (0..10_000)
            .map(|_| Point::new([rng.random::<f64>() * 40.0, rng.random::<f64>() * 40.0]))
            .collect();
        for p in &pts {
            grid.insert(p.clone());
        }
        assert_eq!(grid.len(), 10_000);
        for _ in 0..200 {
            let x = Point::new([rng.random::<f64>() * 44.0 - 2.0, rng.random::<f64>() * 44.0 - 2.0]);
            let l = rng.random::<f64>() * 1.2;
            assert_eq!(keys(grid.neighbors_within(&x, l)), brute(&pts, &x, l));
        }
    }

    #[test]
    fn remove_within_updates_len() {
        let bounds = Cuboid::cube(3, 4.0).unwrap();
        let mut grid = CellGrid::new(&bounds, 1.0);
        grid.insert(Point::new([1.0, 1.0, 1.0]));
        grid.insert(Point::new([1.2, 1.0, 1.0]));
        grid.insert(Point::new([3.5, 3.5, 3.5]));
        let gone = grid.remove_within(&Point::new([1.1, 1.0, 1.0]), 0.5);
        assert_eq!(gone.len(), 2);
        assert_eq!(grid.len(), 1);
        assert!(grid.contains(&Point::new([3.5, 3.5, 3.5])));
        assert!(grid.remove(&Point::new([3.5, 3.5, 3.5])));
        assert!(grid.is_empty());
    }

    proptest! {
        #[test]
        fn query_equivalence_3d(
            pts in proptest::collection::vec((0.0..6.0f64, 0.0..6.0f64, 0.0..6.0f64), 0..300),
            q in (-1.0..7.0f64, -1.0..7.0f64, -1.0..7.0f64),
            l in 0.0..2.5f64,
        ) {
            let bounds = Cuboid::cube(3, 6.0).unwrap();
            let mut grid = CellGrid::new(&bounds, 1.24);
            let pts: Vec<Point> = pts.into_iter().map(|(a, b, c)| Point::new([a, b, c])).collect();
            for p in &pts { grid.insert(p.clone()); }
            let x = Point::new([q.0, q.1, q.2]);
            prop_assert_eq!(keys(grid.neighbors_within(&x, l)), brute(&pts, &x, l));
            prop_assert_eq!(grid.any_within(&x, l), !brute(&pts, &x, l).is_empty());
        }
    }
}
