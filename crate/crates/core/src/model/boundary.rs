
use crate::geometry::{Ball, Cuboid, Point};

/// Forbidden locations `tau` for centres: a union of open balls plus an
/// optional shell of the given width along the inside of the interior box.
/// Membership is always clipped to the interior.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BoundaryCondition {
    pub balls: Vec<Ball>,
    pub shell: Option<f64>,
}

impl BoundaryCondition {
    /// Free boundary conditions.
    pub fn free() -> Self {
        BoundaryCondition::default()
    }

    pub fn with_ball(mut self, center: Point, radius: f64) -> Self {
        self.balls.push(Ball::new(center, radius));
        self
    }

    pub fn with_shell(mut self, width: f64) -> Self {
        self.shell = Some(width);
        self
    }

    pub fn is_free(&self) -> bool {
        self.balls.is_empty() && self.shell.is_none_or(|w| w <= 0.0)
    }

    #[inline]
    pub fn contains(&self, x: &Point, interior: &Cuboid) -> bool {
        if !interior.contains(x) {
            return false;
        }
        if let Some(w) = self.shell {
            if interior.depth(x) < w {
                return true;
            }
        }
        self.balls.iter().any(|b| b.contains(x))
    }

    /// `self` is contained in `other` as a set (sufficient test: every ball
    /// and the shell also appear in `other`).
    pub fn is_refined_by(&self, other: &BoundaryCondition) -> bool {
        self.balls.iter().all(|b| other.balls.contains(b))
            && match (self.shell, other.shell) {
                (None, _) => true,
                (Some(a), Some(b)) => a <= b,
                (Some(_), None) => false,
            }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_is_clipped_to_interior() {
        let interior = Cuboid::with_sides(&[2.0, 2.0]).unwrap();
        let tau = BoundaryCondition::free().with_ball(Point::new([0.0, 0.0]), 0.5);
        assert!(tau.contains(&Point::new([0.1, 0.1]), &interior));
        assert!(!tau.contains(&Point::new([-0.1, 0.1]), &interior));
        assert!(!tau.contains(&Point::new([1.0, 1.0]), &interior));
        let shell = BoundaryCondition::free().with_shell(0.25);
        assert!(shell.contains(&Point::new([0.2, 1.0]), &interior));
        assert!(!shell.contains(&Point::new([0.3, 1.0]), &interior));
        assert!(BoundaryCondition::free().is_free());
        assert!(BoundaryCondition::free().is_refined_by(&tau));
        assert!(!tau.is_refined_by(&shell));
    }
}
