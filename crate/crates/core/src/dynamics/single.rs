use rand::Rng;

use crate::geometry::{uniform_in_cuboid, Point, Region};
use crate::model::{Configuration, ModelParams};

/// Randomness of one single-centre update: the update point, uniform in the
/// domain, and the add/delete coin.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleMove {
    pub x: Point,
    pub add: bool,
}

/// What a move did to one configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveOutcome {
    Removed(usize),
    Added,
    Unchanged,
}

pub fn draw_single_move<R: Rng + ?Sized>(params: &ModelParams, rng: &mut R) -> SingleMove {
    let x = uniform_in_cuboid(&params.domain, rng);
    let add = rng.random::<f64>() * (1.0 + params.lambda) < params.lambda;
    SingleMove { x, add }
}

/// Deletes every centre in `B_r(x)`, or adds `x` if it lies in
/// `Lambda_Int \ tau` at distance at least `2r` from every centre.
pub fn apply_single_move(config: &mut Configuration, params: &ModelParams, mv: &SingleMove) -> MoveOutcome {
    let r = params.r();
    if mv.add {
        if params.admissible(&mv.x) && !config.any_within(&mv.x, 2.0 * r) {
            config.insert(mv.x.clone());
            MoveOutcome::Added
        } else {
            MoveOutcome::Unchanged
        }
    } else {
        match config.remove_within(&mv.x, r).len() {
            0 => MoveOutcome::Unchanged,
            k => MoveOutcome::Removed(k),
        }
    }
}

/// The lazy chain on a region: no-op unless the update point lies in the
/// region; centres outside the region's interior are frozen and insertions
/// need the interior as well.
pub fn apply_restricted_move(
    config: &mut Configuration,
    params: &ModelParams,
    region: &Region,
    mv: &SingleMove,
) -> MoveOutcome {
    if !region.contains(&mv.x) {
        return MoveOutcome::Unchanged;
    }
    let r = params.r();
    if mv.add {
        if region.interior_contains(&mv.x, r)
            && params.admissible(&mv.x)
            && !config.any_within(&mv.x, 2.0 * r)
        {
            config.insert(mv.x.clone());
            MoveOutcome::Added
        } else {
            MoveOutcome::Unchanged
        }
    } else {
        let doomed: Vec<Point> = config
            .neighbors_within(&mv.x, r)
            .into_iter()
            .filter(|y| region.interior_contains(y, r))
            .collect();
        for y in &doomed {
            config.remove(y);
        }
        match doomed.len() {
            0 => MoveOutcome::Unchanged,
            k => MoveOutcome::Removed(k),
        }
    }
}
