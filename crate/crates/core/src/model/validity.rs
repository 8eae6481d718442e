//! Membership tests for the two state spaces and the blocked set.

use crate::error::{Error, Result};
use crate::geometry::Point;

use super::config::{Configuration, StateClass};
use super::params::ModelParams;

/// `x` lies in the blocked set: outside the interior, in `tau`, or within
/// `2r` of a centre. Points outside the domain are rejected.
pub fn is_blocked_point(x: &Point, config: &Configuration, params: &ModelParams) -> Result<bool> {
    params.check_point(x)?;
    if !params.domain.contains(x) {
        return Err(Error::OutsideDomain);
    }
    Ok(is_blocked_unchecked(x, config, params))
}

/// As [`is_blocked_point`], treating every point outside the domain as
/// blocked.
#[inline]
pub fn is_blocked_unchecked(x: &Point, config: &Configuration, params: &ModelParams) -> bool {
    !params.admissible(x) || config.any_within(x, 2.0 * params.r())
}

/// Exact test of the hard-core state space with boundary condition `tau`.
pub fn is_valid_configuration(config: &Configuration, params: &ModelParams) -> bool {
    first_violation(config, params, StateClass::Omega).is_none()
}

/// Exact test of the extended state space. `tau` plays no role.
pub fn is_star_configuration(config: &Configuration, params: &ModelParams) -> bool {
    first_violation(config, params, StateClass::OmegaStar).is_none()
}

pub fn satisfies(config: &Configuration, params: &ModelParams, class: StateClass) -> bool {
    first_violation(config, params, class).is_none()
}

/// Describes the first broken invariant of `config` for `class`, if any.
pub fn first_violation(
    config: &Configuration,
    params: &ModelParams,
    class: StateClass,
) -> Option<String> {
    let r = params.r();
    let Some(interior) = params.interior() else {
        return (!config.is_empty()).then(|| "centre present although the interior is empty".into());
    };
    for p in config.iter() {
        if p.dim() != params.d() {
            return Some(format!("centre {p:?} has the wrong dimension"));
        }
        if !interior.contains(p) {
            return Some(format!("centre {p:?} lies outside the interior"));
        }
        match class {
            StateClass::Omega => {
                if params.tau.contains(p, interior) {
                    return Some(format!("centre {p:?} lies in the forbidden set"));
                }
                if config.grid().count_within(p, 2.0 * r) > 1 {
                    return Some(format!("centre {p:?} is closer than 2r to another centre"));
                }
            }
            StateClass::OmegaStar => {
                if let Some(msg) = triple_cover_near(config, p, r) {
                    return Some(msg);
                }
            }
        }
    }
    None
}

/// Whether `config + {v}` stays in the extended space, assuming `config`
/// already does.
pub fn star_insertion_ok(config: &Configuration, params: &ModelParams, v: &Point) -> bool {
    let r = params.r();
    if !params.interior().is_some_and(|i| i.contains(v)) {
        return false;
    }
    let near = config.neighbors_within(v, 2.0 * r);
    for i in 0..near.len() {
        for j in i + 1..near.len() {
            if near[i].dist_sq(&near[j]) < 4.0 * r * r && triple_balls_intersect(v, &near[i], &near[j], r) {
                return false;
            }
        }
    }
    true
}

fn triple_cover_near(config: &Configuration, p: &Point, r: f64) -> Option<String> {
    let near = config.neighbors_within(p, 2.0 * r);
    // `near` contains `p` itself (and any exact duplicates).
    let mut seen_self = false;
    let others: Vec<&Point> = near
        .iter()
        .filter(|q| {
            if *q == p && !seen_self {
                seen_self = true;
                false
            } else {
                true
            }
        })
        .collect();
    for i in 0..others.len() {
        for j in i + 1..others.len() {
            if others[i].dist_sq(others[j]) < 4.0 * r * r
                && triple_balls_intersect(p, others[i], others[j], r)
            {
                return Some(format!(
                    "point covered by three balls centred at {p:?}, {:?}, {:?}",
                    others[i], others[j]
                ));
            }
        }
    }
    None
}

/// Three open balls of radius `r` share a point iff the minimum enclosing
/// ball of their centres has radius below `r`.
pub fn triple_balls_intersect(a: &Point, b: &Point, c: &Point, r: f64) -> bool {
    min_enclosing_radius_sq(a, b, c) < r * r
}

/// Squared radius of the smallest ball containing three points, in any
/// dimension.
pub fn min_enclosing_radius_sq(a: &Point, b: &Point, c: &Point) -> f64 {
    let ab = a.dist_sq(b);
    let bc = b.dist_sq(c);
    let ca = c.dist_sq(a);
    let mut s = [ab, bc, ca];
    s.sort_by(f64::total_cmp);
    let [x, y, z] = s;
    // Right or obtuse: the longest side is a diameter.
    if z >= x + y {
        return z / 4.0;
    }
    // Acute: circumradius R^2 = a^2 b^2 c^2 / (16 Area^2), with
    // 16 Area^2 = 2(xy + yz + zx) - (x^2 + y^2 + z^2) (Heron on squares).
    let area16 = 2.0 * (x * y + y * z + z * x) - (x * x + y * y + z * z);
    if area16 <= 0.0 {
        return z / 4.0;
    }
    x * y * z / area16
}
