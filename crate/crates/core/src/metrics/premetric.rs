use rand::Rng;

use crate::bounds::vigoda_c;
use crate::error::{invalid, Error, Result};
use crate::geometry::{count_hits, Ball, Point};
use crate::model::{is_blocked_unchecked, star_insertion_ok, Configuration, ModelParams};

pub const DEFAULT_BLOCKED_SAMPLES: u64 = 4096;

/// Constants of the pre-metric `D(X, X + v) = 2^d - c |O_X(v)|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PreMetricParams {
    pub lambda: f64,
    pub d: usize,
    pub c: f64,
    pub blocked_volume_samples: u64,
}

impl PreMetricParams {
    pub fn new(lambda: f64, d: usize, blocked_volume_samples: u64) -> Result<Self> {
        if blocked_volume_samples == 0 {
            return Err(invalid("blocked_volume_samples", "must be at least 1"));
        }
        Ok(PreMetricParams {
            lambda,
            d,
            c: vigoda_c(lambda, d)?,
            blocked_volume_samples,
        })
    }

    pub fn for_model(params: &ModelParams, samples: u64) -> Result<Self> {
        PreMetricParams::new(params.lambda, params.d(), samples)
    }
}

/// Monte-Carlo split of `B_{2r}(v)` into its blocked part `O_X(v)` and free
/// part `U_X(v)`. Both come from the same hits, so they add up to `2^d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockedVolumes {
    pub occupied: f64,
    pub free: f64,
    pub std_error: f64,
    pub hits: u64,
    pub samples: u64,
}

/// Everything outside `Lambda_Int \ tau` counts as blocked, including points
/// outside the domain, so the two parts always partition the full ball.
pub fn blocked_set_volumes<R: Rng + ?Sized>(
    config: &Configuration,
    params: &ModelParams,
    v: &Point,
    samples: u64,
    rng: &mut R,
) -> Result<BlockedVolumes> {
    if samples == 0 {
        return Err(invalid("samples", "must be at least 1"));
    }
    params.check_point(v)?;
    if !params.domain.contains(v) {
        return Err(Error::OutsideDomain);
    }
    let total = params.space.exclusion_volume();
    let ball = Ball::new(v.clone(), 2.0 * params.r());
    let est = count_hits(|x| is_blocked_unchecked(x, config, params), &ball, total, samples, rng);
    Ok(BlockedVolumes {
        occupied: est.value,
        free: total - est.value,
        std_error: est.std_error,
        hits: est.hits,
        samples,
    })
}

/// Estimated edge weight with its Monte-Carlo standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Weight {
    pub value: f64,
    pub std_error: f64,
}

impl Weight {
    pub const ZERO: Weight = Weight {
        value: 0.0,
        std_error: 0.0,
    };

    fn add(self, other: Weight) -> Weight {
        Weight {
            value: self.value + other.value,
            std_error: self.std_error.hypot(other.std_error),
        }
    }
}

/// `2^d - c |O_X(v)|` for the edge `{X, X + v}`.
pub fn premetric_edge_weight<R: Rng + ?Sized>(
    x: &Configuration,
    v: &Point,
    params: &ModelParams,
    pm: &PreMetricParams,
    rng: &mut R,
) -> Result<Weight> {
    if !star_insertion_ok(x, params, v) {
        return Err(Error::InvalidEdge);
    }
    Ok(edge_weight_unchecked(x, v, params, pm, rng))
}

pub(crate) fn edge_weight_unchecked<R: Rng + ?Sized>(
    x: &Configuration,
    v: &Point,
    params: &ModelParams,
    pm: &PreMetricParams,
    rng: &mut R,
) -> Weight {
    let total = params.space.exclusion_volume();
    let ball = Ball::new(v.clone(), 2.0 * params.r());
    let o = count_hits(
        |p| is_blocked_unchecked(p, x, params),
        &ball,
        total,
        pm.blocked_volume_samples,
        rng,
    );
    Weight {
        value: total - pm.c * o.value,
        std_error: pm.c * o.std_error,
    }
}

/// Sum of edge weights along the path that adds `extra` to `base` one
/// centre at a time.
fn path_weight<R: Rng + ?Sized>(
    base: &Configuration,
    extra: &[Point],
    params: &ModelParams,
    pm: &PreMetricParams,
    rng: &mut R,
) -> Weight {
    let mut cur = base.clone();
    let mut acc = Weight::ZERO;
    for p in extra {
        acc = acc.add(edge_weight_unchecked(&cur, p, params, pm, rng));
        cur.insert(p.clone());
    }
    acc
}

/// Upper bound on the path metric between two extended-space states along
/// an explicit path: through `X + Y` when that union is admissible, through
/// the empty configuration otherwise.
pub fn star_path_distance_bound<R: Rng + ?Sized>(
    x: &Configuration,
    y: &Configuration,
    params: &ModelParams,
    pm: &PreMetricParams,
    rng: &mut R,
) -> Result<Weight> {
    let (only_x, only_y, common) = split_symmetric(x, y);
    if only_x.is_empty() && only_y.is_empty() {
        return Ok(Weight::ZERO);
    }
    let mut union = x.clone();
    let mut union_ok = true;
    for p in &only_y {
        if !star_insertion_ok(&union, params, p) {
            union_ok = false;
            break;
        }
        union.insert(p.clone());
    }
    if union_ok {
        let a = path_weight(x, &only_y, params, pm, rng);
        let b = path_weight(y, &only_x, params, pm, rng);
        return Ok(a.add(b));
    }
    // Down to the shared centres and back up.
    let mut shared = Configuration::empty(params);
    for p in &common {
        shared.insert(p.clone());
    }
    let a = path_weight(&shared, &only_x, params, pm, rng);
    let b = path_weight(&shared, &only_y, params, pm, rng);
    Ok(a.add(b))
}

/// Centres only in `x`, only in `y`, and in both (as multisets, sorted).
pub(crate) fn split_symmetric(x: &Configuration, y: &Configuration) -> (Vec<Point>, Vec<Point>, Vec<Point>) {
    let xs = x.sorted_points();
    let ys = y.sorted_points();
    let key = |p: &Point| p.bit_key();
    let (mut i, mut j) = (0, 0);
    let (mut ox, mut oy, mut both) = (Vec::new(), Vec::new(), Vec::new());
    while i < xs.len() && j < ys.len() {
        match cmp_points(&xs[i], &ys[j]) {
            std::cmp::Ordering::Less => {
                ox.push(xs[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                oy.push(ys[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                debug_assert_eq!(key(&xs[i]), key(&ys[j]));
                both.push(xs[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    ox.extend_from_slice(&xs[i..]);
    oy.extend_from_slice(&ys[j..]);
    (ox, oy, both)
}

fn cmp_points(a: &Point, b: &Point) -> std::cmp::Ordering {
    a.coords()
        .iter()
        .zip(b.coords())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}
