//! Fixtures shared by the benchmarks.

use hslab_core::experiments::default_burn_in;
use hslab_core::geometry::uniform_in_cuboid;
use hslab_core::rng::rng_stream;
use hslab_core::{ChainState, ModelParams, Point, StateClass};

/// A chain on a cube of side `side`, run from empty for the default burn-in.
pub fn equilibrated_chain(d: usize, side: f64, lambda: f64, seed: u64) -> ChainState {
    let params = ModelParams::cube(d, side, lambda).expect("valid fixture");
    let n = params.domain.volume();
    let mut chain = ChainState::empty(params, StateClass::Omega, rng_stream(seed, 0));
    for _ in 0..default_burn_in(n, lambda) {
        chain.single_center_step();
    }
    chain
}

/// Uniform points in the domain of `chain`.
pub fn query_points(chain: &ChainState, count: usize, seed: u64) -> Vec<Point> {
    let mut rng = rng_stream(seed, 1);
    (0..count).map(|_| uniform_in_cuboid(&chain.params.domain, &mut rng)).collect()
}
