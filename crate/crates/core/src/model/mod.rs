//! The hard sphere measure with boundary conditions: configurations, state
//! space membership, exact rejection sampling, a quadrature oracle for tiny
//! domains and free-volume estimation.

mod boundary;
mod config;
mod free_volume;
mod oracle;
mod params;
mod sampler;
mod validity;

pub use boundary::BoundaryCondition;
pub use config::{Configuration, StateClass};
pub use free_volume::free_volume_fraction_estimate;
pub use oracle::{
    oracle_small_domain, oracle_with_bins, outcome_index, Oracle, DEFAULT_POSITION_BINS,
    DEFAULT_QUADRATURE_CELLS,
};
pub use params::ModelParams;
pub(crate) use sampler::poisson_count;
pub use sampler::{sample_hard_sphere_rejection, sample_with_stats};
pub use validity::{
    first_violation, is_blocked_point, is_blocked_unchecked, is_star_configuration,
    is_valid_configuration, min_enclosing_radius_sq, satisfies, star_insertion_ok,
    triple_balls_intersect,
};
