//! Distances between configurations: the pre-metric on the extended state
//! space, Hamming distance, projections and empirical total variation.

mod distance;
mod premetric;
mod tv;

pub use distance::{hamming_distance, project_to_subregion, OccupancyKey, OccupancyStatistic};
pub use premetric::{
    blocked_set_volumes, premetric_edge_weight, star_path_distance_bound, BlockedVolumes,
    PreMetricParams, Weight, DEFAULT_BLOCKED_SAMPLES,
};
pub use tv::{
    empirical_pmf, tv_between_pmfs, tv_from_outcomes, tv_lower_bound_from_statistics,
    tv_to_reference, TvEstimate,
};
