//! Points, boxes, balls, parallel sets, the cell list and Monte-Carlo
//! volume estimation.

mod grid;
mod point;
mod sampling;
mod shape;
mod volume;

pub use grid::CellGrid;
pub use point::{Coords, Point};
pub(crate) use sampling::count_hits;
pub use sampling::{
    estimate_region_volume, try_uniform_point_in_parallel_set, uniform_in_ball,
    uniform_in_cuboid, uniform_point_in_parallel_set, VolumeEstimate,
};
pub use shape::{Ball, Cuboid, Region};
pub use volume::{
    ball_volume, box_interior, parallel_set_volume_box, sphere_radius, unit_ball_volume, Space,
};
