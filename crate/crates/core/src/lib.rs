//! Exact and Markov-chain samplers for the grand-canonical hard sphere
//! model, coupled-chain experiments and closed-form bound calculators.

pub mod bounds;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod io;
pub mod metrics;
pub mod model;
pub mod rng;

pub use error::{Error, Result};
pub use geometry::{Ball, Cuboid, Point, Region, Space};
pub use model::{BoundaryCondition, Configuration, ModelParams, StateClass};
pub use dynamics::{ChainState, CoupledState, Kernel};
