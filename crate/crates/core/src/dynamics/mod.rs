//! Single-centre and heat-bath dynamics, their couplings and the lazy chain
//! restricted to a region.

mod chain;
mod coupled;
mod heat_bath;
mod single;

pub use chain::{run_chain, ChainState, Kernel, Observer};
pub use coupled::CoupledState;
pub use heat_bath::{
    coupled_heat_bath_update_at, draw_heat_bath_center, heat_bath_update, heat_bath_update_at,
    DEFAULT_HEAT_BATH_ATTEMPTS,
};
pub use single::{apply_restricted_move, apply_single_move, draw_single_move, MoveOutcome, SingleMove};
