//! Averaging along periodic quadratic flows.

pub mod exact;
pub mod flow;
pub mod numeric;

pub use exact::{average, g0_weighted_average, oscillating_part, require_zero_average, solve_homological, HomologicalMode};
pub use flow::{flow_apply, PeriodicFlow};
pub use numeric::{average_numeric, g0_numeric, simpson_nodes, weighted_average_numeric};
