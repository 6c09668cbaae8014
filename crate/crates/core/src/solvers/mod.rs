//! Scheduling algorithms.

mod baseline;
mod bounds;
mod common;
mod document;
mod exact;
mod joint;
mod mramc;
mod multi;
mod relocate;
mod set_cover;

pub use baseline::{baseline_schedule, greedy_based_reference};
pub use bounds::{bound_params, harmonic, BoundParams};
pub use common::{CandidatePools, CoverageState, Occupancy, Phase, SolverResult, Status, TraceStep};
pub use document::{load_schedule, save_schedule, ScheduleDocument};
pub use exact::{exact_solve, exact_solve_with_budget, ExactMode, DEFAULT_NODE_BUDGET};
pub use joint::{joint_schedule, selection_round, surveillance_items, TrafficItem, TrafficKind};
pub use mramc::{mramc, mramc_greedy, mramc_relocate, GreedyOutcome};
pub use multi::{m_mramc, MultiCoverage, UnmetReason, UnmetTarget};
pub use set_cover::{weighted_set_cover_greedy, WeightedSet};
