//! Incomplete and stochastic procedures: random walk, R-neighborhood
//! descent, blocked islands, annealing and peeling decoders, and the
//! projected Markov chain of the random walk.

pub mod decode;
pub mod descent;
pub mod islands;
pub mod markov;
pub mod walk;

pub use decode::{bec_erasures, bec_peel_decode, sa_decode, Channel, DecoderRun};
pub use descent::{gd_from, gd_run, GdOptions, GdRun};
pub use islands::{blocked_island_scan, island_equations, plant_island, Island, IslandReport};
pub use markov::{drift_sign_change, projected_markov_drift, projected_markov_run, ChainKind, ChainParams, ChainRun};
pub use walk::{
    prwsat_run, schoening_budget, schoening_bound, schoening_trials, walk_from, PlateauStats, SchoeningResult,
    WalkOptions, WalkOutcome, WalkProblem, WalkTrace,
};
