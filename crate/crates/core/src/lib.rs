//! Random constraint-satisfaction ensembles, the search procedures run on
//! them, and the analytic machinery that predicts how those searches behave.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its parameters and a seed; file formats, experiment
//! orchestration and the command line live in the `algodyn` crate.
//!
//! Module map:
//! - [`instances`]: K-SAT, 2+p-SAT, 3-XORSAT, G(N, c/N) and regular LDPC
//!   generators with their invariants.
//! - [`dpll`]: complete backtracking solver with UC / GUC / SC1 splitting
//!   and search-tree instrumentation.
//! - [`vc`]: branch-and-bound vertex cover decision procedure and leaf removal.
//! - [`local_search`]: random walk, gradient descent, blocked islands,
//!   annealing and peeling decoders, and the projected Markov chain.
//! - [`theory`]: trajectory ODEs, the branch-growth PDE, critical lines,
//!   series expansions and special functions.
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

mod error;
pub mod rng;

pub mod dpll;
pub mod instances;
pub mod local_search;
pub mod theory;
pub mod vc;

#[cfg(any(test, feature = "oracles"))]
pub mod oracle;

pub use error::{Error, Result};
