//! Structural system design toolkit.
//!
//! The crate bundles the solvers used to build modular systems out of
//! design alternatives:
//!
//! * [`criteria`]: criteria frames, normalization and vector dominance,
//! * [`rank`]: ordinal ranking by utility, Pareto layers, outranking and ideal point,
//! * [`select`]: knapsack and multiple-choice knapsack heuristics with exact oracles,
//! * [`cluster`]: agglomerative clustering over dissimilarity matrices,
//! * [`assign`]: multicriteria assignment,
//! * [`route`]: TSP construction and 2-opt improvement,
//! * [`morph`]: hierarchical morphological synthesis with `N(S)` quality vectors,
//! * [`frameworks`]: composite schemes chaining the solvers above,
//! * [`probio`]: the versioned JSON problem/result format,
//! * [`cli`]: the `hmmd-kit` command-line front end.
//!
//! All solvers are deterministic pure functions over immutable inputs.

pub mod assign;
pub mod cli;
pub mod cluster;
pub mod criteria;
mod error;
pub mod frameworks;
pub mod limits;
pub mod morph;
pub mod probio;
pub mod rank;
pub mod route;
pub mod select;

pub use error::{Error, Result};
pub use limits::Limits;
