//! Profile swap regret and its relatives in two-player polytope games.
//!
//! Regret values are always per round (time-averaged) and clamped at zero.

pub mod convex;
pub mod equilibria;
pub mod error;
pub mod games;
pub mod learners;
pub mod linalg;
pub mod par;
pub mod regret;
pub mod scenarios;

pub use error::{Error, Result};
