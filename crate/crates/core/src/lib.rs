//! Exact spectral analysis of the Metropolis random-transposition chain whose
//! stationary law is the Ewens distribution, diagonalized by Jack polynomials.
//!
//! Modules build on each other in this order: [`partitions`], [`symfunc`],
//! [`jack`], [`chain`], [`spectral`], [`experiments`]; [`sdops`] holds the
//! differential operators that generate the chain.

pub mod chain;
pub mod error;
pub mod experiments;
pub mod jack;
pub mod linalg;
pub mod partitions;
pub mod rational;
pub mod sdops;
pub mod spectral;
pub mod symfunc;
pub mod verify;

pub use error::{Error, Result};
pub use partitions::Partition;
pub use rational::Rat;
