//! Spectral gaps of bounded-degree planar triangulations, built and checked
//! at desk scale.
//!
//! The crate constructs rooted subdivided expanders, reads off their
//! distance densities, turns those densities into bumpy-cylinder sphere
//! triangulations with small spectral gap, and cross-checks the gap three
//! ways: combinatorially (dense and iterative eigensolvers), through
//! one-dimensional weighted Neumann problems, and through random-walk
//! mixing times.

pub mod cylinder;
pub mod error;
pub mod family;
pub mod graph;
pub mod io;
pub mod profile;
pub mod spectral;
pub mod sturm;
pub mod walk;
pub mod upper_bound;

pub use error::{Error, Result};
