//! Quantum cluster expansions for arcs on unpunctured orbifolds.
//!
//! The crate builds snake graphs from crossing data, enumerates their perfect
//! matchings and assembles the quantum Laurent expansion of an arc, with the
//! q-power of each term given by an integrated valuation over twists. The
//! [`verify`] module checks the results against mutation dynamics.

pub mod cli;
pub mod error;
pub mod expansion;
pub mod laurent;
pub mod scenario;
pub mod seed;
pub mod snake;
pub mod torus;
pub mod triangulation;
pub mod verify;

pub use error::{Error, Result};
