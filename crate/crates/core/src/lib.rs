//! Seismic-inspired multiobjective optimization of entanglement throughput
//! in quantum repeater networks.
//!
//! The crate is organized as a problem model ([`problem`]), the seismic
//! operators ([`seismic`]), a generic Pareto engine ([`engine`]) and trace
//! statistics ([`analysis`]).

pub mod analysis;
pub mod engine;
pub mod error;
pub mod problem;
pub mod rng;
pub mod seismic;
pub mod space;

pub use error::{Error, Result};
pub use rng::RngStream;
pub use space::Bounds;
