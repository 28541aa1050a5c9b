//! Driven qubit-cavity polaritons as tunable three-level systems.
//!
//! Frequencies and rates are in MHz throughout.

pub mod error;
pub mod lindblad;
pub mod model;
pub mod numerics;
pub mod polariton;
pub mod spectroscopy;
pub mod transitions;

pub use error::{Error, Result};
