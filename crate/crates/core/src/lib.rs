//! Optical rotation of a quantum-dot exciton spin by a detuned hyperbolic-secant pulse.

pub mod analysis;
pub mod designer;
pub mod error;
pub mod exciton;
pub mod experiment;
pub mod propagator;
pub mod rosenzener;
pub mod scalar;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
