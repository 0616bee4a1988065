//! Numerics for thermal time quanta generated by measurement.
//!
//! The crate covers the chain from a measured quantum state to a time scale:
//! entropies of density matrices (including negative conditional entropy),
//! the Margolus-Levitin time quantum `h/4kTS` checked against explicit
//! Schrödinger evolution, velocity bounds from Gaussian position
//! measurement, their behaviour under boosts, and the resulting discrete
//! tick sequences.
//!
//! Entropies are in nats. Physical constants live in
//! [`speed_limits::ThermalContext`], whose default is `h = k = c = T = 1`.

// `!(x > 0.0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entropy;
pub mod error;
pub mod gaussian_position;
pub mod io;
pub mod linalg;
pub mod ml_sweep;
pub mod relativity;
pub mod sampling;
pub mod speed_limits;
pub mod states;
pub mod thermal_flow;

pub use entropy::EntropyValue;
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use speed_limits::{ThermalContext, TimeQuantum};
pub use states::{BipartiteState, ClassicalQuantumState, DensityMatrix, StateVector};
