//! Periodic 1D Lagrange finite elements, the odd/even super-approximation
//! dichotomy of the L2 projection of derivatives, and an energy-conservative
//! Galerkin scheme for the regularized long wave equation with relaxation
//! Runge–Kutta time stepping.

pub mod basis;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod projection;
pub mod rlw;
pub mod time_integration;

pub use error::{FemError, Result};
