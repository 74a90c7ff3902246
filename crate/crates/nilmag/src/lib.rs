//! Left-invariant magnetic systems on nilpotent Lie groups.
//!
//! The crate builds magnetic systems (algebra, metric, closed 2-form,
//! optional lattice) over exact rational data, forms their central
//! extensions, reduces the Hamiltonian dynamics to Euler flows on the
//! dual Lie algebra, and measures the resulting dynamics: conservative
//! Runge-Kutta integration with drift diagnostics, Lyapunov-exponent
//! estimation, and exact symbolic dynamics for subshifts of finite type.

pub mod chaos;
pub mod config;
pub mod defaults;
pub mod error;
pub mod euler;
pub mod export;
pub mod liealg;
pub mod linalg;
pub mod magext;
pub mod orbits;
pub mod rational;
pub mod scenarios;
pub mod symdyn;

pub use error::{Error, Result};
