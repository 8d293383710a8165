//! Numerical toolkit for discriminating bipartite pure states by local
//! operations and classical communication.

pub mod acceptance;
pub mod bounds;
pub mod ensembles;
pub mod error;
pub mod library;
pub mod locc;
pub mod qstate;
pub mod synth;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
