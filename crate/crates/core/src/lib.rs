//! Zeroth-order WKB quantization: eigenvalues from phase-integral conditions,
//! closed-form oracles, piecewise wavefunctions, a Numerov reference solver
//! and Cornell meson spectroscopy.

pub mod analytic;
pub mod cli;
pub mod cuts;
pub mod error;
pub mod model;
pub mod phase;
pub mod quadrature;
pub mod quantize;
pub mod refsolver;
pub mod regge;
pub mod report;
pub mod roots;
pub mod wavefn;

pub use error::{Error, Result};
pub use model::{build_system, PotentialKind, System, UnitSystem};
