//! Exact symbolic engine for the q-deformed KdV, mKdV and affine Toda
//! hierarchies.
//!
//! All computations are exact. Phase-space identities are checked at the
//! generic point of a finite window of Fourier modes (see [`modering`]),
//! where they become polynomial identities with coefficients in `Q(q)`.

pub mod cli;
pub mod coeffs;
pub mod error;
pub mod hierarchy_kdv;
pub mod limits;
pub mod miura_mkdv;
pub mod modering;
pub mod opalg;
pub mod poisson;
pub mod report;
pub mod toda;

pub use error::{Error, Result};
