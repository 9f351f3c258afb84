//! Exact computations with affine Hecke algebras attached to inertial orbits
//! of classical p-adic groups.

pub mod classify;
pub mod error;
pub mod hecke;
pub mod lattice;
pub mod laurent;
pub mod opmodel;
pub mod params;
pub mod rational;
pub mod report;
pub mod root_datum;
pub mod scalar;
pub mod weyl;

pub use error::{Error, Result};
