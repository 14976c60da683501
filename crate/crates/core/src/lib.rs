//! Grand-canonical thermodynamics of q-particles.

pub mod boolean;
pub mod error;
pub mod freegas;
pub mod par;
pub mod polylog;
pub mod qgrand;
pub mod quadrature;
pub mod report;
pub mod rootfind;
pub mod spectrum;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
