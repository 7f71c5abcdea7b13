//! Exact arithmetic for deformations of residually trivial tame
//! representations into `GL_2` of finite-length coefficient rings.

pub mod coeffring;
pub mod cohomology;
pub mod defclass;
pub mod error;
pub mod ledger;
pub mod linalg;
pub mod matrep;
pub mod verify;

pub use error::{Error, Result};
