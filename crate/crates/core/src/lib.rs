//! Fat planes in complete intersections: closed-form expected dimensions
//! and Chow-triviality bounds, plus exact rank certificates over prime
//! fields.

pub mod algebra;
pub mod bigint_serde;
pub mod bounds;
pub mod combinatorics;
pub mod error;
pub mod field;
pub mod report;
pub mod verifiers;

pub use error::{Error, Result};
