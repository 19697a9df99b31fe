//! Refined pre-Bloch and Bloch groups of finite fields, computed exactly.
//!
//! The crate builds presentations of `P(F)`, `RP(F)` and their quotients over
//! the square-class group ring, extracts invariants by integer linear
//! algebra, models specialization along `F_q((t))`, and assembles the
//! predicted decomposition of `H_3(SL_2(F), Z[1/2])` for towers of discretely
//! valued fields.

pub mod bloch;
pub mod cli;
pub mod error;
pub mod field;
pub mod group_ring;
pub mod laurent;
pub mod linalg;
pub mod tower;

pub use error::{Error, Result};
