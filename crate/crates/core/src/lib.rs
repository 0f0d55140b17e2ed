#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::excessive_precision,
    clippy::redundant_guards
)]
pub mod error;
pub mod laws;
pub mod quadrature;
pub mod simulator;
pub mod special;
pub mod transforms;

pub use error::{Error, Result};
