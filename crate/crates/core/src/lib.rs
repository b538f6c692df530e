// Negated comparisons are used deliberately so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod averaging;
pub mod cli;
pub mod counting;
pub mod error;
pub mod exponents;
pub mod planar;
pub mod plot;
pub mod saddle;
pub mod sampling;
pub mod surface;

pub use error::{Error, Result};
