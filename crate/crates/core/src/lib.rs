//! Secrecy performance of a cognitive underlay hybrid RF/FSO link.

// `!(x > 0)` guards reject NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Reference constants keep every digit of their high-precision source.
#![allow(clippy::excessive_precision)]

pub mod error;
pub mod mellin;
pub mod quad;
pub mod scalar;
pub mod channels;
pub mod specfun;
pub mod series;
pub mod cun;
pub mod secrecy;
pub mod mc;
pub mod config;

pub use error::{Error, Result};
pub use scalar::Real;
