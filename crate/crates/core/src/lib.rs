//! Pump-probe signals of exciton dimers driven by multimode coherent-state
//! pulses, with the vacuum contribution to stimulated emission.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod constants;
pub mod error;
pub mod ensemble;
pub mod exciton;
pub mod experiment;
pub mod field;
pub mod fock;
pub mod operators;
pub mod oracle;
pub mod quadrature;
pub mod runner;
pub mod signals;

pub use error::{Error, Result};
