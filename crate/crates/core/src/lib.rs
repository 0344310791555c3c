//! Exact multidimensional continued fractions: the Jacobi and Jacobi–Perron
//! algorithms, convergents, periodic cubic recovery, and transcendence
//! criterion checkers.

pub mod error;
pub mod cli;
pub mod convergents;
pub mod engine;
pub mod exact;
pub mod io;
pub mod periodic;
pub mod transcendence;

pub use error::{McfError, Result};
