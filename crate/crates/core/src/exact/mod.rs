//! Exact arithmetic: rational intervals, polynomials, number fields, real
//! values with certified floors, and certified logarithms.

pub mod analytic;
pub mod field;
pub mod interval;
pub mod poly;
pub mod real;

pub use field::{FieldElement, NumberField};
pub use interval::RationalInterval;
pub use poly::QPoly;
pub use real::{floor_exact, is_integer, Oracle, PrecisionBudget, RealValue};
