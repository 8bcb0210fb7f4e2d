//! Exact and certified arithmetic.

pub mod dyadic;
pub mod interval;
pub mod precision;
pub mod quadratic;
pub mod real;

pub use dyadic::Dyadic;
pub use interval::{compare, Comparison, IntervalReal};
pub use precision::{max_bits, set_max_bits, DEFAULT_MAX_BITS};
pub use quadratic::QuadraticReal;
pub use real::{parse_real, DecimalReal, RealSpec};
