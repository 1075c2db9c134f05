//! Exact rational arithmetic, dense linear algebra and linear feasibility
//! certificates.

mod cone;
mod lp;
mod matrix;
mod rational;

pub use cone::{matches_pattern, nonneg_combination, positively_spans, CoordSign, PositiveSpan, SpanCertificate};
pub use lp::{is_farkas, is_solution, nonnegative_solution, Feasibility};
pub use matrix::{add, affine_rank, dot, is_affinely_independent, is_zero_vec, scale, signum, solve_square, sub, RatMatrix};
pub use rational::{
    int, ints, parse_rational, pow, rat, serde_rational, serde_rational_rows, serde_rational_vec, to_decimal, to_f64,
    to_fraction_string, Rational,
};
pub(crate) use rational::round_f64;
