//! Exact scalars in Q(i) and dense linear algebra over them.

mod matrix;
mod scalar;

pub use matrix::ExactMatrix;
pub use scalar::{
    dyadic_approx, format_rational, parse_rational, rat, rat_int, rational_sqrt, rational_to_f64,
    GaussianRational, Rational,
};
