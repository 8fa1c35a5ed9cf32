//! Polynomials in `z, zbar, w` with Gaussian-rational coefficients.

mod monomial;
mod polynomial;
mod text;

pub use monomial::{holomorphic_monomials, monomials_of_degree, Monomial, Var};
pub use polynomial::{AffineMap, Polynomial};
pub use text::{parse_monomial, parse_polynomial};
