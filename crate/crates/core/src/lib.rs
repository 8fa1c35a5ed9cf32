//! Exact computation with CR singular codimension-two quadric models
//! `w = A(z, zbar) + B(z, z) + conj(B(z, z))` in C^{n+1}.
//!
//! The crate covers normal forms and CR singular sets of the quadric, slices
//! and Bishop invariants along complex lines, the CR condition on homogeneous
//! polynomials as an exact linear system, and holomorphic extension of CR
//! polynomials (exact on the quadric, degree by degree on perturbed models).

pub mod cranalysis;
pub mod error;
pub mod exactalg;
pub mod extension;
pub mod io;
pub mod poly;
pub mod quadric;
pub mod selftest;

pub use error::{Error, Result};
pub use exactalg::{ExactMatrix, GaussianRational, Rational};
pub use poly::{Monomial, Polynomial, Var};
pub use quadric::{PerturbedModel, QuadricModel};
