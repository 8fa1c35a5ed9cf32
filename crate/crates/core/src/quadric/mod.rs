//! Quadric models `w = A(z, zbar) + B(z, z) + conj(B(z, z))`, their CR
//! singular sets, one-dimensional slices and normal forms.

mod elliptic;
mod forms;
mod normal_form;
mod singular;
mod slice;

pub use elliptic::{find_elliptic_direction, is_elliptic_direction};
pub use forms::{
    GraphModel, HermitianDiagonalization, HermitianForm, PerturbedModel, QuadricModel,
    SymmetricForm,
};
pub use normal_form::{
    classify_normal_form, BishopLambda, ClassifyMode, InvariantReport, NormalForm, Param,
};
pub use singular::{cr_singular_set, is_completely_parabolic, LinearSet, LinearSetSummary};
pub use slice::{
    bishop_invariant_squared, conic_fiber, slice, BishopInvariant, ConicFiber, Ellipticity,
    QuadraticSurd, SliceModel,
};
