//! Exact scalars, free algebras, presentations and bounded ideal membership.

pub mod algebra;
pub mod field;
pub mod groebner;
pub mod lin;
pub mod morphism;
pub mod poly;
pub mod presentation;
pub mod word;

pub use algebra::{evaluate, substitute, substitute_anti, substitute_with, FreeAlgebra, ScalarAlgebra, UnitalAlgebra};
pub use field::{FieldSpec, Scalar};
pub use groebner::{nf_bounded, GroebnerBasis, NormalForm, DEFAULT_DEGREE_BOUND};
pub use lin::Lin;
pub use morphism::{verify_morphism, EqualityOracle, GeneratorImageMap, MorphismReport, Verdict};
pub use poly::{nc_mul, nc_mul_in, render_poly, NCPolynomial};
pub use presentation::{tensor_many, tensor_presentation, Presentation, TensorPresentation};
pub use word::{Gen, Word};
