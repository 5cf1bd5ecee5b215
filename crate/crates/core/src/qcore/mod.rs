//! Bipartite linear algebra on `C^d ⊗ C^d`.

pub mod fiber;
pub mod haar;
pub mod majorization;
pub mod operators;
pub mod schmidt;
pub mod types;

pub use fiber::{fiber_state_isotropic, fiber_state_werner};
pub use haar::haar_unitary;
pub use majorization::majorizes;
pub use operators::{build_operator, expectation, OperatorKind, SymmetricOperator};
pub use schmidt::schmidt_decompose;
pub use types::{DensityMatrix, PureState, SchmidtVector, Unitary};
