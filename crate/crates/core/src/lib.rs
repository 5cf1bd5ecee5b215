//! Convex-roof entanglement monotones on symmetric bipartite states.
//!
//! The crate evaluates closed forms for the convex roofs of pure-state
//! entanglement monotones on Werner, isotropic, OO-invariant and
//! phase-permutation families of states on `C^d ⊗ C^d`, LOCC conversion
//! witnesses from pure states into those families, and brute-force numerical
//! oracles that check every closed form independently.
//!
//! Layout:
//!
//! - [`qcore`]: state types, Schmidt decomposition, the symmetric operators
//!   `W`, `W±`, `Φ_d`, `Q`, majorization, Haar sampling and twirl fibers.
//! - [`monotones`]: pure-state monotones as functions of Schmidt vectors.
//! - [`families`]: the symmetric families, twirls and separability facts.
//! - [`roofs`]: closed-form roofs, the 1-D convex envelope, orbit extensions.
//! - [`witness`]: pure-to-mixed conversion witnesses.
//! - [`oracle`]: independent numerical bounds used for verification.
//! - [`verify`]: the invariant suite behind `symroof verify`.

pub mod error;
pub mod exec;
pub mod families;
pub mod monotones;
mod optim;
pub mod oracle;
pub mod qcore;
pub mod roofs;
pub mod verify;
pub mod witness;

pub use error::{Error, Result};
pub use exec::Execution;
pub use families::{FamilyPoint, SymmetryGroup};

pub use monotones::{MonotoneSpec, ScalarFn};
pub use qcore::{DensityMatrix, PureState, SchmidtVector, SymmetricOperator, Unitary};

/// Complex scalar used for amplitudes and matrix entries.
pub type C64 = nalgebra::Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex vector.
pub type CVector = nalgebra::DVector<C64>;
