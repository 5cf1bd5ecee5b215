//! LOCC conversion witnesses from pure states into mixed targets.
//!
//! A complete witness is non-negative exactly when the conversion is
//! possible. The isotropic witness is one-sided: a negative value rules the
//! conversion out, a non-negative value decides nothing.

mod isotropic;
mod two_qubit;

pub use isotropic::{
    pure_to_isotropic_nogo, pure_to_isotropic_nogo_with, witness_objectives, IsoWitnessOptions,
    FEASIBILITY_TOL,
};
pub use two_qubit::{pure_to_two_qubit, wootters_concurrence};

use crate::error::{check_range, Result};
use crate::qcore::SchmidtVector;

/// Tolerance of the complete witnesses at the Go/NoGo boundary.
pub const COMPLETE_TOL: f64 = 1e-10;
/// Width of the band around zero reported as a boundary case.
pub const BOUNDARY_TOL: f64 = 1e-8;

/// Outcome of a conversion test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Go,
    NoGo,
    Inconclusive,
}

/// Whether a witness decides both directions or only rules conversions out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessClass {
    Complete,
    NoGo,
}

/// Numerical health of the optimization behind a witness value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolverDiagnostics {
    /// Largest stationarity or complementarity residual at the reported optima.
    pub kkt_residual: f64,
    /// Largest constraint violation at the reported optima.
    pub max_violation: f64,
    /// Number of local solves performed.
    pub restarts: usize,
    /// The value lies within [`BOUNDARY_TOL`] of zero.
    pub boundary: bool,
}

/// Value and verdict of a witness.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessResult {
    pub value: f64,
    pub verdict: Verdict,
    pub class: WitnessClass,
    /// Optimum of each subproblem `k = 1, …, d−1` (isotropic witness only);
    /// `None` where the subproblem has no feasible point.
    pub per_k: Vec<Option<f64>>,
    /// The optimizing target Schmidt vector, when one exists.
    pub optimizer: Option<SchmidtVector>,
    pub diagnostics: SolverDiagnostics,
}

impl WitnessResult {
    pub(crate) fn complete(value: f64, tol: f64) -> Self {
        WitnessResult {
            value,
            verdict: if value >= -tol { Verdict::Go } else { Verdict::NoGo },
            class: WitnessClass::Complete,
            per_k: Vec::new(),
            optimizer: None,
            diagnostics: SolverDiagnostics {
                boundary: value.abs() <= BOUNDARY_TOL,
                ..SolverDiagnostics::default()
            },
        }
    }

    /// Checks that the verdict follows from the value for this witness class.
    pub fn is_consistent(&self) -> bool {
        match self.class {
            WitnessClass::Complete => (self.verdict == Verdict::Go) == (self.value >= -COMPLETE_TOL),
            WitnessClass::NoGo => match self.verdict {
                Verdict::NoGo => self.value < -BOUNDARY_TOL,
                Verdict::Inconclusive => self.value >= -BOUNDARY_TOL,
                Verdict::Go => self.value.is_finite(),
            },
        }
    }
}

/// Complete witness for converting a pure state with Schmidt vector `lambda`
/// into the Werner state `ρ_wer(a)` of any dimension.
///
/// The value is `E₁(λ) − Ê₁(ρ_wer(a))`, which equals `1/2 + √(a(1−a)) − λ₁`
/// for `a ≥ 1/2` and `1 − λ₁` on the separable side.
pub fn pure_to_werner(lambda: &SchmidtVector, a: f64) -> Result<WitnessResult> {
    check_range("a", a, 0.0, 1.0)?;
    let l1 = lambda.largest();
    let (value, tol) = if a <= 0.5 {
        (1.0 - l1, f64::INFINITY)
    } else {
        (0.5 + (a * (1.0 - a)).sqrt() - l1, 1e-12)
    };
    Ok(WitnessResult::complete(value, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: &[f64]) -> SchmidtVector {
        SchmidtVector::from_unsorted(v.to_vec()).unwrap()
    }

    #[test]
    fn werner_examples() {
        let half = sv(&[0.5, 0.5, 0.0]);
        for a in [0.0, 0.3, 0.5, 0.75, 1.0] {
            assert_eq!(pure_to_werner(&half, a).unwrap().verdict, Verdict::Go);
        }
        let product = sv(&[1.0, 0.0]);
        let r = pure_to_werner(&product, 0.75).unwrap();
        assert_eq!(r.verdict, Verdict::NoGo);
        assert!(r.is_consistent());
        assert_eq!(pure_to_werner(&product, 0.25).unwrap().verdict, Verdict::Go);
        let l1 = 0.5 + 3f64.sqrt() / 4.0;
        let edge = sv(&[l1, 1.0 - l1]);
        let r = pure_to_werner(&edge, 0.75).unwrap();
        assert_eq!(r.verdict, Verdict::Go);
        assert!(r.value.abs() < 1e-12 && r.diagnostics.boundary);
    }

    #[test]
    fn werner_rejects_out_of_range() {
        assert!(pure_to_werner(&sv(&[1.0]), 1.5).is_err());
    }
}
