//! Pure-to-two-qubit conversion through the concurrence.

use crate::error::{structural, Result};
use crate::qcore::{DensityMatrix, SchmidtVector};
use crate::witness::{WitnessResult, COMPLETE_TOL};
use crate::{CMatrix, C64};

/// Eigenvalues of `ρρ̃` below this are rounding noise and are set to zero.
const SPECTRUM_FLOOR: f64 = 1e-13;

/// Concurrence of a two-qubit state from the spin-flip spectrum.
///
/// With `ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)` and `ν₁ ≥ … ≥ ν₄` the eigenvalues
/// of `ρρ̃`, `C = max(0, √ν₁ − √ν₂ − √ν₃ − √ν₄)`. The eigenvalues are taken
/// from the Hermitian matrix `√ρ ρ̃ √ρ`, which has the same spectrum.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.d() != 2 {
        return structural(format!("concurrence needs a two-qubit state, got d = {}", rho.d()));
    }
    let m = rho.matrix();
    let mut flip = CMatrix::zeros(4, 4);
    for (i, j, s) in [(0, 3, -1.0), (1, 2, 1.0), (2, 1, 1.0), (3, 0, -1.0)] {
        flip[(i, j)] = C64::new(s, 0.0);
    }
    let tilde = &flip * m.map(|z| z.conj()) * &flip;
    let (w, v) = rho.spectrum();
    let sqrt_diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        4,
        w.iter().map(|x| C64::new(x.max(0.0).sqrt(), 0.0)),
    ));
    let root = &v * sqrt_diag * v.adjoint();
    let r = &root * tilde * &root;
    let r = (&r + r.adjoint()).scale(0.5);
    let mut nu: Vec<f64> = r
        .symmetric_eigenvalues()
        .iter()
        .map(|&x| if x > SPECTRUM_FLOOR { x.sqrt() } else { 0.0 })
        .collect();
    nu.sort_by(|a, b| b.total_cmp(a));
    Ok((nu[0] - nu[1] - nu[2] - nu[3]).max(0.0))
}

/// Complete witness for converting a pure state with Schmidt vector `lambda`
/// into the two-qubit state `rho`: `E₁(λ) − (1 − √(1 − C(ρ)²))/2`.
pub fn pure_to_two_qubit(lambda: &SchmidtVector, rho: &DensityMatrix) -> Result<WitnessResult> {
    let c = wootters_concurrence(rho)?;
    let roof = 0.5 * (1.0 - (1.0 - c * c).max(0.0).sqrt());
    let value = 1.0 - lambda.largest() - roof;
    Ok(WitnessResult::complete(value, COMPLETE_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::PureState;
    use crate::witness::Verdict;

    fn bell() -> DensityMatrix {
        DensityMatrix::from_pure(&PureState::maximally_entangled(2))
    }

    #[test]
    fn bell_and_product_concurrence() {
        assert!((wootters_concurrence(&bell()).unwrap() - 1.0).abs() < 1e-10);
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!(wootters_concurrence(&mixed).unwrap() < 1e-10);
    }

    #[test]
    fn pure_state_concurrence_is_twice_root_determinant() {
        let lambda = SchmidtVector::new(vec![0.8, 0.2]).unwrap();
        let psi = PureState::from_schmidt(&lambda);
        let c = wootters_concurrence(&DensityMatrix::from_pure(&psi)).unwrap();
        assert!((c - 2.0 * (0.8f64 * 0.2).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn bell_examples() {
        let even = SchmidtVector::uniform(2);
        let r = pure_to_two_qubit(&even, &bell()).unwrap();
        assert!(r.value.abs() < 1e-10);
        assert_eq!(r.verdict, Verdict::Go);
        let product = SchmidtVector::product(2);
        let r = pure_to_two_qubit(&product, &bell()).unwrap();
        assert!((r.value + 0.5).abs() < 1e-10);
        assert_eq!(r.verdict, Verdict::NoGo);
    }

    #[test]
    fn rejects_wrong_dimension() {
        let rho = DensityMatrix::maximally_mixed(3);
        assert!(matches!(
            pure_to_two_qubit(&SchmidtVector::uniform(2), &rho),
            Err(crate::Error::Structural(_))
        ));
    }
}
