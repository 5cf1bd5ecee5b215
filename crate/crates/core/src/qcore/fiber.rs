//! Pure states with a prescribed `⟨W₋⟩` or `⟨Φ_d⟩`.
//!
//! A Haar-random `ψ₀` is split into its components in the two complementary
//! subspaces, each is normalized, and they are recombined with weights
//! `√(1−a)` and `√a`. The target expectation is hit exactly.

use crate::error::{check_range, Result};
use crate::exec::{stream, Rng};
use crate::qcore::haar::random_pure_state;
use crate::qcore::operators::{apply_kind, OperatorKind};
use crate::qcore::PureState;
use crate::CVector;

const DEGENERATE_NORM: f64 = 1e-12;

fn fiber_state(kind: OperatorKind, value: f64, d: usize, rng: &mut Rng) -> PureState {
    loop {
        let psi0 = random_pure_state(d, rng);
        if let Some(amps) = onto_fiber(kind, value, d, psi0.amplitudes()) {
            return PureState::normalize(d, amps).expect("orthogonal unit components");
        }
    }
}

/// Rescales the components of `v` inside and outside the range of `kind` so
/// that the result is a unit vector with expectation `value`. Returns `None`
/// when either component vanishes.
pub(crate) fn onto_fiber(kind: OperatorKind, value: f64, d: usize, v: &CVector) -> Option<CVector> {
    let inside = apply_kind(kind, d, v);
    let outside: CVector = v - &inside;
    let (ni, no) = (inside.norm(), outside.norm());
    let need_inside = value > 0.0;
    let need_outside = value < 1.0;
    if (need_inside && ni < DEGENERATE_NORM) || (need_outside && no < DEGENERATE_NORM) {
        return None;
    }
    let mut amps = CVector::zeros(v.len());
    if need_inside {
        amps += inside.scale(value.sqrt() / ni);
    }
    if need_outside {
        amps += outside.scale((1.0 - value).sqrt() / no);
    }
    Some(amps)
}

/// Random pure state with `⟨W₋⟩ = a`.
pub fn fiber_state_werner(a: f64, d: usize, seed: u64) -> Result<PureState> {
    fiber_state_werner_rng(a, d, &mut stream(seed, 0))
}

pub fn fiber_state_werner_rng(a: f64, d: usize, rng: &mut Rng) -> Result<PureState> {
    check_range("a", a, 0.0, 1.0)?;
    check_dim(d)?;
    Ok(fiber_state(OperatorKind::WMinus, a, d, rng))
}

/// Random pure state with `⟨Φ_d⟩ = b`.
pub fn fiber_state_isotropic(b: f64, d: usize, seed: u64) -> Result<PureState> {
    fiber_state_isotropic_rng(b, d, &mut stream(seed, 0))
}

pub fn fiber_state_isotropic_rng(b: f64, d: usize, rng: &mut Rng) -> Result<PureState> {
    check_range("b", b, 0.0, 1.0)?;
    check_dim(d)?;
    Ok(fiber_state(OperatorKind::PhiD, b, d, rng))
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return crate::error::domain(format!("fiber states need d >= 2, got {d}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::operators::expectation_amps;
    use crate::qcore::schmidt::schmidt_coefficients;

    #[test]
    fn hits_targets() {
        let psi = fiber_state_werner(0.7, 3, 1).unwrap();
        let e = expectation_amps(OperatorKind::WMinus, 3, psi.amplitudes());
        assert!((e - 0.7).abs() < 1e-10);
        let psi = fiber_state_isotropic(0.4, 3, 1).unwrap();
        let e = expectation_amps(OperatorKind::PhiD, 3, psi.amplitudes());
        assert!((e - 0.4).abs() < 1e-10);
        assert!(fiber_state_werner(1.2, 3, 0).is_err());
    }

    #[test]
    fn endpoints() {
        let psi = fiber_state_werner(1.0, 3, 4).unwrap();
        let e = expectation_amps(OperatorKind::WMinus, 3, psi.amplitudes());
        assert!((e - 1.0).abs() < 1e-12);
        let psi = fiber_state_isotropic(1.0, 4, 4).unwrap();
        let l = schmidt_coefficients(&psi).unwrap();
        assert!(l.as_slice().iter().all(|x| (x - 0.25).abs() < 1e-10));
    }
}
