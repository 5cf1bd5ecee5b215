//! Roofs on Werner states.
//!
//! Every monotone is minimized on the Werner fiber `⟨W₋⟩ = a` by the same
//! two-qubit state `ψ_a`, so the roof is the 1-D convex envelope of
//! `a ↦ E(ψ_a)`.

use crate::error::{check_range, domain, Result};
use crate::monotones::{binary_entropy, MonotoneSpec};
use crate::qcore::{PureState, SchmidtVector};
use crate::roofs::envelope::{envelope_of, envelope_with_knots, EnvelopeFunction, DEFAULT_GRID};
use crate::roofs::{MinimizerProfile, ProfileKind};
use crate::{CVector, C64};

/// `√(a(1−a))`.
fn root_a(a: f64) -> f64 {
    (a * (1.0 - a)).max(0.0).sqrt()
}

/// Schmidt vector of `ψ_a`: `(1, 0)` for `a ≤ 1/2`, otherwise
/// `(1/2 + √(a(1−a)), 1/2 − √(a(1−a)))`.
pub fn werner_minimizer(a: f64) -> Result<MinimizerProfile> {
    check_range("a", a, 0.0, 1.0)?;
    let lambda = if a <= 0.5 {
        vec![1.0, 0.0]
    } else {
        let r = root_a(a);
        vec![0.5 + r, 0.5 - r]
    };
    Ok(MinimizerProfile {
        kind: ProfileKind::WernerPsi { a },
        schmidt: SchmidtVector::from_unsorted(lambda)?,
    })
}

/// The state `ψ_a` embedded in `C^d ⊗ C^d` on the first two basis vectors.
///
/// For `a ≤ 1/2` this is `(√(2a)|0⟩ + √(1−2a)|1⟩) ⊗ |1⟩`; for `a ≥ 1/2` it is
/// `√(1/2 + r)|01⟩ − √(1/2 − r)|10⟩` with `r = √(a(1−a))`.
pub fn werner_minimizer_state(a: f64, d: usize) -> Result<PureState> {
    check_range("a", a, 0.0, 1.0)?;
    if d < 2 {
        return domain("Werner states need d >= 2");
    }
    let mut amps = CVector::zeros(d * d);
    let idx = |i: usize, j: usize| i * d + j;
    if a <= 0.5 {
        amps[idx(0, 1)] = C64::new((2.0 * a).sqrt(), 0.0);
        amps[idx(1, 1)] = C64::new((1.0 - 2.0 * a).max(0.0).sqrt(), 0.0);
    } else {
        let r = root_a(a);
        amps[idx(0, 1)] = C64::new((0.5 + r).sqrt(), 0.0);
        amps[idx(1, 0)] = C64::new(-(0.5 - r).max(0.0).sqrt(), 0.0);
    }
    PureState::normalize(d, amps)
}

/// `E(ψ_a)` in dimension `d`, before taking the convex envelope.
pub fn werner_pre_envelope(spec: &MonotoneSpec, a: f64, d: usize) -> Result<f64> {
    let profile = werner_minimizer(a)?;
    spec.evaluate(&profile.schmidt.padded(d))
}

/// Envelope of `a ↦ E(ψ_a)` on a uniform grid of `n` points.
pub fn werner_envelope(spec: &MonotoneSpec, d: usize, n: usize) -> Result<EnvelopeFunction> {
    envelope_of(|a| werner_pre_envelope(spec, a, d), n)
}

/// Roof evaluated through the sampled envelope only, without closed forms.
pub fn roof_werner_by_envelope(spec: &MonotoneSpec, a: f64, d: usize, n: usize) -> Result<f64> {
    check_range("a", a, 0.0, 1.0)?;
    spec.validate()?;
    let env = envelope_with_knots(|x| werner_pre_envelope(spec, x, d), n, &[0.5, a])?;
    Ok(env.eval(a))
}

/// Convex roof of `spec` on the Werner state `ρ_wer(a)` in dimension `d`.
///
/// Closed forms are used for the entropy of entanglement, the Vidal
/// monotones and Rényi orders `α > 1` and `α < 1/2`; everything else goes
/// through the envelope on [`DEFAULT_GRID`] points.
pub fn roof_werner(spec: &MonotoneSpec, a: f64, d: usize) -> Result<f64> {
    check_range("a", a, 0.0, 1.0)?;
    if d < 2 {
        return domain("Werner states need d >= 2");
    }
    spec.validate()?;
    let entangled = a > 0.5;
    let r = root_a(a);
    match spec {
        MonotoneSpec::EntropyOfEntanglement => {
            Ok(if entangled { binary_entropy(0.5 - r) } else { 0.0 })
        }
        MonotoneSpec::Vidal(1) => Ok(if entangled { 0.5 - r } else { 0.0 }),
        MonotoneSpec::Vidal(_) => Ok(0.0),
        MonotoneSpec::Renyi(alpha) if *alpha > 1.0 => Ok(if entangled {
            renyi_werner(*alpha, a)
        } else {
            0.0
        }),
        MonotoneSpec::Renyi(alpha) if *alpha < 0.5 => Ok((2.0 * a - 1.0).max(0.0)),
        _ => roof_werner_by_envelope(spec, a, d, DEFAULT_GRID),
    }
}

/// `log₂((1/2 + r)^α + (1/2 − r)^α)/(1 − α)` with `r = √(a(1−a))`, for `a ≥ 1/2`.
pub fn renyi_werner(alpha: f64, a: f64) -> f64 {
    let r = root_a(a);
    let s = (0.5 + r).powf(alpha) + (0.5 - r).max(0.0).powf(alpha);
    (s.log2() / (1.0 - alpha)).max(0.0)
}
