//! Roofs on isotropic states.
//!
//! On the isotropic fiber `⟨Φ_d⟩ = b` the minimization reduces to Schmidt
//! vectors with `Σ √λ_i = √(d b)`. Vidal monotones and the 2- and
//! G-concurrences have closed forms; generalized entropies `Σ f(λ_i)` are
//! minimized by one of two vector shapes depending on whether
//! `y ↦ f′(1/(4y²))` is concave or convex, and the roof is then the 1-D
//! convex envelope in `b`.

use crate::error::{check_range, domain, Error, Result};
use crate::monotones::{MonotoneSpec, ScalarFn};
use crate::qcore::SchmidtVector;
use crate::roofs::envelope::{envelope_of, envelope_with_knots, uniform_grid, EnvelopeFunction, DEFAULT_GRID};
use crate::roofs::{MinimizerProfile, ProfileKind};

/// Distance from an integer below which `d b` is snapped to it.
pub const FLOOR_SNAP: f64 = 1e-9;

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return domain(format!("isotropic states need d >= 2, got {d}"));
    }
    Ok(())
}

fn check_fiber_range(b: f64, d: usize) -> Result<()> {
    check_dim(d)?;
    check_range("b", b, 1.0 / d as f64 - 1e-15, 1.0)
}

/// Convex roof of `E_k`:
/// `0` for `b ≤ k/d` or `k ≥ d`, else `(1/d)(√((1−b)k) − √(b(d−k)))²`.
pub fn iso_vidal_roof(k: usize, b: f64, d: usize) -> Result<f64> {
    check_dim(d)?;
    check_range("b", b, 0.0, 1.0)?;
    if k < 1 {
        return domain("k must be at least 1");
    }
    if k >= d || b <= k as f64 / d as f64 {
        return Ok(0.0);
    }
    let (kf, df) = (k as f64, d as f64);
    let s = ((1.0 - b) * kf).sqrt() - (b * (df - kf)).sqrt();
    Ok(s * s / df)
}

/// Fiber minimizer of `E_k`.
///
/// Above `b = k/d` it has the two-level shape with `k` large entries; below,
/// a truncated vector with at most `k` nonzero entries attains zero.
pub fn iso_vidal_minimizer(k: usize, b: f64, d: usize) -> Result<MinimizerProfile> {
    check_fiber_range(b, d)?;
    if k < 1 {
        return domain("k must be at least 1");
    }
    if k >= d || b <= k as f64 / d as f64 {
        let (t, m) = tgen2(b, d)?;
        return MinimizerProfile::isotropic(ProfileKind::IsoTruncated { t, k: m }, d);
    }
    let e = iso_vidal_roof(k, b, d)?;
    let t = (1.0 - e) / k as f64;
    MinimizerProfile::isotropic(ProfileKind::IsoTwoLevel { t, k }, d)
}

/// `λ^β`: consecutive differences of `1, E_{1,iso}(b), …, E_{d−1,iso}(b), 0`.
///
/// It majorizes the Schmidt vector of every state on the fiber, so any
/// monotone evaluated on it is a lower bound for the fiber minimum.
pub fn iso_lambda_beta(b: f64, d: usize) -> Result<SchmidtVector> {
    check_dim(d)?;
    check_range("b", b, 0.0, 1.0)?;
    let mut e = Vec::with_capacity(d + 1);
    e.push(1.0);
    for k in 1..d {
        e.push(iso_vidal_roof(k, b, d)?);
    }
    e.push(0.0);
    let diffs: Vec<f64> = e.windows(2).map(|w| (w[0] - w[1]).max(0.0)).collect();
    SchmidtVector::normalized(diffs)
}

/// `E(λ^β)`, a lower bound on the minimum of `spec` over the isotropic fiber.
///
/// It bounds the roof as well wherever `b ↦ E(λ^β(b))` is convex, as for the
/// Vidal monotones. It does not bound the roof in general: for Rényi orders
/// below 1/2 at `d = 2` explicit decompositions fall below it.
pub fn iso_lower_bound_roof(spec: &MonotoneSpec, b: f64, d: usize) -> Result<f64> {
    spec.evaluate(&iso_lambda_beta(b, d)?)
}

/// `t = 1 − (1/d)(√(1−b) − √(b(d−1)))²` for `(t, (1−t)/(d−1), …)`.
pub fn tgen1(b: f64, d: usize) -> Result<f64> {
    check_fiber_range(b, d)?;
    let df = d as f64;
    let s = (1.0 - b).max(0.0).sqrt() - (b * (df - 1.0)).sqrt();
    Ok((1.0 - s * s / df).clamp(0.0, 1.0))
}

/// `t = (√(d b k) + √(k + 1 − d b))² / (k (k+1)²)` with `k = ⌊d b⌋`, for
/// `(t, …, t, 1 − k t, 0, …)`.
///
/// When `d b` is within [`FLOOR_SNAP`] of an integer, `k` is that integer.
pub fn tgen2(b: f64, d: usize) -> Result<(f64, usize)> {
    check_fiber_range(b, d)?;
    let db = d as f64 * b;
    let near = db.round();
    let k = if (db - near).abs() < FLOOR_SNAP { near } else { db.floor() };
    let k = k.max(1.0);
    let db = db.clamp(k, k + 1.0);
    let s = (db * k).sqrt() + (k + 1.0 - db).max(0.0).sqrt();
    let t = (s * s / (k * (k + 1.0) * (k + 1.0))).clamp(0.0, 1.0 / k);
    Ok((t, k as usize))
}

/// Shape of `y ↦ f′(1/(4y²))` on `y ∈ (1/2, 50]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BerryRegime {
    /// Minimizers have the shape `(t, (1−t)/(d−1), …)`.
    Concave,
    /// Minimizers have the shape `(t, …, t, 1 − kt, 0, …)`.
    Convex,
}

const REGIME_POINTS: usize = 512;
const REGIME_EPS: f64 = 1e-4;
const REGIME_TOL: f64 = 1e-9;

/// Classifies `f` by divided second differences of `h(y) = f′(1/(4y²))`.
///
/// The argument `x = 1/(4y²)` is sampled log-uniformly on `[1e-4, 0.99]`,
/// so `y` covers `(1/2, 1/(2√ε)]`.
pub fn classify_berry(f: &ScalarFn) -> Result<BerryRegime> {
    if !f.has_derivative() {
        return Err(Error::Registration(format!(
            "{}: derivative handle required",
            f.name()
        )));
    }
    let (lo, hi) = (REGIME_EPS.ln(), 0.99f64.ln());
    let mut pts: Vec<(f64, f64)> = (0..REGIME_POINTS)
        .map(|i| {
            let x = (lo + (hi - lo) * i as f64 / (REGIME_POINTS - 1) as f64).exp();
            let y = 1.0 / (2.0 * x.sqrt());
            Ok((y, f.derivative(x)?))
        })
        .collect::<Result<_>>()?;
    pts.sort_by(|p, q| p.0.total_cmp(&q.0));
    let (mut pos, mut neg) = (0usize, 0usize);
    for w in pts.windows(3) {
        let s1 = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
        let s2 = (w[2].1 - w[1].1) / (w[2].0 - w[1].0);
        let dd = 2.0 * (s2 - s1) / (w[2].0 - w[0].0);
        if !dd.is_finite() {
            return Err(Error::IndeterminateRegime(format!(
                "{}: non-finite derivative samples",
                f.name()
            )));
        }
        if dd > REGIME_TOL {
            pos += 1;
        } else if dd < -REGIME_TOL {
            neg += 1;
        }
    }
    match (pos, neg) {
        (p, 0) if p > 0 => Ok(BerryRegime::Convex),
        (0, n) if n > 0 => Ok(BerryRegime::Concave),
        _ => Err(Error::IndeterminateRegime(format!(
            "{}: f'(1/(4y^2)) is neither strictly convex nor strictly concave \
             ({pos} positive, {neg} negative second differences)",
            f.name()
        ))),
    }
}

/// `inf { Σ f(λ_i) : Σ √λ_i = √(d b) }` for `b ∈ [1/d, 1]`, with its minimizer.
pub fn iso_entropy_minimum(f: &ScalarFn, b: f64, d: usize) -> Result<(f64, MinimizerProfile)> {
    check_fiber_range(b, d)?;
    let regime = classify_berry(f)?;
    berry_minimum(f, regime, b, d)
}

fn berry_minimum(
    f: &ScalarFn,
    regime: BerryRegime,
    b: f64,
    d: usize,
) -> Result<(f64, MinimizerProfile)> {
    let profile = berry_profile(regime, b, d)?;
    let value = profile.schmidt.as_slice().iter().map(|&x| f.eval(x)).sum();
    Ok((value, profile))
}

fn berry_profile(regime: BerryRegime, b: f64, d: usize) -> Result<MinimizerProfile> {
    match regime {
        BerryRegime::Concave => {
            MinimizerProfile::isotropic(ProfileKind::IsoTopHeavy { t: tgen1(b, d)? }, d)
        }
        BerryRegime::Convex => {
            let (t, k) = tgen2(b, d)?;
            MinimizerProfile::isotropic(ProfileKind::IsoTruncated { t, k }, d)
        }
    }
}

/// Convex roof of the 2-concurrence: `(d b − 1)/(d − 1)` above `b = 1/d`.
pub fn iso_c2_roof(b: f64, d: usize) -> Result<f64> {
    check_dim(d)?;
    check_range("b", b, 0.0, 1.0)?;
    let df = d as f64;
    Ok(((df * b - 1.0) / (df - 1.0)).max(0.0))
}

/// Convex roof of the G-concurrence: `d b − d + 1` above `b = 1 − 1/d`.
pub fn iso_cd_roof(b: f64, d: usize) -> Result<f64> {
    check_dim(d)?;
    check_range("b", b, 0.0, 1.0)?;
    let df = d as f64;
    Ok((df * b - df + 1.0).max(0.0))
}

/// `√d/(d−1) · √((1−t)(d(1+t)−2))` with `t` from [`tgen1`]; zero below `1/d`.
pub fn iso_c2_pre_envelope(b: f64, d: usize) -> Result<f64> {
    check_dim(d)?;
    check_range("b", b, 0.0, 1.0)?;
    let df = d as f64;
    if b <= 1.0 / df {
        return Ok(0.0);
    }
    let t = tgen1(b, d)?;
    Ok(df.sqrt() / (df - 1.0) * ((1.0 - t) * (df * (1.0 + t) - 2.0)).max(0.0).sqrt())
}

/// `d (t^{d−1} − (d−1) t^d)^{1/d}` with
/// `t = (√((d−1)b) + √(1−b))²/(d(d−1))`; zero below `1 − 1/d`.
pub fn iso_cd_pre_envelope(b: f64, d: usize) -> Result<f64> {
    check_dim(d)?;
    check_range("b", b, 0.0, 1.0)?;
    let df = d as f64;
    if b <= 1.0 - 1.0 / df {
        return Ok(0.0);
    }
    let s = ((df - 1.0) * b).sqrt() + (1.0 - b).sqrt();
    let t = s * s / (df * (df - 1.0));
    let inner = (t.powi(d as i32 - 1) - (df - 1.0) * t.powi(d as i32)).max(0.0);
    Ok(df * inner.powf(1.0 / df))
}

/// How a monotone is minimized on the isotropic fiber.
enum IsoPlan {
    Vidal(usize),
    C2,
    Cd,
    Berry {
        f: ScalarFn,
        regime: BerryRegime,
        post: Post,
    },
}

#[derive(Clone, Copy)]
enum Post {
    Identity,
    /// `log₂(x)/(1−α)`.
    RenyiLog(f64),
    /// `log₂(−x)/(1−α)`.
    RenyiLogNeg(f64),
}

impl Post {
    fn apply(self, x: f64) -> f64 {
        match self {
            Post::Identity => x,
            Post::RenyiLog(a) => (x.log2() / (1.0 - a)).max(0.0),
            Post::RenyiLogNeg(a) => ((-x).log2() / (1.0 - a)).max(0.0),
        }
    }
}

fn plan(spec: &MonotoneSpec, d: usize) -> Result<IsoPlan> {
    spec.validate()?;
    let berry = |f: ScalarFn, post: Post| -> Result<IsoPlan> {
        let regime = classify_berry(&f)?;
        Ok(IsoPlan::Berry { f, regime, post })
    };
    match spec {
        MonotoneSpec::Vidal(k) => Ok(IsoPlan::Vidal(*k)),
        MonotoneSpec::Concurrence(2) => Ok(IsoPlan::C2),
        MonotoneSpec::Concurrence(k) if *k == d => Ok(IsoPlan::Cd),
        MonotoneSpec::Concurrence(k) => Err(Error::UnsupportedQuery(format!(
            "no closed form for the isotropic roof of the concurrence C_{k} at d = {d}"
        ))),
        MonotoneSpec::EntropyOfEntanglement => berry(ScalarFn::shannon(), Post::Identity),
        MonotoneSpec::Renyi(a) if *a < 1.0 => berry(ScalarFn::power(*a)?, Post::RenyiLog(*a)),
        MonotoneSpec::Renyi(a) => berry(ScalarFn::neg_power(*a)?, Post::RenyiLogNeg(*a)),
        MonotoneSpec::GeneralizedEntropy(f) => {
            check_concave(f)?;
            berry(f.clone(), Post::Identity)
        }
    }
}

/// Roofs of `Σ f(λ_i)` are only defined for concave `f`, which makes the
/// sum Schur concave and minimal on product states.
fn check_concave(f: &ScalarFn) -> Result<()> {
    let xs = uniform_grid(0.0, 1.0, 201);
    let ys: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect();
    let scale = ys.iter().fold(1.0f64, |m, y| m.max(y.abs()));
    if ys.windows(3).any(|w| w[0] - 2.0 * w[1] + w[2] > 1e-12 * scale) {
        return Err(Error::UnsupportedQuery(format!(
            "{}: roofs need a concave f so that Σ f(λ_i) is an entanglement monotone",
            f.name()
        )));
    }
    Ok(())
}

fn plan_pre_envelope(plan: &IsoPlan, spec: &MonotoneSpec, b: f64, d: usize) -> Result<f64> {
    match plan {
        IsoPlan::Vidal(k) => iso_vidal_roof(*k, b, d),
        IsoPlan::C2 => iso_c2_pre_envelope(b, d),
        IsoPlan::Cd => iso_cd_pre_envelope(b, d),
        IsoPlan::Berry { f, regime, post } => {
            if b <= 1.0 / d as f64 {
                return spec.evaluate(&SchmidtVector::product(d));
            }
            let (v, _) = berry_minimum(f, *regime, b, d)?;
            Ok(post.apply(v))
        }
    }
}

/// Minimum of `spec` over the isotropic fiber at `b`, before the envelope.
pub fn iso_pre_envelope(spec: &MonotoneSpec, b: f64, d: usize) -> Result<f64> {
    check_dim(d)?;
    check_range("b", b, 0.0, 1.0)?;
    let p = plan(spec, d)?;
    plan_pre_envelope(&p, spec, b, d)
}

/// Envelope in `b` of [`iso_pre_envelope`] on a uniform grid of `n` points.
pub fn iso_envelope(spec: &MonotoneSpec, d: usize, n: usize) -> Result<EnvelopeFunction> {
    check_dim(d)?;
    let p = plan(spec, d)?;
    envelope_of(|b| plan_pre_envelope(&p, spec, b, d), n)
}

/// Fiber minimizer of `spec` at `b ∈ [1/d, 1]`.
pub fn iso_minimizer(spec: &MonotoneSpec, b: f64, d: usize) -> Result<MinimizerProfile> {
    check_fiber_range(b, d)?;
    match plan(spec, d)? {
        IsoPlan::Vidal(k) => iso_vidal_minimizer(k, b, d),
        IsoPlan::C2 => berry_profile(BerryRegime::Concave, b, d),
        IsoPlan::Cd => berry_profile(BerryRegime::Convex, b, d),
        IsoPlan::Berry { regime, .. } => berry_profile(regime, b, d),
    }
}

/// Convex roof of `spec` on `ρ_iso(b)`.
///
/// Vidal monotones and the 2- and G-concurrences use their closed forms.
/// Entropies go through the envelope on [`DEFAULT_GRID`] points plus `1/d`
/// and `b`.
pub fn roof_isotropic(spec: &MonotoneSpec, b: f64, d: usize) -> Result<f64> {
    check_dim(d)?;
    check_range("b", b, 0.0, 1.0)?;
    match plan(spec, d)? {
        IsoPlan::Vidal(k) => iso_vidal_roof(k, b, d),
        IsoPlan::C2 => iso_c2_roof(b, d),
        IsoPlan::Cd => iso_cd_roof(b, d),
        p @ IsoPlan::Berry { .. } => {
            let knots = [1.0 / d as f64, b];
            let env = envelope_with_knots(|x| plan_pre_envelope(&p, spec, x, d), DEFAULT_GRID, &knots)?;
            Ok(env.eval(b))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monotones::vidal_ek;

    #[test]
    fn vidal_examples() {
        for d in 2..=6 {
            let v = iso_vidal_roof(1, 1.0, d).unwrap();
            assert!((v - (d as f64 - 1.0) / d as f64).abs() < 1e-15);
        }
        assert_eq!(iso_vidal_roof(2, 0.4, 5).unwrap(), 0.0);
        let v = iso_vidal_roof(3, 0.9, 5).unwrap();
        let want = (0.3f64.sqrt() - 1.8f64.sqrt()).powi(2) / 5.0;
        assert!((v - want).abs() < 1e-15);
        assert!((v - 0.12606).abs() < 1e-5);
        assert_eq!(iso_vidal_roof(5, 0.9, 5).unwrap(), 0.0);
    }

    #[test]
    fn vidal_minimizer_is_feasible_and_optimal() {
        for d in 3..=6 {
            for k in 1..d {
                for i in 0..=10 {
                    let b = (1.0 / d as f64 + (1.0 - 1.0 / d as f64) * i as f64 / 10.0).min(1.0);
                    let p = iso_vidal_minimizer(k, b, d).unwrap();
                    p.check_isotropic(b).unwrap();
                    let e = vidal_ek(&p.schmidt, k).unwrap();
                    assert!((e - iso_vidal_roof(k, b, d).unwrap()).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn lambda_beta() {
        let u = iso_lambda_beta(1.0, 4).unwrap();
        assert!(u.as_slice().iter().all(|x| (x - 0.25).abs() < 1e-15));
        let p = iso_lambda_beta(1.0 / 3.0, 3).unwrap();
        assert_eq!(p.as_slice(), &[1.0, 0.0, 0.0]);
        for d in 2..=6 {
            for i in 0..=20 {
                let b = i as f64 / 20.0;
                let l = iso_lambda_beta(b, d).unwrap();
                for k in 1..d {
                    let e = vidal_ek(&l, k).unwrap();
                    assert!((e - iso_vidal_roof(k, b, d).unwrap()).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn t_values_satisfy_constraint() {
        for d in 2..=6 {
            for i in 0..=50 {
                let b = (1.0 / d as f64 + (1.0 - 1.0 / d as f64) * i as f64 / 50.0).min(1.0);
                let t1 = tgen1(b, d).unwrap();
                let p1 = MinimizerProfile::isotropic(ProfileKind::IsoTopHeavy { t: t1 }, d).unwrap();
                p1.check_isotropic(b).unwrap();
                let (t2, k) = tgen2(b, d).unwrap();
                let p2 =
                    MinimizerProfile::isotropic(ProfileKind::IsoTruncated { t: t2, k }, d).unwrap();
                p2.check_isotropic(b).unwrap();
            }
        }
        assert!((tgen1(1.0, 5).unwrap() - 0.2).abs() < 1e-15);
        let (t, k) = tgen2(1.0, 5).unwrap();
        assert!((t - 0.2).abs() < 1e-15);
        assert_eq!(k, 5);
        let (_, k) = tgen2(0.4, 5).unwrap();
        assert_eq!(k, 2);
    }

    #[test]
    fn berry_classification() {
        assert_eq!(classify_berry(&ScalarFn::shannon()).unwrap(), BerryRegime::Concave);
        assert_eq!(
            classify_berry(&ScalarFn::power(2.0).unwrap()).unwrap(),
            BerryRegime::Convex
        );
        assert_eq!(
            classify_berry(&ScalarFn::power(0.3).unwrap()).unwrap(),
            BerryRegime::Convex
        );
        assert_eq!(
            classify_berry(&ScalarFn::neg_power(2.0).unwrap()).unwrap(),
            BerryRegime::Concave
        );
        assert!(matches!(
            classify_berry(&ScalarFn::power(0.5).unwrap()),
            Err(Error::IndeterminateRegime(_))
        ));
        let no_df = ScalarFn::new("x^2", |x: f64| x * x).unwrap();
        assert!(matches!(classify_berry(&no_df), Err(Error::Registration(_))));
    }

    #[test]
    fn berry_examples_at_full_entanglement() {
        let (v, p) = iso_entropy_minimum(&ScalarFn::power(2.0).unwrap(), 1.0, 5).unwrap();
        assert!((v - 0.2).abs() < 1e-12);
        assert!(p.schmidt.as_slice().iter().all(|x| (x - 0.2).abs() < 1e-12));
        let xlogx = ScalarFn::new("x log2 x", |x: f64| if x > 0.0 { x * x.log2() } else { 0.0 })
            .unwrap()
            .with_derivative(|x: f64| x.log2() + std::f64::consts::LOG2_E);
        let (_, p) = iso_entropy_minimum(&xlogx, 1.0, 5).unwrap();
        assert!(matches!(p.kind, ProfileKind::IsoTruncated { k: 5, .. }));
        assert!(p.schmidt.as_slice().iter().all(|x| (x - 0.2).abs() < 1e-12));
        assert!(iso_entropy_minimum(&ScalarFn::shannon(), 0.1, 5).is_err());
    }

    #[test]
    fn concurrence_roofs() {
        assert!((iso_c2_roof(1.0, 4).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(iso_cd_roof(1.0 - 1.0 / 4.0, 4).unwrap(), 0.0);
        assert!((iso_c2_pre_envelope(1.0, 4).unwrap() - 1.0).abs() < 1e-12);
        assert!((iso_cd_pre_envelope(1.0, 4).unwrap() - 1.0).abs() < 1e-12);
        // the envelope of a concave arc from 0 to 1 is the chord
        for d in 3..=5 {
            let e = iso_envelope(&MonotoneSpec::Concurrence(2), d, 2001).unwrap();
            for i in 0..=10 {
                let b = i as f64 / 10.0;
                assert!((e.eval(b) - iso_c2_roof(b, d).unwrap()).abs() < 1e-3);
            }
        }
        assert!(matches!(
            roof_isotropic(&MonotoneSpec::Concurrence(3), 0.9, 5),
            Err(Error::UnsupportedQuery(_))
        ));
    }

    #[test]
    fn entropy_roof_is_envelope_of_berry_minimum() {
        let d = 3;
        let spec = MonotoneSpec::EntropyOfEntanglement;
        assert!((roof_isotropic(&spec, 1.0, d).unwrap() - 3f64.log2()).abs() < 1e-12);
        assert_eq!(roof_isotropic(&spec, 0.2, d).unwrap(), 0.0);
        for i in 0..=20 {
            let b = i as f64 / 20.0;
            let r = roof_isotropic(&spec, b, d).unwrap();
            let p = iso_pre_envelope(&spec, b, d).unwrap();
            let lb = iso_lower_bound_roof(&spec, b, d).unwrap();
            assert!(r <= p + 1e-12);
            assert!(lb <= p + 1e-12);
        }
    }

    #[test]
    fn generalized_roofs_need_concave_f() {
        let spec = MonotoneSpec::GeneralizedEntropy(ScalarFn::power(2.0).unwrap());
        assert!(matches!(
            roof_isotropic(&spec, 0.8, 3),
            Err(Error::UnsupportedQuery(_))
        ));
    }
}
