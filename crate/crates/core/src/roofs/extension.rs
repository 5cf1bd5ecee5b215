//! Roofs on two-parameter families through orbits of fiber minimizers.
//!
//! If `ψ` minimizes `E` on the fiber of a `G`-invariant state `ρ` and the
//! 1-D roof equals the fiber minimum there, then `Ê(σ) = E(ψ)` for every `σ`
//! in the convex hull of the `G`-orbit of `ψ`. Parts of the OO-invariant and
//! phase-permutation families lie in such hulls; there the roof depends only
//! on `Tr[ρ W₋]` or `Tr[ρ Φ_d]`.

use crate::error::{domain, Error, Result};
use crate::families::{Family, FamilyPoint};
use crate::monotones::MonotoneSpec;
use crate::qcore::operators::{expectation_amps, OperatorKind};
use crate::qcore::{PureState, SchmidtVector, Unitary};
use crate::roofs::isotropic::{iso_pre_envelope, roof_isotropic};
use crate::roofs::werner::{roof_werner, werner_minimizer_state, werner_pre_envelope};
use crate::roofs::{MinimizerProfile, ProfileKind, PROFILE_TOL};
use crate::{CMatrix, C64};

/// Slack on region boundaries.
pub const REGION_TOL: f64 = 1e-12;
/// Gap between pre-envelope and roof above which the roof has a linear section.
pub const ENVELOPE_GAP_TOL: f64 = 1e-9;

/// Where a family point sits relative to the known orbit hulls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// Convex hull of the Werner-minimizer orbit; roof depends on `Tr[ρ W₋]`.
    WernerOrbit,
    /// Convex hull of the isotropic-minimizer orbit; roof depends on `Tr[ρ Φ_d]`.
    IsoOrbit,
    /// The separable rectangle of the OO-invariant states; every roof is its
    /// product-state value.
    Separable,
    /// No roof formula is known.
    Unknown,
}

/// Classifies a family point.
pub fn region_membership(point: &FamilyPoint) -> Region {
    let d = point.d() as f64;
    match point.family() {
        Family::Werner { .. } => Region::WernerOrbit,
        Family::Isotropic { .. } => Region::IsoOrbit,
        Family::PPWerner { a, .. } => {
            if a >= 0.5 - REGION_TOL {
                Region::WernerOrbit
            } else {
                Region::Unknown
            }
        }
        Family::PPIsotropic { b, .. } => {
            if b >= 1.0 / d - REGION_TOL {
                Region::IsoOrbit
            } else {
                Region::Unknown
            }
        }
        Family::OO { a, b } => {
            // The two regions meet only at (1/2, 1/d), where both roofs vanish.
            if b >= 1.0 / d - REGION_TOL && a <= d * (1.0 - b) / (2.0 * (d - 1.0)) + REGION_TOL {
                Region::IsoOrbit
            } else if a >= 0.5 - REGION_TOL && b <= 2.0 * (1.0 - a) / d + REGION_TOL {
                Region::WernerOrbit
            } else if a <= 0.5 && b <= 1.0 / d {
                Region::Separable
            } else {
                Region::Unknown
            }
        }
    }
}

/// Human-readable name of the open region containing `point`.
pub fn unknown_region_name(point: &FamilyPoint) -> &'static str {
    match point.family() {
        Family::OO { .. } => "region C of the OO-invariant states",
        Family::PPWerner { .. } => "region B of the phase-permutation Werner states",
        Family::PPIsotropic { .. } => "region A of the phase-permutation isotropic states",
        _ => "an uncovered region",
    }
}

fn unsupported_region(point: &FamilyPoint) -> Error {
    Error::UnsupportedRegion(format!(
        "{point} lies in {}, where convex roofs are not known",
        unknown_region_name(point)
    ))
}

/// A roof value together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedRoof {
    pub value: f64,
    pub region: Region,
    /// The 1-D roof is strictly below the fiber minimum at this coordinate,
    /// so the value relies on continuity of the monotone.
    pub continuity_extension: bool,
}

/// Convex roof of `spec` at any point of a covered region.
pub fn extended_roof(spec: &MonotoneSpec, point: &FamilyPoint) -> Result<ExtendedRoof> {
    let d = point.d();
    let region = region_membership(point);
    let single = matches!(
        point.family(),
        Family::Werner { .. } | Family::Isotropic { .. }
    );
    let (value, pre) = match region {
        Region::WernerOrbit => {
            let a = point.werner_coordinate();
            let v = roof_werner(spec, a, d)?;
            (v, if single { v } else { werner_pre_envelope(spec, a, d)? })
        }
        Region::IsoOrbit => {
            let b = point.isotropic_coordinate();
            let v = roof_isotropic(spec, b, d)?;
            (v, if single { v } else { iso_pre_envelope(spec, b, d)? })
        }
        Region::Separable => {
            let v = spec.evaluate(&SchmidtVector::product(d))?;
            (v, v)
        }
        Region::Unknown => return Err(unsupported_region(point)),
    };
    let continuity_extension = pre - value > ENVELOPE_GAP_TOL;
    if continuity_extension && !spec.is_continuous() {
        return Err(Error::UnsupportedQuery(format!(
            "the roof of {} has a linear section at {point}; extending it off the \
             symmetric line requires a continuous monotone",
            spec.label()
        )));
    }
    Ok(ExtendedRoof {
        value,
        region,
        continuity_extension,
    })
}

/// `(1/√2)[[1, 1], [i, −i]]` on the span of basis vectors `j, k`, identity elsewhere.
pub fn pair_unitary(d: usize, j: usize, k: usize) -> Unitary {
    let mut m = CMatrix::identity(d, d);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    m[(j, j)] = C64::new(r, 0.0);
    m[(j, k)] = C64::new(r, 0.0);
    m[(k, j)] = C64::new(0.0, r);
    m[(k, k)] = C64::new(0.0, -r);
    Unitary::new_unchecked(m)
}

/// The discrete Fourier transform `F_{jk} = ω^{jk}/√d`.
pub fn fourier_unitary(d: usize) -> Unitary {
    let s = 1.0 / (d as f64).sqrt();
    let m = CMatrix::from_fn(d, d, |j, k| {
        C64::from_polar(s, std::f64::consts::TAU * (j * k) as f64 / d as f64)
    });
    Unitary::new_unchecked(m)
}

/// How a computed expectation is compared with its target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CheckKind {
    Equal,
    /// The computed value must be at least the target.
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationCheck {
    pub observable: OperatorKind,
    pub kind: CheckKind,
    pub target: f64,
    pub computed: f64,
}

impl ExpectationCheck {
    /// Amount by which the check fails (zero when satisfied).
    pub fn violation(&self) -> f64 {
        match self.kind {
            CheckKind::Equal => (self.computed - self.target).abs(),
            CheckKind::AtLeast => (self.target - self.computed).max(0.0),
        }
    }
}

/// One orbit point `(U ⊗ U)ψ` or `(U ⊗ Ū)ψ` with its verified expectations.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateVertex {
    pub label: String,
    pub unitary: Unitary,
    pub conjugate_second: bool,
    pub state: PureState,
    pub checks: Vec<ExpectationCheck>,
}

/// Explicit orbit points whose twirls span the covered segment through a point.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitCertificate {
    pub region: Region,
    pub vertices: Vec<CertificateVertex>,
    /// Interval of the free coordinate spanned by the vertices.
    pub covered: (f64, f64),
    /// Free coordinate of the queried point.
    pub coordinate: f64,
}

impl OrbitCertificate {
    /// Largest violation over all vertex checks.
    pub fn max_violation(&self) -> f64 {
        self.vertices
            .iter()
            .flat_map(|v| v.checks.iter().map(ExpectationCheck::violation))
            .fold(0.0, f64::max)
    }

    /// All checks hold within `tol` and the point lies in the covered interval.
    pub fn verify(&self, tol: f64) -> bool {
        self.max_violation() <= tol
            && self.coordinate >= self.covered.0 - tol
            && self.coordinate <= self.covered.1 + tol
    }
}

fn vertex(
    label: impl Into<String>,
    psi: &PureState,
    u: Unitary,
    conjugate_second: bool,
    targets: &[(OperatorKind, CheckKind, f64)],
) -> Result<CertificateVertex> {
    let second = if conjugate_second { u.conjugate() } else { u.clone() };
    let state = psi.apply_local(u.matrix(), second.matrix())?;
    let d = psi.d();
    let checks = targets
        .iter()
        .map(|&(observable, kind, target)| ExpectationCheck {
            observable,
            kind,
            target,
            computed: expectation_amps(observable, d, state.amplitudes()),
        })
        .collect();
    Ok(CertificateVertex {
        label: label.into(),
        unitary: u,
        conjugate_second,
        state,
        checks,
    })
}

/// Builds and evaluates the orbit points that place `point` in the convex
/// hull of the orbit of the minimizer described by `profile`.
pub fn orbit_membership_certificate(
    point: &FamilyPoint,
    profile: &MinimizerProfile,
) -> Result<OrbitCertificate> {
    let region = region_membership(point);
    match region {
        Region::WernerOrbit => werner_certificate(point, profile),
        Region::IsoOrbit => iso_certificate(point, profile),
        _ => Err(unsupported_region(point)),
    }
}

fn werner_certificate(point: &FamilyPoint, profile: &MinimizerProfile) -> Result<OrbitCertificate> {
    use CheckKind::Equal;
    use OperatorKind::{PhiD, WMinus, Q};
    let d = point.d();
    let df = d as f64;
    let a = point.werner_coordinate();
    match profile.kind {
        ProfileKind::WernerPsi { a: pa } if (pa - a).abs() <= PROFILE_TOL => {}
        _ => return domain(format!("profile does not minimize the Werner fiber at a = {a}")),
    }
    let psi = werner_minimizer_state(a, d)?;
    let ident = vertex(
        "identity",
        &psi,
        Unitary::identity(d),
        false,
        &[(WMinus, Equal, a), (Q, Equal, 0.0), (PhiD, Equal, 0.0)],
    )?;
    let mixed = vertex(
        "U_{1,2}",
        &psi,
        pair_unitary(d, 0, 1),
        false,
        &[
            (WMinus, Equal, a),
            (Q, Equal, 1.0 - a),
            (PhiD, Equal, 2.0 * (1.0 - a) / df),
        ],
    )?;
    let (covered, coordinate) = match point.family() {
        Family::PPWerner { b, .. } => ((0.0, 1.0 - a), b),
        Family::OO { b, .. } => ((0.0, 2.0 * (1.0 - a) / df), b),
        _ => {
            let b = point.isotropic_coordinate();
            ((b, b), b)
        }
    };
    Ok(OrbitCertificate {
        region: Region::WernerOrbit,
        vertices: vec![ident, mixed],
        covered,
        coordinate,
    })
}

fn iso_certificate(point: &FamilyPoint, profile: &MinimizerProfile) -> Result<OrbitCertificate> {
    use CheckKind::{AtLeast, Equal};
    use OperatorKind::{PhiD, WMinus, Q};
    let d = point.d();
    let df = d as f64;
    let b = point.isotropic_coordinate();
    if matches!(profile.kind, ProfileKind::WernerPsi { .. }) || profile.schmidt.d() != d {
        return domain("profile is not an isotropic minimizer in this dimension");
    }
    profile.check_isotropic(b)?;
    let psi = PureState::from_schmidt(&profile.schmidt);
    let ident = vertex(
        "identity",
        &psi,
        Unitary::identity(d),
        true,
        &[(Q, Equal, 1.0), (PhiD, Equal, b), (WMinus, Equal, 0.0)],
    )?;
    let mut vertices = vec![ident];
    let (covered, coordinate) = match point.family() {
        Family::OO { a, .. } => {
            let roots: Vec<f64> = profile.schmidt.as_slice().iter().map(|x| x.sqrt()).collect();
            let pairs = d / 2;
            let predicted: f64 = (0..pairs)
                .map(|i| (roots[i] - roots[d - 1 - i]).powi(2) / 2.0)
                .sum();
            let bound = df * (1.0 - b) / (2.0 * (df - 1.0));
            let u = (0..pairs)
                .map(|i| pair_unitary(d, i, d - 1 - i))
                .fold(Unitary::identity(d), |acc, p| acc.compose(&p));
            let v = vertex(
                "prod U_{i,d+1-i}",
                &psi,
                u,
                true,
                &[
                    (PhiD, Equal, b),
                    (WMinus, Equal, predicted),
                    (WMinus, AtLeast, bound),
                ],
            )?;
            vertices.push(v);
            ((0.0, predicted), a)
        }
        _ => {
            let v = vertex(
                "Fourier",
                &psi,
                fourier_unitary(d),
                true,
                &[(Q, Equal, b), (PhiD, Equal, b)],
            )?;
            vertices.push(v);
            let a = match point.family() {
                Family::PPIsotropic { a, .. } => a,
                _ => 1.0 - b,
            };
            ((0.0, 1.0 - b), a)
        }
    };
    Ok(OrbitCertificate {
        region: Region::IsoOrbit,
        vertices,
        covered,
        coordinate,
    })
}
