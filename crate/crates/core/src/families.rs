//! Symmetric state families, their twirls and separability facts.

use std::fmt;

use crate::error::{check_range, domain, structural, Error, Result};
use crate::exec::{map_indexed, stream, Execution, Rng};
use crate::monotones::binomial;
use crate::qcore::haar::{haar_orthogonal, haar_unitary_rng, phase_permutation};
use crate::qcore::{build_operator, DensityMatrix, OperatorKind, Unitary};
use crate::CMatrix;

/// Slack allowed on `a + b ≤ 1`.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// Subgroups of local unitaries whose invariant states form the families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryGroup {
    /// `U ⊗ U`, `U ∈ U(d)`.
    Werner,
    /// `U ⊗ Ū`, `U ∈ U(d)`.
    Isotropic,
    /// `O ⊗ O`, `O ∈ O(d)`.
    OO,
    /// `U ⊗ U`, `U` a phase-permutation matrix.
    PPWerner,
    /// `U ⊗ Ū`, `U` a phase-permutation matrix.
    PPIsotropic,
}

impl SymmetryGroup {
    pub const ALL: [SymmetryGroup; 5] = [
        SymmetryGroup::Werner,
        SymmetryGroup::Isotropic,
        SymmetryGroup::OO,
        SymmetryGroup::PPWerner,
        SymmetryGroup::PPIsotropic,
    ];

    /// Draws a Haar-random `U`; the group element is `U ⊗ U` or `U ⊗ Ū`.
    pub fn sample(&self, d: usize, rng: &mut Rng) -> Unitary {
        match self {
            Self::Werner | Self::Isotropic => haar_unitary_rng(d, rng),
            Self::OO => haar_orthogonal(d, rng),
            Self::PPWerner | Self::PPIsotropic => phase_permutation(d, rng),
        }
    }

    /// Whether the second tensor factor is the complex conjugate.
    pub fn conjugate_second(&self) -> bool {
        matches!(self, Self::Isotropic | Self::PPIsotropic)
    }

    /// The local unitary `U ⊗ U` or `U ⊗ Ū`.
    pub fn local(&self, u: &Unitary) -> CMatrix {
        let m = u.matrix();
        if self.conjugate_second() {
            m.kronecker(&m.conjugate())
        } else {
            m.kronecker(m)
        }
    }
}

/// Coordinates within one family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `a = Tr[ρ W₋]`.
    Werner { a: f64 },
    /// `b = Tr[ρ Φ_d]`.
    Isotropic { b: f64 },
    /// `a = Tr[ρ W₋]`, `b = Tr[ρ Φ_d]`.
    OO { a: f64, b: f64 },
    /// `a = Tr[ρ W₋]`, `b = Tr[ρ (W₊ − Q)]`.
    PPWerner { a: f64, b: f64 },
    /// `a = Tr[ρ (Q − Φ_d)]`, `b = Tr[ρ Φ_d]`.
    PPIsotropic { a: f64, b: f64 },
}

/// A point of a symmetric family on `C^d ⊗ C^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyPoint {
    family: Family,
    d: usize,
}

impl FamilyPoint {
    pub fn new(family: Family, d: usize) -> Result<Self> {
        if d < 2 {
            return domain(format!("families need d >= 2, got {d}"));
        }
        match family {
            Family::Werner { a } => check_range("a", a, 0.0, 1.0)?,
            Family::Isotropic { b } => check_range("b", b, 0.0, 1.0)?,
            Family::OO { a, b } | Family::PPWerner { a, b } | Family::PPIsotropic { a, b } => {
                check_range("a", a, 0.0, 1.0)?;
                check_range("b", b, 0.0, 1.0)?;
                if a + b > 1.0 + SIMPLEX_TOL {
                    return domain(format!("a + b = {} exceeds 1", a + b));
                }
            }
        }
        Ok(Self { family, d })
    }

    pub fn werner(a: f64, d: usize) -> Result<Self> {
        Self::new(Family::Werner { a }, d)
    }

    pub fn isotropic(b: f64, d: usize) -> Result<Self> {
        Self::new(Family::Isotropic { b }, d)
    }

    pub fn oo(a: f64, b: f64, d: usize) -> Result<Self> {
        Self::new(Family::OO { a, b }, d)
    }

    pub fn pp_werner(a: f64, b: f64, d: usize) -> Result<Self> {
        Self::new(Family::PPWerner { a, b }, d)
    }

    pub fn pp_isotropic(a: f64, b: f64, d: usize) -> Result<Self> {
        Self::new(Family::PPIsotropic { a, b }, d)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn group(&self) -> SymmetryGroup {
        match self.family {
            Family::Werner { .. } => SymmetryGroup::Werner,
            Family::Isotropic { .. } => SymmetryGroup::Isotropic,
            Family::OO { .. } => SymmetryGroup::OO,
            Family::PPWerner { .. } => SymmetryGroup::PPWerner,
            Family::PPIsotropic { .. } => SymmetryGroup::PPIsotropic,
        }
    }

    /// `Tr[ρ W₋]`, defined for every family.
    pub fn werner_coordinate(&self) -> f64 {
        let d = self.d as f64;
        match self.family {
            Family::Werner { a } | Family::OO { a, .. } | Family::PPWerner { a, .. } => a,
            Family::Isotropic { b } => (1.0 - b) * d / (2.0 * (d + 1.0)),
            Family::PPIsotropic { a, b } => {
                // W₋ lives inside 1 − Q, which carries weight 1 − a − b.
                (1.0 - a - b) * binomial(self.d, 2) / (d * (d - 1.0))
            }
        }
    }

    /// `Tr[ρ Φ_d]`, defined for every family.
    pub fn isotropic_coordinate(&self) -> f64 {
        let d = self.d as f64;
        match self.family {
            Family::Isotropic { b } | Family::OO { b, .. } | Family::PPIsotropic { b, .. } => b,
            Family::Werner { a } => (1.0 - a) * 2.0 / (d * (d + 1.0)),
            Family::PPWerner { a, b } => (1.0 - a - b) / d,
        }
    }
}

impl fmt::Display for FamilyPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.d;
        match self.family {
            Family::Werner { a } => write!(f, "Werner(a={a}, d={d})"),
            Family::Isotropic { b } => write!(f, "Isotropic(b={b}, d={d})"),
            Family::OO { a, b } => write!(f, "OO(a={a}, b={b}, d={d})"),
            Family::PPWerner { a, b } => write!(f, "PPWerner(a={a}, b={b}, d={d})"),
            Family::PPIsotropic { a, b } => write!(f, "PPIsotropic(a={a}, b={b}, d={d})"),
        }
    }
}

fn op(kind: OperatorKind, d: usize) -> CMatrix {
    build_operator(kind, d).expect("d >= 2 checked by FamilyPoint")
}

/// The density matrix of a family point.
pub fn family_to_density(point: &FamilyPoint) -> Result<DensityMatrix> {
    let d = point.d;
    let n = d * d;
    let id = CMatrix::identity(n, n);
    let c2 = binomial(d, 2);
    let c2p = binomial(d + 1, 2);
    let m = match point.family {
        Family::Werner { a } => {
            op(OperatorKind::WMinus, d).scale(a / c2) + op(OperatorKind::WPlus, d).scale((1.0 - a) / c2p)
        }
        Family::Isotropic { b } => {
            let phi = op(OperatorKind::PhiD, d);
            let rest = &id - &phi;
            phi.scale(b) + rest.scale((1.0 - b) / (n as f64 - 1.0))
        }
        Family::OO { a, b } => {
            let wm = op(OperatorKind::WMinus, d);
            let phi = op(OperatorKind::PhiD, d);
            let rest = &id - &phi - &wm;
            wm.scale(a / c2) + phi.scale(b) + rest.scale((1.0 - a - b) / (c2p - 1.0))
        }
        Family::PPWerner { a, b } => {
            let wm = op(OperatorKind::WMinus, d);
            let q = op(OperatorKind::Q, d);
            let sym_off = op(OperatorKind::WPlus, d) - &q;
            wm.scale(a / c2) + sym_off.scale(b / c2) + q.scale((1.0 - a - b) / d as f64)
        }
        Family::PPIsotropic { a, b } => {
            let phi = op(OperatorKind::PhiD, d);
            let q = op(OperatorKind::Q, d);
            let diag_off = &q - &phi;
            let rest = &id - &q;
            phi.scale(b)
                + diag_off.scale(a / (d as f64 - 1.0))
                + rest.scale((1.0 - a - b) / (d as f64 * (d as f64 - 1.0)))
        }
    };
    DensityMatrix::new(d, m)
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Projects `ρ` onto the family invariant under `group` by reading off the
/// defining expectation values.
pub fn twirl(rho: &DensityMatrix, group: SymmetryGroup) -> Result<FamilyPoint> {
    let d = rho.d();
    if d < 2 {
        return structural("twirls need d >= 2");
    }
    let e = |kind: OperatorKind| rho.expectation_matrix(&op(kind, d));
    let family = match group {
        SymmetryGroup::Werner => Family::Werner {
            a: clamp_unit(e(OperatorKind::WMinus)?),
        },
        SymmetryGroup::Isotropic => Family::Isotropic {
            b: clamp_unit(e(OperatorKind::PhiD)?),
        },
        SymmetryGroup::OO => Family::OO {
            a: clamp_unit(e(OperatorKind::WMinus)?),
            b: clamp_unit(e(OperatorKind::PhiD)?),
        },
        SymmetryGroup::PPWerner => Family::PPWerner {
            a: clamp_unit(e(OperatorKind::WMinus)?),
            b: clamp_unit(e(OperatorKind::WPlus)? - e(OperatorKind::Q)?),
        },
        SymmetryGroup::PPIsotropic => Family::PPIsotropic {
            a: clamp_unit(e(OperatorKind::Q)? - e(OperatorKind::PhiD)?),
            b: clamp_unit(e(OperatorKind::PhiD)?),
        },
    };
    FamilyPoint::new(family, d)
}

/// `family_to_density(twirl(ρ, group))`.
pub fn twirl_density(rho: &DensityMatrix, group: SymmetryGroup) -> Result<DensityMatrix> {
    family_to_density(&twirl(rho, group)?)
}

/// Monte Carlo estimate of the group average `∫ g ρ g† dg`.
///
/// Samples are summed in fixed-size chunks whose partial sums are combined
/// in index order, so the result does not depend on `exec`.
pub fn monte_carlo_twirl(
    rho: &DensityMatrix,
    group: SymmetryGroup,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> CMatrix {
    const CHUNK: usize = 256;
    let d = rho.d();
    let n = d * d;
    let chunks = samples.div_ceil(CHUNK);
    let partials = map_indexed(exec, chunks, |c| {
        let mut rng = stream(seed, c as u64);
        let mut acc = CMatrix::zeros(n, n);
        let count = CHUNK.min(samples - c * CHUNK);
        for _ in 0..count {
            let g = group.local(&group.sample(d, &mut rng));
            acc += &g * rho.matrix() * g.adjoint();
        }
        acc
    });
    let mut total = CMatrix::zeros(n, n);
    for p in partials {
        total += p;
    }
    total.unscale(samples.max(1) as f64)
}

/// Known separability facts; boundaries count as separable.
pub fn is_separable(point: &FamilyPoint) -> Result<bool> {
    let d = point.d as f64;
    match point.family {
        Family::Werner { a } => Ok(a <= 0.5),
        Family::Isotropic { b } => Ok(b <= 1.0 / d),
        Family::OO { a, b } => Ok(a <= 0.5 && b <= 1.0 / d),
        Family::PPWerner { .. } | Family::PPIsotropic { .. } => Err(Error::UnsupportedQuery(
            format!("no closed separability criterion is known for {point}"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::PureState;
    use crate::{CVector, C64};

    #[test]
    fn werner_one_is_singlet() {
        let rho = family_to_density(&FamilyPoint::werner(1.0, 2).unwrap()).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut s = CVector::zeros(4);
        s[1] = C64::new(r, 0.0);
        s[2] = C64::new(-r, 0.0);
        let singlet = DensityMatrix::from_pure(&PureState::new(2, s).unwrap());
        assert!((rho.matrix() - singlet.matrix()).camax() < 1e-12);
    }

    #[test]
    fn isotropic_at_inverse_square_is_maximally_mixed() {
        for d in 2..=5 {
            let b = 1.0 / (d * d) as f64;
            let rho = family_to_density(&FamilyPoint::isotropic(b, d).unwrap()).unwrap();
            let mm = DensityMatrix::maximally_mixed(d);
            assert!((rho.matrix() - mm.matrix()).camax() < 1e-12);
            let p = twirl(&mm, SymmetryGroup::Isotropic).unwrap();
            assert!((p.isotropic_coordinate() - b).abs() < 1e-12);
        }
    }

    #[test]
    fn werner_and_isotropic_lines_inside_oo() {
        for d in 2..=5 {
            let df = d as f64;
            for a in [0.0, 0.3, 0.75, 1.0] {
                let w = family_to_density(&FamilyPoint::werner(a, d).unwrap()).unwrap();
                let b = 2.0 * (1.0 - a) / (df * (df + 1.0));
                let o = family_to_density(&FamilyPoint::oo(a, b, d).unwrap()).unwrap();
                assert!((w.matrix() - o.matrix()).camax() < 1e-12);
            }
            for b in [0.0, 0.4, 1.0] {
                let i = family_to_density(&FamilyPoint::isotropic(b, d).unwrap()).unwrap();
                let a = (1.0 - b) * df / (2.0 * (df + 1.0));
                let o = family_to_density(&FamilyPoint::oo(a, b, d).unwrap()).unwrap();
                assert!((i.matrix() - o.matrix()).camax() < 1e-12);
            }
        }
    }

    #[test]
    fn coordinates_are_expectations() {
        let d = 4;
        let points = [
            FamilyPoint::werner(0.3, d).unwrap(),
            FamilyPoint::isotropic(0.6, d).unwrap(),
            FamilyPoint::oo(0.2, 0.5, d).unwrap(),
            FamilyPoint::pp_werner(0.35, 0.4, d).unwrap(),
            FamilyPoint::pp_isotropic(0.25, 0.5, d).unwrap(),
        ];
        for p in points {
            let rho = family_to_density(&p).unwrap();
            let back = twirl(&rho, p.group()).unwrap();
            match (p.family(), back.family()) {
                (Family::Werner { a }, Family::Werner { a: x }) => assert!((a - x).abs() < 1e-12),
                (Family::Isotropic { b }, Family::Isotropic { b: y }) => {
                    assert!((b - y).abs() < 1e-12)
                }
                (Family::OO { a, b }, Family::OO { a: x, b: y })
                | (Family::PPWerner { a, b }, Family::PPWerner { a: x, b: y })
                | (Family::PPIsotropic { a, b }, Family::PPIsotropic { a: x, b: y }) => {
                    assert!((a - x).abs() < 1e-12 && (b - y).abs() < 1e-12)
                }
                _ => panic!("family changed"),
            }
            let wm = rho.expectation_matrix(&op(OperatorKind::WMinus, d)).unwrap();
            let phi = rho.expectation_matrix(&op(OperatorKind::PhiD, d)).unwrap();
            assert!((wm - p.werner_coordinate()).abs() < 1e-12, "{p}");
            assert!((phi - p.isotropic_coordinate()).abs() < 1e-12, "{p}");
        }
    }

    #[test]
    fn separability() {
        assert!(is_separable(&FamilyPoint::werner(0.5, 3).unwrap()).unwrap());
        assert!(!is_separable(&FamilyPoint::isotropic(0.9, 3).unwrap()).unwrap());
        assert!(is_separable(&FamilyPoint::oo(0.4, 0.05, 5).unwrap()).unwrap());
        assert!(matches!(
            is_separable(&FamilyPoint::pp_werner(0.4, 0.1, 3).unwrap()),
            Err(Error::UnsupportedQuery(_))
        ));
    }

    #[test]
    fn invalid_points() {
        assert!(FamilyPoint::oo(0.7, 0.4, 3).is_err());
        assert!(FamilyPoint::werner(-0.1, 3).is_err());
        assert!(FamilyPoint::isotropic(0.5, 1).is_err());
    }

    #[test]
    fn monte_carlo_is_execution_independent() {
        let rho = family_to_density(&FamilyPoint::oo(0.3, 0.3, 2).unwrap()).unwrap();
        let a = monte_carlo_twirl(&rho, SymmetryGroup::Werner, 600, 3, Execution::Sequential);
        let b = monte_carlo_twirl(&rho, SymmetryGroup::Werner, 600, 3, Execution::Parallel);
        assert_eq!(a, b);
    }
}
