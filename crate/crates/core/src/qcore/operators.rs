//! The commutant operators `W`, `W±`, `Φ_d` and `Q` on `C^d ⊗ C^d`.

use crate::error::{domain, structural, Result};
use crate::qcore::PureState;
use crate::{CMatrix, CVector, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    /// `W = Σ_ij |ij⟩⟨ji|`.
    Swap,
    /// `(1 + W)/2`, projector onto the symmetric subspace.
    WPlus,
    /// `(1 − W)/2`, projector onto the antisymmetric subspace.
    WMinus,
    /// `|Φ⟩⟨Φ|` with `|Φ⟩ = Σ_i |ii⟩/√d`.
    PhiD,
    /// `Σ_i |ii⟩⟨ii|`.
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymmetricOperator {
    pub kind: OperatorKind,
    pub d: usize,
}

impl SymmetricOperator {
    pub fn new(kind: OperatorKind, d: usize) -> Result<Self> {
        if d < 2 {
            return domain(format!("operators need d >= 2, got {d}"));
        }
        Ok(Self { kind, d })
    }

    pub fn matrix(&self) -> CMatrix {
        operator_matrix(self.kind, self.d)
    }

    /// `O |ψ⟩` without forming the matrix.
    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        let d = self.d;
        if v.len() != d * d {
            return structural("vector length does not match operator dimension");
        }
        Ok(apply_kind(self.kind, d, v))
    }
}

/// Dense `d² × d²` matrix of the operator.
pub fn build_operator(kind: OperatorKind, d: usize) -> Result<CMatrix> {
    Ok(SymmetricOperator::new(kind, d)?.matrix())
}

fn operator_matrix(kind: OperatorKind, d: usize) -> CMatrix {
    let n = d * d;
    let one = C64::new(1.0, 0.0);
    let mut swap = CMatrix::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            swap[(i * d + j, j * d + i)] = one;
        }
    }
    let id = CMatrix::identity(n, n);
    match kind {
        OperatorKind::Swap => swap,
        OperatorKind::WPlus => (id + swap).scale(0.5),
        OperatorKind::WMinus => (id - swap).scale(0.5),
        OperatorKind::PhiD => {
            let mut m = CMatrix::zeros(n, n);
            let w = C64::new(1.0 / d as f64, 0.0);
            for i in 0..d {
                for j in 0..d {
                    m[(i * d + i, j * d + j)] = w;
                }
            }
            m
        }
        OperatorKind::Q => {
            let mut m = CMatrix::zeros(n, n);
            for i in 0..d {
                m[(i * d + i, i * d + i)] = one;
            }
            m
        }
    }
}

pub(crate) fn apply_kind(kind: OperatorKind, d: usize, v: &CVector) -> CVector {
    let swapped = || CVector::from_fn(d * d, |idx, _| v[(idx % d) * d + idx / d]);
    match kind {
        OperatorKind::Swap => swapped(),
        OperatorKind::WPlus => (v + swapped()).scale(0.5),
        OperatorKind::WMinus => (v - swapped()).scale(0.5),
        OperatorKind::PhiD => {
            let s: C64 = (0..d).map(|i| v[i * d + i]).sum::<C64>() / d as f64;
            let mut out = CVector::zeros(d * d);
            for i in 0..d {
                out[i * d + i] = s;
            }
            out
        }
        OperatorKind::Q => {
            let mut out = CVector::zeros(d * d);
            for i in 0..d {
                out[i * d + i] = v[i * d + i];
            }
            out
        }
    }
}

/// `⟨ψ|O|ψ⟩`.
pub fn expectation(psi: &PureState, op: &SymmetricOperator) -> Result<f64> {
    if psi.d() != op.d {
        return structural(format!(
            "state dimension {} does not match operator dimension {}",
            psi.d(),
            op.d
        ));
    }
    Ok(expectation_amps(op.kind, op.d, psi.amplitudes()))
}

/// `⟨v|O|v⟩` for a raw amplitude vector of length `d²`.
pub(crate) fn expectation_amps(kind: OperatorKind, d: usize, v: &CVector) -> f64 {
    let swap = || -> f64 {
        let mut s = C64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                s += v[i * d + j].conj() * v[j * d + i];
            }
        }
        s.re
    };
    match kind {
        OperatorKind::Swap => swap(),
        OperatorKind::WPlus => 0.5 * (v.norm_squared() + swap()),
        OperatorKind::WMinus => 0.5 * (v.norm_squared() - swap()),
        OperatorKind::PhiD => {
            let s: C64 = (0..d).map(|i| v[i * d + i]).sum();
            s.norm_sqr() / d as f64
        }
        OperatorKind::Q => (0..d).map(|i| v[i * d + i].norm_sqr()).sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use OperatorKind::*;

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        (a - b).camax() <= tol
    }

    #[test]
    fn algebraic_identities() {
        for d in 2..=5 {
            let n = d * d;
            let id = CMatrix::identity(n, n);
            let w = build_operator(Swap, d).unwrap();
            let wp = build_operator(WPlus, d).unwrap();
            let wm = build_operator(WMinus, d).unwrap();
            let phi = build_operator(PhiD, d).unwrap();
            let q = build_operator(Q, d).unwrap();
            let zero = CMatrix::zeros(n, n);
            assert!(close(&(&w * &w), &id, 1e-12));
            assert!(close(&(&wp + &wm), &id, 1e-12));
            assert!(close(&(&wp * &wm), &zero, 1e-12));
            assert!(close(&(&phi * &phi), &phi, 1e-12));
            assert!((phi.trace().re - 1.0).abs() < 1e-12);
            assert!(close(&(&q * &q), &q, 1e-12));
            assert!((q.trace().re - d as f64).abs() < 1e-12);
            assert!(close(&(&q * &wm), &zero, 1e-12));
            assert!(close(&(&q * &wp), &q, 1e-12));
            let binom = (d * (d - 1) / 2) as f64;
            assert!((wm.trace().re - binom).abs() < 1e-12);
        }
    }

    #[test]
    fn swap_moves_basis_states() {
        let w = build_operator(Swap, 2).unwrap();
        let mut ket01 = CVector::zeros(4);
        ket01[1] = C64::new(1.0, 0.0);
        let out = &w * &ket01;
        assert_eq!(out[2], C64::new(1.0, 0.0));
    }

    #[test]
    fn rejects_small_dimension() {
        assert!(build_operator(Q, 1).is_err());
    }

    #[test]
    fn matrix_free_application_matches_matrix() {
        let d = 3;
        let v = CVector::from_fn(9, |i, _| C64::new(i as f64 * 0.1, 1.0 - i as f64 * 0.05));
        for kind in [Swap, WPlus, WMinus, PhiD, Q] {
            let op = SymmetricOperator::new(kind, d).unwrap();
            let dense = op.matrix() * &v;
            let fast = op.apply(&v).unwrap();
            assert!((dense - fast).camax() < 1e-14);
            let e = v.dotc(&(op.matrix() * &v)).re;
            assert!((e - expectation_amps(kind, d, &v)).abs() < 1e-12);
        }
    }

    #[test]
    fn singlet_and_maximally_entangled_expectations() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut s = CVector::zeros(4);
        s[1] = C64::new(r, 0.0);
        s[2] = C64::new(-r, 0.0);
        let singlet = PureState::new(2, s).unwrap();
        let wm = SymmetricOperator::new(WMinus, 2).unwrap();
        assert!((expectation(&singlet, &wm).unwrap() - 1.0).abs() < 1e-12);
        let phi = PureState::maximally_entangled(4);
        let p = SymmetricOperator::new(PhiD, 4).unwrap();
        assert!((expectation(&phi, &p).unwrap() - 1.0).abs() < 1e-12);
        assert!(expectation(&phi, &wm).is_err());
    }
}
