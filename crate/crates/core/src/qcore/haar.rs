//! Random unitaries, states and density matrices.

use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::exec::{stream, Rng};
use crate::qcore::{DensityMatrix, PureState, Unitary};
use crate::{CMatrix, CVector, C64};

fn complex_gaussian(rng: &mut Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Complex Ginibre matrix with unit-variance entries.
pub fn ginibre(rows: usize, cols: usize, rng: &mut Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Fixes the QR phase ambiguity so that `Q` is Haar distributed.
fn haar_from_qr(g: CMatrix) -> CMatrix {
    let d = g.nrows();
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..d {
        let rc = r[(c, c)];
        let phase = if rc.norm() > 0.0 { rc / rc.norm() } else { C64::new(1.0, 0.0) };
        for row in 0..d {
            q[(row, c)] *= phase;
        }
    }
    q
}

/// Haar-random element of `U(d)` drawn from `rng`.
pub fn haar_unitary_rng(d: usize, rng: &mut Rng) -> Unitary {
    Unitary::new_unchecked(haar_from_qr(ginibre(d, d, rng)))
}

/// Haar-random element of `U(d)`, deterministic in `seed`.
pub fn haar_unitary(d: usize, seed: u64) -> Unitary {
    haar_unitary_rng(d, &mut stream(seed, 0))
}

/// Haar-random element of `O(d)`.
pub fn haar_orthogonal(d: usize, rng: &mut Rng) -> Unitary {
    let g = CMatrix::from_fn(d, d, |_, _| C64::new(rng.sample(StandardNormal), 0.0));
    Unitary::new_unchecked(haar_from_qr(g))
}

/// Uniform permutation composed with independent uniform phases.
pub fn phase_permutation(d: usize, rng: &mut Rng) -> Unitary {
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(rng);
    let mut m = CMatrix::zeros(d, d);
    for (col, &row) in perm.iter().enumerate() {
        let theta: f64 = rng.random::<f64>() * std::f64::consts::TAU;
        m[(row, col)] = C64::from_polar(1.0, theta);
    }
    Unitary::new_unchecked(m)
}

/// Haar-random pure state on `C^d ⊗ C^d`.
pub fn random_pure_state(d: usize, rng: &mut Rng) -> PureState {
    let v = CVector::from_fn(d * d, |_, _| complex_gaussian(rng));
    let n = v.norm();
    PureState::new(d, v.unscale(n)).expect("Gaussian vector normalizes")
}

/// Random density matrix `G G† / Tr[G G†]` with square Ginibre `G`.
pub fn random_density(d: usize, rng: &mut Rng) -> DensityMatrix {
    let g = ginibre(d * d, d * d, rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(d, m.unscale(tr)).expect("Ginibre product is a state")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_and_deterministic() {
        let u = haar_unitary(3, 5);
        assert!(Unitary::new(u.matrix().clone()).is_ok());
        assert_eq!(u, haar_unitary(3, 5));
        let one = haar_unitary(1, 9);
        assert!((one.matrix()[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn first_moment() {
        let n = 10_000;
        let mut rng = stream(42, 0);
        let samples: Vec<f64> = (0..n)
            .map(|_| haar_unitary_rng(2, &mut rng).matrix()[(0, 0)].norm_sqr())
            .collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let sigma = (var / n as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * sigma, "mean {mean} sigma {sigma}");
    }

    #[test]
    fn orthogonal_and_phase_permutation_are_unitary() {
        let mut rng = stream(1, 0);
        for d in 2..=5 {
            let o = haar_orthogonal(d, &mut rng);
            assert!(o.matrix().iter().all(|z| z.im == 0.0));
            assert!(Unitary::new(o.into_matrix()).is_ok());
            let p = phase_permutation(d, &mut rng);
            assert!(Unitary::new(p.into_matrix()).is_ok());
        }
    }
}
