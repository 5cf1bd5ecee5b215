use crate::error::Result;
use crate::qcore::types::sort_desc;
use crate::qcore::{PureState, SchmidtVector, Unitary};
use crate::{CMatrix, CVector, C64};

/// Singular values below this are treated as zero.
pub const RANK_TOL: f64 = 1e-12;

/// Schmidt decomposition `|ψ⟩ = (U_L ⊗ U_R) Σ_i √λ_i |ii⟩`.
///
/// The amplitude matrix `M_ij = ⟨ij|ψ⟩` factors as `M = U S V†`, so
/// `U_L = U` and `U_R = conj(V)`.
pub fn schmidt_decompose(psi: &PureState) -> Result<(SchmidtVector, Unitary, Unitary)> {
    let d = psi.d();
    let m = psi.amplitude_matrix();
    let svd = m.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let s = &svd.singular_values;

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
    let lambda: Vec<f64> = order
        .iter()
        .map(|&i| if s[i] < RANK_TOL { 0.0 } else { s[i] * s[i] })
        .collect();
    let ul = CMatrix::from_fn(d, d, |r, c| u[(r, order[c])]);
    // conj(V) = (V†)^T, and V† is exactly `v_t`.
    let ur = CMatrix::from_fn(d, d, |r, c| v_t[(order[c], r)]);
    let lambda = renormalize(lambda);
    Ok((
        SchmidtVector::from_unsorted(lambda)?,
        Unitary::new_unchecked(ul),
        Unitary::new_unchecked(ur),
    ))
}

/// Schmidt coefficients only.
pub fn schmidt_coefficients(psi: &PureState) -> Result<SchmidtVector> {
    schmidt_of_amplitudes(psi.d(), psi.amplitudes())
}

pub(crate) fn schmidt_of_amplitudes(d: usize, amps: &CVector) -> Result<SchmidtVector> {
    let m = CMatrix::from_fn(d, d, |i, j| amps[i * d + j]);
    let s = m.singular_values();
    let mut lambda: Vec<f64> = s
        .iter()
        .map(|&x| if x < RANK_TOL { 0.0 } else { x * x })
        .collect();
    sort_desc(&mut lambda);
    SchmidtVector::from_unsorted(renormalize(lambda))
}

fn renormalize(mut v: Vec<f64>) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    }
    v
}

/// Rebuilds `(U_L ⊗ U_R) Σ_i √λ_i |ii⟩`.
pub fn schmidt_reconstruct(lambda: &SchmidtVector, ul: &Unitary, ur: &Unitary) -> CVector {
    let d = lambda.d();
    let mut out = CVector::zeros(d * d);
    for (k, &l) in lambda.as_slice().iter().enumerate() {
        let c = l.sqrt();
        if c == 0.0 {
            continue;
        }
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] += ul.matrix()[(i, k)] * ur.matrix()[(j, k)] * C64::new(c, 0.0);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::stream;
    use crate::qcore::haar::random_pure_state;

    #[test]
    fn product_and_bell() {
        let mut a = CVector::zeros(4);
        a[0] = C64::new(1.0, 0.0);
        let (l, _, _) = schmidt_decompose(&PureState::new(2, a).unwrap()).unwrap();
        assert_eq!(l.as_slice(), &[1.0, 0.0]);
        let (l, _, _) = schmidt_decompose(&PureState::maximally_entangled(2)).unwrap();
        assert!((l.as_slice()[0] - 0.5).abs() < 1e-14);
        assert!((l.as_slice()[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn round_trip() {
        for d in 2..=4 {
            for s in 0..100 {
                let psi = random_pure_state(d, &mut stream(11, s));
                let (l, ul, ur) = schmidt_decompose(&psi).unwrap();
                let back = schmidt_reconstruct(&l, &ul, &ur);
                let overlap = back.dotc(psi.amplitudes());
                // equal up to a global phase
                let err = (back - psi.amplitudes() * (overlap / overlap.norm()).conj()).camax();
                assert!(err < 1e-10, "d={d} s={s} err={err}");
                assert!(Unitary::new(ul.into_matrix()).is_ok());
                assert!(Unitary::new(ur.into_matrix()).is_ok());
            }
        }
    }
}
