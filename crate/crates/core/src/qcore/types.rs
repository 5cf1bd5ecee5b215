use crate::error::{domain, structural, Error, Result};
use crate::{CMatrix, CVector, C64};

/// Tolerance for probability-vector normalization.
pub const SUM_TOL: f64 = 1e-12;
/// Tolerance for unit norm of pure states.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance for Hermiticity and unit trace of density matrices.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues down to this floor are accepted and clipped to zero.
pub const PSD_FLOOR: f64 = -1e-10;
/// Tolerance for `U U† = 1`.
pub const UNITARY_TOL: f64 = 1e-10;

/// Squared Schmidt coefficients, sorted non-increasing, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtVector {
    lambda: Vec<f64>,
}

impl SchmidtVector {
    /// Validates an already sorted probability vector.
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() {
            return structural("Schmidt vector must have at least one entry");
        }
        for (i, &x) in lambda.iter().enumerate() {
            if !(x.is_finite() && (0.0..=1.0).contains(&x)) {
                return domain(format!("Schmidt coefficient {i} = {x} is outside [0, 1]"));
            }
        }
        if lambda.windows(2).any(|w| w[0] < w[1]) {
            return domain("Schmidt coefficients must be sorted non-increasing");
        }
        let sum: f64 = lambda.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return domain(format!("Schmidt coefficients sum to {sum}, not 1"));
        }
        Ok(Self { lambda })
    }

    /// Sorts descending, clips round-off negatives (down to `-SUM_TOL`) and validates.
    pub fn from_unsorted(mut lambda: Vec<f64>) -> Result<Self> {
        for x in lambda.iter_mut() {
            if *x < 0.0 && *x >= -SUM_TOL {
                *x = 0.0;
            }
        }
        sort_desc(&mut lambda);
        Self::new(lambda)
    }

    /// Rescales nonnegative weights to sum one, then sorts.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|&x| !x.is_finite() || x < 0.0) {
            return domain("weights must be finite and nonnegative");
        }
        let sum: f64 = weights.iter().sum();
        if sum <= 0.0 {
            return domain("weights sum to zero");
        }
        let scaled: Vec<f64> = weights.iter().map(|x| (x / sum).min(1.0)).collect();
        Self::from_unsorted(scaled)
    }

    /// The maximally entangled vector `(1/d, …, 1/d)`.
    pub fn uniform(d: usize) -> Self {
        Self { lambda: vec![1.0 / d as f64; d] }
    }

    /// The product vector `(1, 0, …, 0)`.
    pub fn product(d: usize) -> Self {
        let mut lambda = vec![0.0; d];
        lambda[0] = 1.0;
        Self { lambda }
    }

    pub fn d(&self) -> usize {
        self.lambda.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.lambda
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.lambda
    }

    pub fn largest(&self) -> f64 {
        self.lambda[0]
    }

    /// Zero-pads to dimension `d`; no-op if already at least `d` long.
    pub fn padded(&self, d: usize) -> Self {
        let mut lambda = self.lambda.clone();
        if lambda.len() < d {
            lambda.resize(d, 0.0);
        }
        Self { lambda }
    }

    /// Partial sums `Σ_{i≤k} λ_i` for `k = 1..d`.
    pub fn partial_sums(&self) -> Vec<f64> {
        self.lambda
            .iter()
            .scan(0.0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect()
    }
}

/// Stable descending sort.
pub(crate) fn sort_desc(v: &mut [f64]) {
    v.sort_by(|a, b| b.total_cmp(a));
}

/// Unit vector in `C^d ⊗ C^d`, stored with index `i*d + j` for `|i⟩|j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    d: usize,
    amps: CVector,
}

impl PureState {
    pub fn new(d: usize, amps: CVector) -> Result<Self> {
        if d == 0 || amps.len() != d * d {
            return structural(format!(
                "{} amplitudes do not form a {d}x{d} bipartite state",
                amps.len()
            ));
        }
        let n2 = amps.norm_squared();
        if (n2 - 1.0).abs() > NORM_TOL {
            return domain(format!("state has squared norm {n2}, not 1"));
        }
        Ok(Self { d, amps })
    }

    /// Infers `d` from the amplitude count and validates the norm.
    pub fn from_amplitudes(amps: CVector) -> Result<Self> {
        let n = amps.len();
        let d = (n as f64).sqrt().round() as usize;
        if d * d != n {
            return structural(format!("{n} amplitudes are not a perfect bipartite square"));
        }
        Self::new(d, amps)
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalize(d: usize, amps: CVector) -> Result<Self> {
        let n = amps.norm();
        if !(n.is_finite() && n > 0.0) {
            return domain("cannot normalize a zero vector");
        }
        Self::new(d, amps.unscale(n))
    }

    /// `Σ_i √λ_i |ii⟩`.
    pub fn from_schmidt(lambda: &SchmidtVector) -> Self {
        let d = lambda.d();
        let mut amps = CVector::zeros(d * d);
        for (i, &l) in lambda.as_slice().iter().enumerate() {
            amps[i * d + i] = C64::new(l.sqrt(), 0.0);
        }
        let n = amps.norm();
        Self { d, amps: amps.unscale(n) }
    }

    /// `(1/√d) Σ_i |ii⟩`.
    pub fn maximally_entangled(d: usize) -> Self {
        Self::from_schmidt(&SchmidtVector::uniform(d))
    }

    /// `|a⟩ ⊗ |b⟩` for unit vectors of equal length.
    pub fn product(a: &CVector, b: &CVector) -> Result<Self> {
        if a.len() != b.len() {
            return structural("product factors have different dimensions");
        }
        Self::normalize(a.len(), a.kronecker(b))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    /// The `d × d` matrix `M_ij = ⟨ij|ψ⟩`.
    pub fn amplitude_matrix(&self) -> CMatrix {
        let d = self.d;
        CMatrix::from_fn(d, d, |i, j| self.amps[i * d + j])
    }

    /// `(A ⊗ B) |ψ⟩`.
    pub fn apply_local(&self, a: &CMatrix, b: &CMatrix) -> Result<Self> {
        let d = self.d;
        if a.shape() != (d, d) || b.shape() != (d, d) {
            return structural("local operators do not match the state dimension");
        }
        let m = a * self.amplitude_matrix() * b.transpose();
        let amps = CVector::from_fn(d * d, |idx, _| m[(idx / d, idx % d)]);
        Self::normalize(d, amps)
    }

    /// `|⟨ψ|φ⟩|²`.
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.amps.dotc(&other.amps).norm_sqr()
    }
}

/// Density operator on `C^d ⊗ C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    d: usize,
    m: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity; small negative
    /// eigenvalues above [`PSD_FLOOR`] are clipped.
    pub fn new(d: usize, m: CMatrix) -> Result<Self> {
        let n = d * d;
        if d == 0 || m.shape() != (n, n) {
            return structural(format!(
                "{:?} matrix is not an operator on C^{d} ⊗ C^{d}",
                m.shape()
            ));
        }
        let herm_err = (&m - m.adjoint()).camax();
        if herm_err > HERMITIAN_TOL {
            return domain(format!("matrix is not Hermitian (deviation {herm_err:.3e})"));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > HERMITIAN_TOL || tr.im.abs() > HERMITIAN_TOL {
            return domain(format!("trace is {tr}, not 1"));
        }
        let h = (&m + m.adjoint()).scale(0.5);
        let eig = h.clone().symmetric_eigen();
        let min = eig.eigenvalues.min();
        if min < PSD_FLOOR {
            return domain(format!("matrix has negative eigenvalue {min:.3e}"));
        }
        let m = if min < 0.0 {
            let clipped = eig.eigenvalues.map(|x| x.max(0.0));
            let v = &eig.eigenvectors;
            let diag = CMatrix::from_diagonal(&clipped.map(|x| C64::new(x, 0.0)));
            v * diag * v.adjoint()
        } else {
            h
        };
        Ok(Self { d, m })
    }

    /// Infers `d` from the matrix size.
    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        let n = m.nrows();
        let d = (n as f64).sqrt().round() as usize;
        if d * d != n {
            return structural(format!("{n} is not a perfect bipartite square"));
        }
        Self::new(d, m)
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let v = psi.amplitudes();
        Self { d: psi.d(), m: v * v.adjoint() }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        let n = d * d;
        Self {
            d,
            m: CMatrix::identity(n, n).unscale(n as f64),
        }
    }

    /// Convex mixture `Σ p_i |ψ_i⟩⟨ψ_i|`; weights are renormalized.
    pub fn mixture(weights: &[f64], states: &[PureState]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return structural("mixture needs one weight per state");
        }
        let d = states[0].d();
        if states.iter().any(|s| s.d() != d) {
            return structural("mixture components have different dimensions");
        }
        if weights.iter().any(|&w| !(w.is_finite() && w >= 0.0)) {
            return domain("mixture weights must be nonnegative");
        }
        let total: f64 = weights.iter().sum();
        let mut m = CMatrix::zeros(d * d, d * d);
        for (w, s) in weights.iter().zip(states) {
            let v = s.amplitudes();
            m += (v * v.adjoint()).scale(w / total);
        }
        Self::new(d, m)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    /// `Tr[ρ O]`, real part.
    pub fn expectation_matrix(&self, op: &CMatrix) -> Result<f64> {
        if op.shape() != self.m.shape() {
            return structural("operator does not match the density matrix dimension");
        }
        Ok((&self.m * op).trace().re)
    }

    /// Eigen-decomposition with nonnegative clipped eigenvalues, descending.
    pub fn spectrum(&self) -> (Vec<f64>, CMatrix) {
        let eig = self.m.clone().symmetric_eigen();
        let n = eig.eigenvalues.len();
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
        let vals = idx.iter().map(|&i| eig.eigenvalues[i].max(0.0)).collect();
        let vecs = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, idx[c])]);
        (vals, vecs)
    }
}

/// `d × d` unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    m: CMatrix,
}

impl Unitary {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return structural("unitary must be a nonempty square matrix");
        }
        let n = m.nrows();
        let err = (&m * m.adjoint() - CMatrix::identity(n, n)).camax();
        if err > UNITARY_TOL {
            return Err(Error::Domain(format!(
                "matrix is not unitary (deviation {err:.3e})"
            )));
        }
        Ok(Self { m })
    }

    pub fn identity(d: usize) -> Self {
        Self { m: CMatrix::identity(d, d) }
    }

    pub(crate) fn new_unchecked(m: CMatrix) -> Self {
        Self { m }
    }

    pub fn d(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn adjoint(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    pub fn conjugate(&self) -> Self {
        Self { m: self.m.conjugate() }
    }

    pub fn compose(&self, other: &Unitary) -> Self {
        Self { m: &self.m * &other.m }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schmidt_vector_validation() {
        assert!(SchmidtVector::new(vec![0.6, 0.4]).is_ok());
        assert!(SchmidtVector::new(vec![0.4, 0.6]).is_err());
        assert!(SchmidtVector::new(vec![0.6, 0.5]).is_err());
        assert!(SchmidtVector::new(vec![1.2, -0.2]).is_err());
        let v = SchmidtVector::from_unsorted(vec![0.1, 0.6, 0.3]).unwrap();
        assert_eq!(v.as_slice(), &[0.6, 0.3, 0.1]);
        let w = SchmidtVector::normalized(vec![2.0, 2.0]).unwrap();
        assert_eq!(w.as_slice(), &[0.5, 0.5]);
    }

    #[test]
    fn pure_state_shape_checks() {
        let amps = CVector::from_element(3, C64::new(1.0 / 3f64.sqrt(), 0.0));
        assert!(matches!(
            PureState::from_amplitudes(amps),
            Err(Error::Structural(_))
        ));
        let psi = PureState::maximally_entangled(3);
        assert!((psi.amplitudes().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn density_matrix_clips_tiny_negative_eigenvalues() {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = C64::new(1.0 + 1e-13, 0.0);
        m[(1, 1)] = C64::new(-1e-13, 0.0);
        let rho = DensityMatrix::new(2, m).unwrap();
        let (vals, _) = rho.spectrum();
        assert!(vals.iter().all(|&x| x >= 0.0));
        let mut bad = CMatrix::zeros(4, 4);
        bad[(0, 0)] = C64::new(1.1, 0.0);
        bad[(1, 1)] = C64::new(-0.1, 0.0);
        assert!(DensityMatrix::new(2, bad).is_err());
    }

    #[test]
    fn unitary_check() {
        assert!(Unitary::new(CMatrix::identity(3, 3)).is_ok());
        assert!(Unitary::new(CMatrix::identity(3, 3).scale(2.0)).is_err());
    }
}
