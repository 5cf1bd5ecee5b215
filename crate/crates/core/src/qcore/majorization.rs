use crate::qcore::SchmidtVector;

/// Slack allowed in partial-sum comparisons.
pub const MAJORIZATION_TOL: f64 = 1e-12;

/// `x ≻ y`: every partial sum of `x` dominates that of `y`. The shorter
/// vector is zero-padded.
pub fn majorizes(x: &SchmidtVector, y: &SchmidtVector) -> bool {
    majorizes_with_tol(x, y, MAJORIZATION_TOL)
}

pub fn majorizes_with_tol(x: &SchmidtVector, y: &SchmidtVector, tol: f64) -> bool {
    let d = x.d().max(y.d());
    let px = x.padded(d).partial_sums();
    let py = y.padded(d).partial_sums();
    px.iter().zip(&py).all(|(a, b)| a + tol >= *b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: &[f64]) -> SchmidtVector {
        SchmidtVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn examples() {
        assert!(majorizes(&sv(&[1.0, 0.0]), &sv(&[0.5, 0.5])));
        assert!(!majorizes(&sv(&[0.5, 0.5]), &sv(&[0.6, 0.4])));
        assert!(majorizes(&sv(&[0.6, 0.4]), &sv(&[0.5, 0.5])));
    }

    #[test]
    fn pads_shorter_vector() {
        assert!(majorizes(&sv(&[1.0]), &sv(&[0.5, 0.3, 0.2])));
        assert!(!majorizes(&sv(&[0.4, 0.3, 0.3]), &sv(&[0.5, 0.5])));
    }
}
