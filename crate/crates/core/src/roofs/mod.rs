//! Closed-form convex roofs on the symmetric families.

pub mod envelope;
pub mod extension;
pub mod isotropic;
pub mod werner;

pub use envelope::{convex_envelope_1d, EnvelopeFunction};
pub use extension::{
    extended_roof, orbit_membership_certificate, region_membership, ExtendedRoof,
    OrbitCertificate, Region,
};
pub use isotropic::{
    iso_c2_roof, iso_cd_roof, iso_entropy_minimum, iso_lambda_beta, iso_lower_bound_roof,
    iso_vidal_roof, roof_isotropic,
};
pub use werner::{roof_werner, werner_minimizer};

use crate::error::{domain, Result};
use crate::qcore::SchmidtVector;

/// Tolerance for the fiber constraint carried by a minimizer profile.
pub const PROFILE_TOL: f64 = 1e-10;

/// Shape of a fiber-minimizing Schmidt vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileKind {
    /// The two-qubit minimizer `ψ_a` of the Werner fiber `⟨W₋⟩ = a`.
    WernerPsi { a: f64 },
    /// `(t, …, t, s, …, s)` with `k` copies of `t` and `s = (1 − kt)/(d − k)`.
    IsoTwoLevel { t: f64, k: usize },
    /// `(t, (1−t)/(d−1), …)`.
    IsoTopHeavy { t: f64 },
    /// `(t, …, t, 1 − kt, 0, …)` with `k` copies of `t`.
    IsoTruncated { t: f64, k: usize },
}

/// A fiber minimizer together with its Schmidt vector.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimizerProfile {
    pub kind: ProfileKind,
    pub schmidt: SchmidtVector,
}

impl MinimizerProfile {
    /// Builds the Schmidt vector for an isotropic-fiber profile in dimension `d`.
    pub fn isotropic(kind: ProfileKind, d: usize) -> Result<Self> {
        let mut v = vec![0.0; d];
        match kind {
            ProfileKind::IsoTwoLevel { t, k } => {
                if k == 0 || k > d {
                    return domain(format!("two-level profile needs 1 <= k <= {d}"));
                }
                let s = if k < d { (1.0 - k as f64 * t) / (d - k) as f64 } else { 0.0 };
                for (i, x) in v.iter_mut().enumerate() {
                    *x = if i < k { t } else { s };
                }
            }
            ProfileKind::IsoTopHeavy { t } => {
                let s = (1.0 - t) / (d - 1) as f64;
                for (i, x) in v.iter_mut().enumerate() {
                    *x = if i == 0 { t } else { s };
                }
            }
            ProfileKind::IsoTruncated { t, k } => {
                if k == 0 || k > d {
                    return domain(format!("truncated profile needs 1 <= k <= {d}"));
                }
                for x in v.iter_mut().take(k) {
                    *x = t;
                }
                if k < d {
                    v[k] = 1.0 - k as f64 * t;
                }
            }
            ProfileKind::WernerPsi { .. } => {
                return domain("Werner profiles are built by werner_minimizer");
            }
        }
        for x in v.iter_mut() {
            if x.abs() < 1e-15 {
                *x = 0.0;
            }
        }
        let sum: f64 = v.iter().sum();
        let v: Vec<f64> = v.iter().map(|x| x / sum).collect();
        Ok(Self {
            kind,
            schmidt: SchmidtVector::from_unsorted(v)?,
        })
    }

    /// `Σ_i √λ_i`.
    pub fn root_sum(&self) -> f64 {
        self.schmidt.as_slice().iter().map(|x| x.sqrt()).sum()
    }

    /// Checks the fiber constraint `Σ √λ = √(d b)` against `b`.
    pub fn check_isotropic(&self, b: f64) -> Result<()> {
        let d = self.schmidt.d() as f64;
        let err = (self.root_sum() - (d * b).sqrt()).abs();
        if err > PROFILE_TOL {
            return domain(format!(
                "profile violates the isotropic fiber constraint by {err:.3e}"
            ));
        }
        Ok(())
    }
}
