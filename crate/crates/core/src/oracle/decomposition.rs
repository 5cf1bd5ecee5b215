//! Upper bounds on convex roofs from explicit pure-state decompositions.
//!
//! Write `ρ = Σ_j w_j |e_j⟩⟨e_j|` and `c_j = √w_j e_j`. Every decomposition
//! of `ρ` into `N` subnormalized pure states is `ψ̃_i = Σ_j U_ij c_j` for an
//! `N × r` isometry `U`, so minimizing the ensemble average of a monotone
//! over the complex Stiefel manifold searches all decompositions of size `N`.

use crate::error::{domain, Result};
use crate::exec::{map_indexed, stream, Rng};
use crate::families::{family_to_density, FamilyPoint};
use crate::monotones::MonotoneSpec;
use crate::oracle::{best_by, Argmin, OracleEstimate, SearchBudget};
use crate::qcore::haar::ginibre;
use crate::qcore::{PureState, SchmidtVector};
use crate::{CMatrix, CVector};

/// Eigenvalues below this are treated as zero when counting the rank.
const RANK_TOL: f64 = 1e-12;
/// Smoothing schedule: member values are taken at `(1 - ε)λ + ε/d` while
/// descending, which removes the infinite slopes of many monotones at the
/// boundary of the simplex. The last stage is unsmoothed.
const SMOOTHING: [f64; 5] = [1e-2, 1e-4, 1e-6, 1e-8, 0.0];
/// Weights below this contribute neither value nor gradient.
const WEIGHT_FLOOR: f64 = 1e-300;

/// One member of a decomposition `ρ = Σ p_i |ψ_i⟩⟨ψ_i|`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionElement {
    pub weight: f64,
    pub state: PureState,
    pub schmidt: SchmidtVector,
}

/// Smallest ensemble average of `spec` found over decompositions of the
/// family state at `point` into `ensemble_size` pure states (default: twice
/// the rank).
///
/// Each restart starts from a random isometry and runs Riemannian
/// conjugate gradients (Polak–Ribière, projection transport) with a QR
/// retraction and an Armijo line search.
pub fn roof_upper_bound_by_decompositions(
    point: &FamilyPoint,
    spec: &MonotoneSpec,
    ensemble_size: Option<usize>,
    budget: &SearchBudget,
) -> Result<OracleEstimate> {
    spec.validate()?;
    budget.validate()?;
    let rho = family_to_density(point)?;
    let d = rho.d();
    let (w, v) = rho.spectrum();
    let rank = w.iter().filter(|&&x| x > RANK_TOL).count().max(1);
    let n = ensemble_size.unwrap_or(2 * rank);
    if n < rank {
        return domain(format!("ensemble size {n} is below the rank {rank} of the state"));
    }
    let c = CMatrix::from_fn(d * d, rank, |row, col| v[(row, col)] * w[col].sqrt());
    let problem = Problem { spec, d, c };

    let runs = map_indexed(budget.execution, budget.restarts, |r| {
        let mut rng = stream(budget.seed, r as u64);
        problem.descend(n, rank, budget, &mut rng)
    });
    let runs: Vec<(f64, CMatrix)> = runs.into_iter().collect::<Result<_>>()?;
    let (value, u) = best_by(runs, |r| r.0, true)
        .ok_or_else(|| crate::Error::Domain("no finite ensemble average found".into()))?;
    let violation = (u.adjoint() * &u - CMatrix::identity(rank, rank)).camax();
    Ok(OracleEstimate {
        value,
        argmin: Argmin::Decomposition(problem.elements(&u)?),
        gap_to_closed_form: None,
        max_violation: violation,
    })
}

struct Problem<'a> {
    spec: &'a MonotoneSpec,
    d: usize,
    /// Columns `√w_j e_j`.
    c: CMatrix,
}

impl Problem<'_> {
    fn member_matrix(&self, psi: &CVector) -> CMatrix {
        CMatrix::from_fn(self.d, self.d, |i, j| psi[i * self.d + j])
    }

    /// `Σ_i p_i E(ψ_i)` and, when requested, its Euclidean gradient with
    /// respect to `U` in the convention `dF = 2 Re tr(Γ† dU)`.
    fn objective(&self, u: &CMatrix, eps: f64, with_gradient: bool) -> Result<(f64, Option<CMatrix>)> {
        let psis = u * self.c.transpose();
        let mut total = 0.0;
        let mut grad_psi = CMatrix::zeros(psis.nrows(), psis.ncols());
        for i in 0..psis.nrows() {
            let psi: CVector = psis.row(i).transpose();
            let m = self.member_matrix(&psi);
            let svd = m.svd(with_gradient, with_gradient);
            let s2: Vec<f64> = svd.singular_values.iter().map(|s| s * s).collect();
            let p: f64 = s2.iter().sum();
            if p <= WEIGHT_FLOOR {
                continue;
            }
            let floor = eps / self.d as f64;
            let lambda: Vec<f64> = s2.iter().map(|x| (1.0 - eps) * x / p + floor).collect();
            let e = self.spec.evaluate_raw(&lambda)?;
            total += p * e;
            if with_gradient {
                let g: Vec<f64> = self.spec.gradient(&lambda)?.iter().map(|gi| (1.0 - eps) * gi).collect();
                let lambda: Vec<f64> = s2.iter().map(|x| x / p).collect();
                let mean: f64 = g.iter().zip(&lambda).map(|(gi, li)| gi * li).sum();
                let phi: Vec<f64> = g.iter().map(|gi| e + gi - mean).collect();
                let sv = &svd.singular_values;
                let left = svd.u.as_ref().expect("left vectors requested");
                let right = svd.v_t.as_ref().expect("right vectors requested");
                let scaled = CMatrix::from_fn(self.d, self.d, |r, k| left[(r, k)] * (phi[k] * sv[k]));
                let gm = scaled * right;
                for a in 0..self.d {
                    for b in 0..self.d {
                        grad_psi[(i, a * self.d + b)] = gm[(a, b)];
                    }
                }
            }
        }
        // Γ_ij = c_j† G_i, i.e. Γ = G c̄.
        let grad = with_gradient.then(|| grad_psi * self.c.map(|z| z.conj()));
        Ok((total, grad))
    }

    fn descend(
        &self,
        n: usize,
        rank: usize,
        budget: &SearchBudget,
        rng: &mut Rng,
    ) -> Result<(f64, CMatrix)> {
        let mut u = ginibre(n, rank, rng).qr().q();
        let stages = SMOOTHING.len();
        for (stage, &eps) in SMOOTHING.iter().enumerate() {
            let iterations = budget.iterations * (stage + 1) / stages - budget.iterations * stage / stages;
            u = self.descend_stage(u, eps, iterations, budget)?;
        }
        Ok((self.objective(&u, 0.0, false)?.0, u))
    }

    /// Conjugate-gradient iterations on the objective smoothed by `eps`.
    fn descend_stage(
        &self,
        mut u: CMatrix,
        eps: f64,
        iterations: usize,
        budget: &SearchBudget,
    ) -> Result<CMatrix> {
        let (mut fx, mut g) = self.objective(&u, eps, true)?;
        let max_step = 10.0 * budget.initial_step;
        let mut step = budget.initial_step;
        let mut previous: Option<(CMatrix, CMatrix)> = None;
        for _ in 0..iterations {
            let gamma = g.take().expect("gradient computed");
            let rgrad = tangent(&u, &gamma).scale(2.0);
            let gg = rgrad.norm_squared();
            if gg < 1e-24 {
                break;
            }
            let mut dir = -&rgrad;
            if let Some((g_old, d_old)) = &previous {
                let g_old = tangent(&u, g_old);
                let d_old = tangent(&u, d_old);
                let beta = (inner(&rgrad, &(&rgrad - &g_old)) / g_old.norm_squared().max(1e-300)).max(0.0);
                dir += d_old.scale(beta);
                if inner(&rgrad, &dir) >= 0.0 {
                    dir = -&rgrad;
                }
            }
            let slope = -inner(&rgrad, &dir);
            let mut trial = step;
            let mut accepted = None;
            for _ in 0..40 {
                let candidate = (&u + dir.scale(trial)).qr().q();
                let (fc, _) = self.objective(&candidate, eps, false)?;
                if fc <= fx - 1e-4 * trial * slope {
                    accepted = Some((candidate, fc));
                    break;
                }
                trial *= budget.decay;
            }
            let Some((candidate, fc)) = accepted else {
                if previous.take().is_some() {
                    g = Some(gamma);
                    continue;
                }
                break;
            };
            u = candidate;
            fx = fc;
            step = (trial / budget.decay).min(max_step);
            previous = Some((rgrad, dir));
            g = self.objective(&u, eps, true)?.1;
        }
        Ok(u)
    }

    fn elements(&self, u: &CMatrix) -> Result<Vec<DecompositionElement>> {
        let psis = u * self.c.transpose();
        let mut out = Vec::new();
        for i in 0..psis.nrows() {
            let psi: CVector = psis.row(i).transpose();
            let p = psi.norm_squared();
            if p <= WEIGHT_FLOOR {
                continue;
            }
            let state = PureState::normalize(self.d, psi)?;
            let schmidt = crate::qcore::schmidt::schmidt_coefficients(&state)?;
            out.push(DecompositionElement {
                weight: p,
                state,
                schmidt,
            });
        }
        Ok(out)
    }
}

/// Projection of `x` onto the tangent space of the Stiefel manifold at `u`.
fn tangent(u: &CMatrix, x: &CMatrix) -> CMatrix {
    let uh_x = u.adjoint() * x;
    let sym = (&uh_x + uh_x.adjoint()).scale(0.5);
    x - u * sym
}

/// Real inner product `Re tr(a† b)`.
fn inner(a: &CMatrix, b: &CMatrix) -> f64 {
    a.zip_fold(b, 0.0, |acc, x, y| acc + (x.conj() * y).re)
}

/// `Σ p_i |ψ_i⟩⟨ψ_i|` for the members of a decomposition in `C^d ⊗ C^d`.
pub fn recombine(elements: &[DecompositionElement], d: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d * d, d * d);
    for e in elements {
        let v = e.state.amplitudes();
        m += (v * v.adjoint()).scale(e.weight);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    #[test]
    fn gradient_matches_finite_differences() {
        let point = FamilyPoint::werner(0.7, 2).unwrap();
        let spec = MonotoneSpec::renyi(2.0).unwrap();
        let rho = family_to_density(&point).unwrap();
        let (w, v) = rho.spectrum();
        let c = CMatrix::from_fn(4, 4, |r, k| v[(r, k)] * w[k].sqrt());
        let problem = Problem { spec: &spec, d: 2, c };
        let mut rng = stream(5, 0);
        let u = ginibre(6, 4, &mut rng).qr().q();
        let h = 1e-6;
        for eps in [0.0, 1e-2] {
            let (_, g) = problem.objective(&u, eps, true).unwrap();
            let g = g.unwrap();
            for (i, j) in [(0, 0), (2, 1), (5, 3)] {
                for dir in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
                    let mut up = u.clone();
                    let mut um = u.clone();
                    up[(i, j)] += dir * h;
                    um[(i, j)] -= dir * h;
                    let fd = (problem.objective(&up, eps, false).unwrap().0
                        - problem.objective(&um, eps, false).unwrap().0)
                        / (2.0 * h);
                    let analytic = 2.0 * (g[(i, j)].conj() * dir).re;
                    assert!((fd - analytic).abs() < 1e-6, "eps {eps}: {fd} vs {analytic}");
                }
            }
        }
    }

    #[test]
    fn decompositions_reproduce_the_state() {
        let point = FamilyPoint::isotropic(0.6, 3).unwrap();
        let budget = SearchBudget::new(2, 20, 3);
        let est = roof_upper_bound_by_decompositions(
            &point,
            &MonotoneSpec::vidal(1).unwrap(),
            None,
            &budget,
        )
        .unwrap();
        let Argmin::Decomposition(elements) = &est.argmin else {
            panic!("expected a decomposition");
        };
        let rho = family_to_density(&point).unwrap();
        let diff = (recombine(elements, 3) - rho.matrix()).camax();
        assert!(diff < 1e-10, "{diff}");
        assert!(est.max_violation < 1e-10);
    }

    #[test]
    fn pure_family_state_is_its_own_decomposition() {
        let point = FamilyPoint::isotropic(1.0, 3).unwrap();
        let budget = SearchBudget::new(2, 10, 0);
        let spec = MonotoneSpec::entropy();
        let est = roof_upper_bound_by_decompositions(&point, &spec, None, &budget).unwrap();
        assert!((est.value - 3f64.log2()).abs() < 1e-10);
    }

    #[test]
    fn rejects_small_ensembles() {
        let point = FamilyPoint::werner(0.75, 2).unwrap();
        let budget = SearchBudget::new(1, 1, 0);
        let spec = MonotoneSpec::entropy();
        assert!(roof_upper_bound_by_decompositions(&point, &spec, Some(2), &budget).is_err());
    }
}
