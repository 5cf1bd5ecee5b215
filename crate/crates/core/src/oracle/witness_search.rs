//! Direct random search for the isotropic no-go witness.

use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::error::{check_range, domain, structural, Result};
use crate::exec::{map_indexed, stream, Rng};
use crate::optim::{project_nonneg, SpherePlane};
use crate::oracle::{best_by, Argmin, OracleEstimate, SearchBudget};
use crate::qcore::SchmidtVector;
use crate::witness::witness_objectives;

/// Lower bound on `max_μ min_k f_k(μ)` over Schmidt vectors with
/// `Σ√μ_i = √(d·b)`, found without splitting into subproblems.
///
/// Each restart runs a (1+1) evolution strategy in square-root coordinates:
/// Gaussian perturbations are mapped back onto the fiber, with negative
/// coordinates clamped to zero, and kept when they do not lower the objective.
pub fn witness_oracle(
    lambda: &SchmidtVector,
    b: f64,
    d: usize,
    budget: &SearchBudget,
) -> Result<OracleEstimate> {
    budget.validate()?;
    if d < 2 {
        return domain("isotropic witness needs d >= 2");
    }
    if lambda.d() > d {
        return structural(format!("Schmidt vector of length {} does not fit d = {d}", lambda.d()));
    }
    check_range("b", b, 1.0 / d as f64, 1.0)?;
    let lam = lambda.padded(d).into_vec();
    let s = (d as f64 * b).sqrt();
    let chart = SpherePlane::isotropic(b, d);
    let objective = |x: &[f64]| -> f64 {
        let mu: Vec<f64> = x.iter().map(|v| v * v).collect();
        witness_objectives(&mu, &lam)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    };

    let runs = map_indexed(budget.execution, budget.restarts, |r| {
        let mut rng = stream(budget.seed, r as u64);
        evolve(&chart, s, &objective, budget, &mut rng)
    });
    let (value, x) = best_by(runs, |r| r.0, false)
        .ok_or_else(|| crate::Error::Domain("no feasible point on the fiber".into()))?;
    let violation = (x.iter().sum::<f64>() - s)
        .abs()
        .max((x.iter().map(|v| v * v).sum::<f64>() - 1.0).abs());
    Ok(OracleEstimate {
        value,
        argmin: Argmin::Schmidt(SchmidtVector::normalized(x.iter().map(|v| v * v).collect())?),
        gap_to_closed_form: None,
        max_violation: violation,
    })
}

fn evolve(
    chart: &SpherePlane,
    s: f64,
    objective: &impl Fn(&[f64]) -> f64,
    budget: &SearchBudget,
    rng: &mut Rng,
) -> (f64, Vec<f64>) {
    let d = chart.dim();
    let start = (0..1000).find_map(|_| {
        let v: Vec<f64> = (0..d - 1).map(|_| rng.sample(StandardNormal)).collect();
        project_nonneg(&chart.point(&v), s)
    });
    let Some(mut x) = start else {
        return (f64::NEG_INFINITY, vec![0.0; d]);
    };
    let mut fx = objective(&x);
    let mut sigma = budget.initial_step;
    let grow = (1.0 / 3.0f64).exp();
    let shrink = budget.decay.powf(1.0 / 12.0);
    for _ in 0..budget.iterations {
        let trial: Vec<f64> = x
            .iter()
            .map(|xi| xi + sigma * rng.sample::<f64, _>(StandardNormal))
            .collect();
        let candidate = project_nonneg(&trial, s);
        let ft = candidate.as_deref().map_or(f64::NEG_INFINITY, objective);
        if let (Some(c), true) = (candidate, ft >= fx) {
            x = c;
            fx = ft;
            sigma = (sigma * grow).min(2.0);
        } else {
            sigma = (sigma * shrink).max(1e-14);
        }
    }
    (fx, x)
}
