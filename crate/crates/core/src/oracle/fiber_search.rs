//! Minimization of a monotone over the isotropic and Werner fibers.

use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::error::{check_range, domain, Result};
use crate::exec::{map_indexed, stream, Rng};
use crate::monotones::MonotoneSpec;
use crate::optim::{dot, project_nonneg as project, SpherePlane};
use crate::oracle::{best_by, Argmin, OracleEstimate, SearchBudget};
use crate::qcore::fiber::onto_fiber;
use crate::witness::FEASIBILITY_TOL;
use crate::qcore::operators::{expectation_amps, OperatorKind};
use crate::qcore::schmidt::schmidt_of_amplitudes;
use crate::qcore::{fiber::fiber_state_werner_rng, SchmidtVector};
use crate::{CVector, C64};

/// Minimum of `spec` over Schmidt vectors with `Σ√λ_i = √(d·b)`.
///
/// Works in the coordinates `x_i = √λ_i`, where the fiber is the unit sphere
/// cut by the plane `Σx = √(d·b)` and intersected with `x ≥ 0`. Each restart
/// runs projected gradient descent with an Armijo line search from a random
/// point; coordinates that would turn negative are clamped to zero and the
/// remaining ones are projected back onto the fiber.
pub fn min_on_iso_fiber(
    spec: &MonotoneSpec,
    b: f64,
    d: usize,
    budget: &SearchBudget,
) -> Result<OracleEstimate> {
    spec.validate()?;
    budget.validate()?;
    if d < 2 {
        return domain("isotropic fibers need d >= 2");
    }
    check_range("b", b, 1.0 / d as f64, 1.0)?;
    let s = (d as f64 * b).sqrt();
    let chart = SpherePlane::isotropic(b, d);
    let runs = map_indexed(budget.execution, budget.restarts, |r| {
        let mut rng = stream(budget.seed, r as u64);
        descend_iso(spec, &chart, s, budget, &mut rng)
    });
    let runs: Vec<(f64, Vec<f64>)> = runs.into_iter().collect::<Result<_>>()?;
    let violation = |x: &[f64]| {
        (x.iter().sum::<f64>() - s)
            .abs()
            .max((dot(x, x) - 1.0).abs())
            .max(x.iter().fold(0.0f64, |m, &v| m.max(-v)))
    };
    let feasible = |r: &(f64, Vec<f64>)| {
        if violation(&r.1) <= FEASIBILITY_TOL {
            r.0
        } else {
            f64::NAN
        }
    };
    let (value, x) = best_by(runs, feasible, true)
        .ok_or_else(|| crate::Error::Domain("no feasible point found on the fiber".into()))?;
    let violation = violation(&x);
    Ok(OracleEstimate {
        value,
        argmin: Argmin::Schmidt(SchmidtVector::normalized(x.iter().map(|v| v * v).collect())?),
        gap_to_closed_form: None,
        max_violation: violation,
    })
}

fn iso_value(spec: &MonotoneSpec, x: &[f64]) -> Result<f64> {
    let p: Vec<f64> = x.iter().map(|v| v * v).collect();
    spec.evaluate_raw(&p)
}

fn iso_gradient(spec: &MonotoneSpec, x: &[f64]) -> Result<Vec<f64>> {
    let p: Vec<f64> = x.iter().map(|v| v * v).collect();
    let g = spec.gradient(&p)?;
    // Coordinates at zero stay there under a descent step; their partial
    // derivative may be infinite for monotones steep at the origin.
    Ok(g.iter()
        .zip(x)
        .map(|(gi, &xi)| if xi > 0.0 { 2.0 * xi * gi } else { 0.0 })
        .collect())
}

/// Removes the components of `g` along `(1, …, 1)` and along `x − c·1`.
fn tangent(x: &[f64], g: &[f64], s: f64) -> Vec<f64> {
    let d = x.len() as f64;
    let gm = g.iter().sum::<f64>() / d;
    let mut t: Vec<f64> = g.iter().map(|v| v - gm).collect();
    let y: Vec<f64> = x.iter().map(|v| v - s / d).collect();
    let yy = dot(&y, &y);
    if yy > 0.0 {
        let c = dot(&t, &y) / yy;
        for (ti, yi) in t.iter_mut().zip(&y) {
            *ti -= c * yi;
        }
    }
    t
}

fn random_iso_start(chart: &SpherePlane, s: f64, rng: &mut Rng) -> Result<Vec<f64>> {
    let d = chart.dim();
    (0..1000)
        .find_map(|_| {
            let v: Vec<f64> = (0..d - 1).map(|_| rng.sample(StandardNormal)).collect();
            project(&chart.point(&v), s)
        })
        .ok_or_else(|| crate::Error::Domain("could not sample a point on the fiber".into()))
}

/// Iterations between attempts to move onto a face of the fiber.
const DROP_EVERY: usize = 25;

fn descend_iso(
    spec: &MonotoneSpec,
    chart: &SpherePlane,
    s: f64,
    budget: &SearchBudget,
    rng: &mut Rng,
) -> Result<(f64, Vec<f64>)> {
    let mut x = random_iso_start(chart, s, rng)?;
    let mut fx = iso_value(spec, &x)?;
    let max_step = 10.0 * budget.initial_step;
    let mut step = budget.initial_step;
    for it in 0..budget.iterations {
        if it % DROP_EVERY == DROP_EVERY - 1 {
            if let Some((xn, fnew)) = drop_coordinate(spec, &x, fx, s)? {
                x = xn;
                fx = fnew;
            }
        }
        let g = iso_gradient(spec, &x)?;
        let t = tangent(&x, &g, s);
        let mut accepted = false;
        let mut trial = step;
        for _ in 0..40 {
            let y: Vec<f64> = x.iter().zip(&t).map(|(xi, ti)| xi - trial * ti).collect();
            if let Some(xn) = project(&y, s) {
                let fnew = iso_value(spec, &xn)?;
                let moved: f64 = xn.iter().zip(&x).map(|(a, b)| (a - b).powi(2)).sum();
                if fnew <= fx - 1e-4 * moved / trial && fnew < fx {
                    x = xn;
                    fx = fnew;
                    accepted = true;
                    break;
                }
            }
            trial *= budget.decay;
        }
        if accepted {
            step = (trial / budget.decay).min(max_step);
            continue;
        }
        match drop_coordinate(spec, &x, fx, s)? {
            Some((xn, fnew)) => {
                x = xn;
                fx = fnew;
                step = budget.initial_step;
            }
            None => break,
        }
    }
    Ok((fx, x))
}

/// Tries zeroing each positive coordinate and projecting the remaining
/// support back onto the fiber; returns the best strict improvement. Line searches stall next to
/// faces where the monotone is steep, and this jumps onto the face.
fn drop_coordinate(spec: &MonotoneSpec, x: &[f64], fx: f64, s: f64) -> Result<Option<(Vec<f64>, f64)>> {
    let mut best: Option<(Vec<f64>, f64)> = None;
    for i in 0..x.len() {
        if x[i] <= 0.0 {
            continue;
        }
        let support: Vec<usize> = (0..x.len()).filter(|&j| j != i && x[j] > 0.0).collect();
        let sub: Vec<f64> = support.iter().map(|&j| x[j]).collect();
        let Some(projected) = project(&sub, s) else { continue };
        let mut xn = vec![0.0; x.len()];
        for (&j, v) in support.iter().zip(projected) {
            xn[j] = v;
        }
        let fnew = iso_value(spec, &xn)?;
        if fnew < best.as_ref().map_or(fx, |b| b.1) {
            best = Some((xn, fnew));
        }
    }
    Ok(best)
}

/// Minimum of `spec` over pure states of `C^d ⊗ C^d` with `⟨W₋⟩ = a`.
///
/// Each restart draws a random fiber state and runs a (1+1) evolution
/// strategy: Gaussian perturbations of the amplitudes are pulled back into
/// the fiber by rescaling their antisymmetric and symmetric parts, and are
/// kept when they lower the monotone. The step follows the one-fifth rule.
pub fn min_on_werner_fiber(
    spec: &MonotoneSpec,
    a: f64,
    d: usize,
    budget: &SearchBudget,
) -> Result<OracleEstimate> {
    spec.validate()?;
    budget.validate()?;
    check_range("a", a, 0.0, 1.0)?;
    if d < 2 {
        return domain("Werner fibers need d >= 2");
    }
    let runs = map_indexed(budget.execution, budget.restarts, |r| {
        let mut rng = stream(budget.seed, r as u64);
        evolve_werner(spec, a, d, budget, &mut rng)
    });
    let runs: Vec<(f64, CVector)> = runs.into_iter().collect::<Result<_>>()?;
    let (value, amps) = best_by(runs, |r| r.0, true)
        .ok_or_else(|| crate::Error::Domain("no finite value on the fiber".into()))?;
    let violation = (expectation_amps(OperatorKind::WMinus, d, &amps) - a)
        .abs()
        .max((amps.norm() - 1.0).abs());
    Ok(OracleEstimate {
        value,
        argmin: Argmin::Schmidt(schmidt_of_amplitudes(d, &amps)?),
        gap_to_closed_form: None,
        max_violation: violation,
    })
}

fn evolve_werner(
    spec: &MonotoneSpec,
    a: f64,
    d: usize,
    budget: &SearchBudget,
    rng: &mut Rng,
) -> Result<(f64, CVector)> {
    let eval = |v: &CVector| -> Result<f64> { spec.evaluate(&schmidt_of_amplitudes(d, v)?) };
    let mut psi = fiber_state_werner_rng(a, d, rng)?.amplitudes().clone();
    let mut fx = eval(&psi)?;
    let mut sigma = budget.initial_step;
    let grow = (1.0 / 3.0f64).exp();
    let shrink = budget.decay.powf(1.0 / 12.0);
    for _ in 0..budget.iterations {
        let noise = CVector::from_fn(d * d, |_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let trial = &psi + noise.scale(sigma / (2.0 * (d * d) as f64).sqrt());
        let Some(candidate) = onto_fiber(OperatorKind::WMinus, a, d, &trial) else {
            sigma *= shrink;
            continue;
        };
        let fc = eval(&candidate)?;
        if fc <= fx {
            psi = candidate;
            fx = fc;
            sigma = (sigma * grow).min(1.0);
        } else {
            sigma = (sigma * shrink).max(1e-12);
        }
    }
    Ok((fx, psi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_lands_on_the_fiber() {
        let s = (3.0f64 * 0.7).sqrt();
        let x = project(&[2.0, -0.5, 0.1], s).unwrap();
        assert!((x.iter().sum::<f64>() - s).abs() < 1e-12);
        assert!((dot(&x, &x) - 1.0).abs() < 1e-12);
        assert!(x.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn maximally_entangled_end_of_the_fiber() {
        let budget = SearchBudget::new(4, 50, 1);
        let est = min_on_iso_fiber(&MonotoneSpec::entropy(), 1.0, 3, &budget).unwrap();
        assert!((est.value - 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn separable_werner_fiber_reaches_zero() {
        let budget = SearchBudget::new(8, 500, 2);
        let est = min_on_werner_fiber(&MonotoneSpec::vidal(1).unwrap(), 0.5, 2, &budget).unwrap();
        assert!(est.value < 1e-6, "{}", est.value);
        assert!(est.max_violation < 1e-10);
    }
}
