//! No-go witness for converting pure states into isotropic states.
//!
//! For a source Schmidt vector `λ` and a target `ρ_iso(b)` the witness is
//! `W(λ, b) = max_μ min_k f_k(μ)` with `f_k(μ) = Σ_{i≤k} μ_i − Σ_{i≤k} λ_i`,
//! the maximum running over Schmidt vectors with `Σ√μ_i = √(d·b)`.
//!
//! The maximization splits into one subproblem per `k ∈ {1, …, d−1}`:
//! maximize `f_k` over the part of the fiber where `f_k` is the smallest of
//! the `f_ℓ`. Subtracting `f_k` from `f_ℓ` turns that region into
//!
//! - `Σ_{i=ℓ+1..k} μ_i ≤ Σ_{i=ℓ+1..k} λ_i` for `ℓ < k`,
//! - `Σ_{i=k+1..ℓ} λ_i ≤ Σ_{i=k+1..ℓ} μ_i` for `ℓ > k`,
//!
//! and the witness is the largest subproblem optimum. Each subproblem is
//! solved in square-root coordinates `x_i = √μ_i`, where the fiber is a
//! sphere-plane intersection, by an augmented Lagrangian over the ordering,
//! sign and region constraints with quasi-Newton inner solves and multiple
//! starts.

use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_range, domain, structural, Error, Result};
use crate::exec::{map_indexed, stream, Execution};
use crate::optim::{bfgs, norm2, norm_inf, SpherePlane};
use crate::qcore::SchmidtVector;
use crate::witness::{SolverDiagnostics, Verdict, WitnessClass, WitnessResult, BOUNDARY_TOL};

/// Largest constraint violation accepted at a subproblem optimum.
pub const FEASIBILITY_TOL: f64 = 1e-8;

/// Settings of the structured witness solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoWitnessOptions {
    /// Local solves per subproblem.
    pub starts: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for IsoWitnessOptions {
    fn default() -> Self {
        IsoWitnessOptions {
            starts: 32,
            seed: 0x5EED,
            execution: Execution::default(),
        }
    }
}

/// The objectives `f_k(μ) = Σ_{i≤k} μ_i − Σ_{i≤k} λ_i` for `k = 1, …, d−1`,
/// with both vectors sorted in descending order first.
pub fn witness_objectives(mu: &[f64], lambda: &[f64]) -> Vec<f64> {
    let mut mu = mu.to_vec();
    let mut lambda = lambda.to_vec();
    crate::qcore::types::sort_desc(&mut mu);
    crate::qcore::types::sort_desc(&mut lambda);
    let d = mu.len().max(lambda.len());
    mu.resize(d, 0.0);
    lambda.resize(d, 0.0);
    let mut acc = 0.0;
    (0..d.saturating_sub(1))
        .map(|i| {
            acc += mu[i] - lambda[i];
            acc
        })
        .collect()
}

/// No-go witness `W(λ, b)` for converting a pure state with Schmidt vector
/// `lambda` into `ρ_iso(b)` on `C^d ⊗ C^d`, with default solver settings.
pub fn pure_to_isotropic_nogo(lambda: &SchmidtVector, b: f64, d: usize) -> Result<WitnessResult> {
    pure_to_isotropic_nogo_with(lambda, b, d, &IsoWitnessOptions::default())
}

/// [`pure_to_isotropic_nogo`] with explicit solver settings.
///
/// Targets with `b < 1/d` are separable and reachable from every source; the
/// result is then `Go` with value `min_k E_k(λ) = λ_d`.
pub fn pure_to_isotropic_nogo_with(
    lambda: &SchmidtVector,
    b: f64,
    d: usize,
    options: &IsoWitnessOptions,
) -> Result<WitnessResult> {
    if d < 2 {
        return domain("isotropic witness needs d >= 2");
    }
    if lambda.d() > d {
        return structural(format!("Schmidt vector of length {} does not fit d = {d}", lambda.d()));
    }
    if options.starts == 0 {
        return domain("the witness solver needs at least one start");
    }
    check_range("b", b, 0.0, 1.0)?;
    let lam = lambda.padded(d).into_vec();
    if b < 1.0 / d as f64 {
        let value = lam[d - 1];
        return Ok(WitnessResult {
            value,
            verdict: Verdict::Go,
            class: WitnessClass::NoGo,
            per_k: Vec::new(),
            optimizer: Some(SchmidtVector::product(d)),
            diagnostics: SolverDiagnostics {
                boundary: value.abs() <= BOUNDARY_TOL,
                ..SolverDiagnostics::default()
            },
        });
    }
    let chart = SpherePlane::isotropic(b, d);
    if d == 2 || chart.radius() < 1e-12 {
        return Ok(single_point(&chart, &lam));
    }

    let starts = options.starts;
    let jobs = map_indexed(options.execution, (d - 1) * starts, |job| {
        let k = job / starts + 1;
        let index = job % starts;
        let v0 = start_point(&chart, k, index, options.seed, job as u64);
        solve_subproblem(&chart, &lam, k, v0)
    });

    let mut best: Vec<Option<&LocalSolve>> = vec![None; d - 1];
    for solve in &jobs {
        if solve.violation > FEASIBILITY_TOL {
            continue;
        }
        let slot = &mut best[solve.k - 1];
        if slot.as_ref().map_or(true, |b| solve.value > b.value) {
            *slot = Some(solve);
        }
    }
    let per_k: Vec<Option<f64>> = best.iter().map(|s| s.map(|s| s.value)).collect();
    let winner = best
        .iter()
        .flatten()
        .fold(None::<&LocalSolve>, |acc, s| match acc {
            Some(a) if a.value >= s.value => Some(a),
            _ => Some(s),
        });
    let Some(winner) = winner else {
        let violation = jobs.iter().map(|s| s.violation).fold(f64::INFINITY, f64::min);
        return Err(Error::Solver {
            message: format!("no feasible point found for any subproblem at b = {b}, d = {d}"),
            violation,
            restarts: jobs.len(),
        });
    };
    let chosen = best.iter().flatten();
    let kkt_residual = chosen.clone().map(|s| s.kkt).fold(0.0, f64::max);
    let max_violation = chosen.map(|s| s.violation).fold(0.0, f64::max);
    let value = winner.value;
    Ok(WitnessResult {
        value,
        verdict: nogo_verdict(value),
        class: WitnessClass::NoGo,
        per_k,
        optimizer: Some(squares_sorted(&winner.x)?),
        diagnostics: SolverDiagnostics {
            kkt_residual,
            max_violation,
            restarts: jobs.len(),
            boundary: value.abs() <= BOUNDARY_TOL,
        },
    })
}

fn nogo_verdict(value: f64) -> Verdict {
    if value < -BOUNDARY_TOL {
        Verdict::NoGo
    } else {
        Verdict::Inconclusive
    }
}

fn squares_sorted(x: &[f64]) -> Result<SchmidtVector> {
    SchmidtVector::normalized(x.iter().map(|v| v * v).collect())
}

/// Fibers that contain a single sorted Schmidt vector (`d = 2` or `b = 1`).
fn single_point(chart: &SpherePlane, lam: &[f64]) -> WitnessResult {
    let d = chart.dim();
    let mut e = vec![0.0; d - 1];
    e[0] = 1.0;
    let mut mu: Vec<f64> = chart.point(&e).iter().map(|v| v * v).collect();
    crate::qcore::types::sort_desc(&mut mu);
    let f = witness_objectives(&mu, lam);
    let value = f.iter().copied().fold(f64::INFINITY, f64::min);
    let per_k = f
        .iter()
        .map(|&fk| (fk <= value + FEASIBILITY_TOL).then_some(fk))
        .collect();
    WitnessResult {
        value,
        verdict: nogo_verdict(value),
        class: WitnessClass::NoGo,
        per_k,
        optimizer: SchmidtVector::normalized(mu).ok(),
        diagnostics: SolverDiagnostics {
            restarts: 1,
            boundary: value.abs() <= BOUNDARY_TOL,
            ..SolverDiagnostics::default()
        },
    }
}

/// Start `index` of subproblem `k`: two-level vectors with `j` leading
/// entries for the first `d − 1` starts, then Gaussian chart directions.
fn start_point(chart: &SpherePlane, k: usize, index: usize, seed: u64, job: u64) -> Vec<f64> {
    let d = chart.dim();
    if index < d - 1 {
        let j = (index + k - 1) % (d - 1) + 1;
        let x = two_level(chart, j);
        let v = chart.coords(&x);
        if norm2(&v) > 0.0 {
            return v;
        }
    }
    let mut rng = stream(seed, job);
    loop {
        let v: Vec<f64> = (0..d - 1).map(|_| StandardNormal.sample(&mut rng)).collect();
        if norm2(&v) > 1e-8 {
            return v;
        }
    }
}

/// Square roots of the two-level Schmidt vector with `j` equal leading
/// entries and `d − j` equal trailing entries on the fiber.
fn two_level(chart: &SpherePlane, j: usize) -> Vec<f64> {
    let d = chart.dim();
    let df = d as f64;
    let jf = j as f64;
    let r = chart.radius();
    let p = chart.center() + r * ((df - jf) / (df * jf)).sqrt();
    let q = chart.center() - r * (jf / (df * (df - jf))).sqrt();
    (0..d).map(|i| if i < j { p } else { q }).collect()
}

#[derive(Debug, Clone)]
struct LocalSolve {
    k: usize,
    value: f64,
    x: Vec<f64>,
    violation: f64,
    kkt: f64,
}

/// A constraint `c(x) ≤ 0` with a sparse gradient.
struct Constraint {
    value: f64,
    grad: Vec<(usize, f64)>,
}

/// Ordering, sign and region constraints of subproblem `k` at `x`.
fn constraints(x: &[f64], lam: &[f64], k: usize) -> Vec<Constraint> {
    let d = x.len();
    let mut out = Vec::with_capacity(2 * d);
    for i in 0..d - 1 {
        out.push(Constraint {
            value: x[i + 1] - x[i],
            grad: vec![(i + 1, 1.0), (i, -1.0)],
        });
    }
    out.push(Constraint {
        value: -x[d - 1],
        grad: vec![(d - 1, -1.0)],
    });
    for l in 1..k {
        out.push(Constraint {
            value: (l..k).map(|i| x[i] * x[i] - lam[i]).sum(),
            grad: (l..k).map(|i| (i, 2.0 * x[i])).collect(),
        });
    }
    for l in k + 1..d {
        out.push(Constraint {
            value: (k..l).map(|i| lam[i] - x[i] * x[i]).sum(),
            grad: (k..l).map(|i| (i, -2.0 * x[i])).collect(),
        });
    }
    out
}

fn objective(x: &[f64], lam: &[f64], k: usize) -> f64 {
    (0..k).map(|i| x[i] * x[i] - lam[i]).sum()
}

/// Maximizes `f_k` over region `k` of the fiber from the chart point `v0`.
fn solve_subproblem(chart: &SpherePlane, lam: &[f64], k: usize, v0: Vec<f64>) -> LocalSolve {
    let d = chart.dim();
    let m = constraints(&chart.point(&v0), lam, k).len();
    let mut y = vec![0.0; m];
    let mut rho = 10.0;
    let mut v = v0;
    let mut prev_violation = f64::INFINITY;
    let mut kkt = f64::INFINITY;
    let mut violation = f64::INFINITY;

    for _ in 0..50 {
        let merit = |v: &[f64]| {
            let x = chart.point(v);
            let mut gx = vec![0.0; d];
            let mut val = -objective(&x, lam, k);
            for (i, g) in gx.iter_mut().enumerate().take(k) {
                *g = -2.0 * x[i];
            }
            for (c, yj) in constraints(&x, lam, k).iter().zip(&y) {
                let t = yj + rho * c.value;
                if t > 0.0 {
                    val += (t * t - yj * yj) / (2.0 * rho);
                    for &(i, gi) in &c.grad {
                        gx[i] += t * gi;
                    }
                } else {
                    val -= yj * yj / (2.0 * rho);
                }
            }
            (val, chart.pullback(v, &gx))
        };
        let found = bfgs(merit, v, 400, 1e-13);
        let n = norm2(&found.x);
        v = found.x.iter().map(|vi| vi / n).collect();

        let x = chart.point(&v);
        let cs = constraints(&x, lam, k);
        violation = cs.iter().map(|c| c.value.max(0.0)).fold(0.0, f64::max);
        let mut complementarity: f64 = 0.0;
        for (c, yj) in cs.iter().zip(y.iter_mut()) {
            *yj = (*yj + rho * c.value).max(0.0);
            complementarity = complementarity.max((*yj * c.value).abs());
        }
        let mut gx = vec![0.0; d];
        for (i, g) in gx.iter_mut().enumerate().take(k) {
            *g = -2.0 * x[i];
        }
        for (c, yj) in cs.iter().zip(&y) {
            for &(i, gi) in &c.grad {
                gx[i] += yj * gi;
            }
        }
        let stationarity = norm_inf(&chart.pullback(&v, &gx));
        kkt = stationarity.max(complementarity);
        if violation <= 1e-12 && kkt <= 1e-10 {
            break;
        }
        if violation > 0.25 * prev_violation {
            rho = (rho * 10.0).min(1e10);
        }
        prev_violation = violation;
    }
    let x = chart.point(&v);
    LocalSolve {
        k,
        value: objective(&x, lam, k),
        x,
        violation,
        kkt,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: &[f64]) -> SchmidtVector {
        SchmidtVector::from_unsorted(v.to_vec()).unwrap()
    }

    fn lam() -> SchmidtVector {
        sv(&[0.6, 0.3, 0.1])
    }

    #[test]
    fn objectives_are_partial_sum_differences() {
        let f = witness_objectives(&[0.2, 0.5, 0.3], &[0.6, 0.3, 0.1]);
        assert!((f[0] + 0.1).abs() < 1e-15);
        assert!((f[1] + 0.1).abs() < 1e-15);
    }

    #[test]
    fn equal_mixture_at_b_one_is_forced() {
        let r = pure_to_isotropic_nogo(&lam(), 1.0, 3).unwrap();
        assert!((r.value - (1.0 / 3.0 - 0.6)).abs() < 1e-12);
        assert_eq!(r.verdict, Verdict::NoGo);
    }

    #[test]
    fn two_dimensional_case_has_a_closed_form() {
        let l = sv(&[0.7, 0.3]);
        for b in [0.5, 0.6, 0.75, 0.9, 1.0] {
            let r = pure_to_isotropic_nogo(&l, b, 2).unwrap();
            let expected = 0.3 - 0.5 * ((1.0 - b).sqrt() - b.sqrt()).powi(2);
            assert!((r.value - expected).abs() < 1e-12, "b = {b}");
        }
    }

    #[test]
    fn values_on_the_three_level_example() {
        for (b, expected) in [(0.5, 0.1), (0.9, -0.00505), (0.95, -0.0703)] {
            let r = pure_to_isotropic_nogo(&lam(), b, 3).unwrap();
            assert!((r.value - expected).abs() < 2e-4, "b = {b}: {}", r.value);
            assert!(r.diagnostics.max_violation <= FEASIBILITY_TOL);
            assert!(r.is_consistent());
        }
        let r = pure_to_isotropic_nogo(&lam(), 0.95, 3).unwrap();
        assert_eq!(r.verdict, Verdict::NoGo);
        assert_eq!(r.per_k.len(), 2);
    }

    #[test]
    fn separable_targets_are_reachable() {
        let r = pure_to_isotropic_nogo(&lam(), 0.2, 3).unwrap();
        assert_eq!(r.verdict, Verdict::Go);
    }

    #[test]
    fn uniform_source_is_never_ruled_out() {
        let u = SchmidtVector::uniform(4);
        for b in [0.25, 0.5, 0.8, 0.99, 1.0] {
            let r = pure_to_isotropic_nogo(&u, b, 4).unwrap();
            assert!(r.value >= -1e-8, "b = {b}: {}", r.value);
            assert_eq!(r.verdict, Verdict::Inconclusive);
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let mut opts = IsoWitnessOptions::default();
        let l = sv(&[0.4, 0.3, 0.2, 0.1]);
        opts.execution = Execution::Sequential;
        let a = pure_to_isotropic_nogo_with(&l, 0.8, 4, &opts).unwrap();
        opts.execution = Execution::Parallel;
        let b = pure_to_isotropic_nogo_with(&l, 0.8, 4, &opts).unwrap();
        assert_eq!(a, b);
    }
}
