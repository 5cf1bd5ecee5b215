//! The invariant suite behind `symroof verify`.
//!
//! Every check compares a closed form with an independent computation: a
//! numerical Schmidt decomposition, a brute-force oracle, a Monte Carlo
//! average or a shape test on a dense grid. A check reports the worst
//! deviation it saw and passes when that deviation is at most its tolerance.
//! Reports contain no timings, so equal seeds give identical reports.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt::Write as _;

use rand::Rng as _;
use rand_distr::Exp1;

use crate::error::Result;
use crate::exec::{stream, Rng};
use crate::families::{family_to_density, monte_carlo_twirl, twirl_density, FamilyPoint};
use crate::monotones::{binary_entropy, MonotoneSpec};
use crate::oracle::{
    min_on_iso_fiber, min_on_werner_fiber, roof_upper_bound_by_decompositions, witness_oracle,
    SearchBudget,
};
use crate::qcore::fiber::fiber_state_werner_rng;
use crate::qcore::haar::{random_density, random_pure_state};
use crate::qcore::schmidt::schmidt_coefficients;
use crate::qcore::{majorizes, DensityMatrix, SchmidtVector};
use crate::roofs::extension::{
    extended_roof, orbit_membership_certificate, region_membership, OrbitCertificate, Region,
};
use crate::roofs::isotropic::{
    iso_c2_pre_envelope, iso_c2_roof, iso_cd_pre_envelope, iso_cd_roof, iso_lower_bound_roof,
    iso_minimizer, iso_pre_envelope, iso_vidal_roof, roof_isotropic,
};
use crate::roofs::werner::{
    renyi_werner, roof_werner, roof_werner_by_envelope, werner_minimizer, werner_minimizer_state,
};
use crate::witness::{
    pure_to_isotropic_nogo, pure_to_two_qubit, pure_to_werner, Verdict, FEASIBILITY_TOL,
};
use crate::SymmetryGroup;

/// Size of a verification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    /// Reduced grids and budgets.
    Fast,
    /// The full grids at the default oracle budget.
    Full,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Fast => "fast",
            Suite::Full => "full",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fast" => Ok(Suite::Fast),
            "full" => Ok(Suite::Full),
            other => Err(format!("unknown suite `{other}` (expected fast or full)")),
        }
    }
}

/// Outcome of one invariant check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub id: &'static str,
    pub description: &'static str,
    pub passed: bool,
    /// Largest deviation observed; `NaN` when the check could not run.
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

/// All check outcomes of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }

    /// Fixed-width pass/fail table.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        let _ = writeln!(out, "suite {} seed {}", self.suite.name(), self.seed);
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{}  {:<width$}  worst {:>10.3e}  tol {:>8.1e}  {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.id,
                c.worst,
                c.tolerance,
                c.detail,
            );
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), failed);
        out
    }
}

type Gaps = Vec<(f64, String)>;

/// Grid sizes and budgets of a suite.
struct Scale {
    suite: Suite,
    seed: u64,
    samples: usize,
    random_cases: usize,
    twirl_samples: usize,
    twirl_states: usize,
    witness_grid: usize,
    oracle_grid: usize,
    vidal_dims: &'static [usize],
    budget: SearchBudget,
    /// Signed gaps shared by the two sides of a sandwich check.
    gaps: RefCell<HashMap<&'static str, Result<Gaps>>>,
}

impl Scale {
    fn new(suite: Suite, seed: u64) -> Self {
        match suite {
            Suite::Fast => Scale {
                suite,
                seed,
                samples: 200,
                random_cases: 200,
                twirl_samples: 2000,
                twirl_states: 4,
                witness_grid: 9,
                oracle_grid: 6,
                vidal_dims: &[3, 4],
                budget: SearchBudget::new(16, 600, seed),
                gaps: RefCell::default(),
            },
            Suite::Full => Scale {
                suite,
                seed,
                samples: 1000,
                random_cases: 500,
                twirl_samples: 10_000,
                twirl_states: 10,
                witness_grid: 31,
                oracle_grid: 21,
                vidal_dims: &[3, 4, 5, 6],
                budget: SearchBudget {
                    seed,
                    ..SearchBudget::default()
                },
                gaps: RefCell::default(),
            },
        }
    }

    fn rng(&self, salt: u64) -> Rng {
        stream(self.seed, salt)
    }

    fn gaps(&self, key: &'static str, compute: fn(&Scale) -> Result<Gaps>) -> Result<Gaps> {
        if let Some(g) = self.gaps.borrow().get(key) {
            return g.clone();
        }
        let g = compute(self);
        self.gaps.borrow_mut().insert(key, g.clone());
        g
    }
}

type Measured = Result<(f64, String)>;

struct CheckDef {
    id: &'static str,
    description: &'static str,
    tolerance: f64,
    run: fn(&Scale) -> Measured,
}

const CHECKS: &[CheckDef] = &[
    CheckDef {
        id: "werner-eof",
        description: "Werner entanglement of formation against the binary entropy",
        tolerance: 1e-10,
        run: werner_eof,
    },
    CheckDef {
        id: "werner-vidal",
        description: "Vidal roofs on Werner states",
        tolerance: 1e-10,
        run: werner_vidal,
    },
    CheckDef {
        id: "renyi-werner-shape",
        description: "Rényi pre-envelope convexity (α > 1) and concavity (α < 1/2)",
        tolerance: 1e-9,
        run: renyi_shape,
    },
    CheckDef {
        id: "renyi-small-alpha-envelope",
        description: "Rényi α < 1/2 roof is max(0, 2a − 1) through the envelope",
        tolerance: 1e-6,
        run: renyi_small_alpha,
    },
    CheckDef {
        id: "iso-vidal-zeros",
        description: "isotropic Vidal roofs vanish at b = k/d",
        tolerance: 1e-12,
        run: iso_vidal_zeros,
    },
    CheckDef {
        id: "iso-vidal-oracle-gap",
        description: "isotropic Vidal fiber oracle approaches the closed form",
        tolerance: 1e-5,
        run: iso_vidal_gap,
    },
    CheckDef {
        id: "iso-vidal-oracle-undercut",
        description: "isotropic Vidal fiber oracle never undercuts the closed form",
        tolerance: 1e-6,
        run: iso_vidal_undercut,
    },
    CheckDef {
        id: "iso-fiber-oracle-gap",
        description: "isotropic fiber minima of entropies and concurrences",
        tolerance: 1e-5,
        run: iso_fiber_gap,
    },
    CheckDef {
        id: "iso-fiber-oracle-undercut",
        description: "isotropic fiber oracle never undercuts the fiber minima",
        tolerance: 1e-6,
        run: iso_fiber_undercut,
    },
    CheckDef {
        id: "concurrence-roofs",
        description: "2- and G-concurrence roofs on isotropic states",
        tolerance: 1e-10,
        run: concurrence_roofs,
    },
    CheckDef {
        id: "concurrence-pre-envelope-concave",
        description: "concurrence fiber minima are concave on the entangled interval",
        tolerance: 1e-9,
        run: concurrence_concave,
    },
    CheckDef {
        id: "lower-bound-consistency",
        description: "E(λ^β) stays below the fiber minimum and the fiber oracle",
        tolerance: 1e-6,
        run: lower_bound_consistency,
    },
    CheckDef {
        id: "werner-fiber-majorization",
        description: "largest Schmidt coefficient on Werner fibers is at most 1/2 + √(a(1−a))",
        tolerance: 1e-9,
        run: werner_fiber_majorization,
    },
    CheckDef {
        id: "werner-fiber-oracle-gap",
        description: "Werner fiber oracle approaches E(ψ_a)",
        tolerance: 1e-5,
        run: werner_fiber_gap,
    },
    CheckDef {
        id: "werner-fiber-oracle-undercut",
        description: "Werner fiber oracle never undercuts E(ψ_a)",
        tolerance: 1e-6,
        run: werner_fiber_undercut,
    },
    CheckDef {
        id: "twirl-monte-carlo",
        description: "Haar-averaged twirls match the projection formulas",
        tolerance: f64::NAN,
        run: twirl_monte_carlo,
    },
    CheckDef {
        id: "twirl-idempotent",
        description: "twirling a twirled state changes nothing",
        tolerance: 1e-12,
        run: twirl_idempotent,
    },
    CheckDef {
        id: "orbit-certificates",
        description: "orbit unitaries reproduce the boundary expectation values",
        tolerance: 1e-10,
        run: orbit_certificates,
    },
    CheckDef {
        id: "roof-fiber-constancy",
        description: "extended roofs are constant along covered fibers",
        tolerance: 1e-12,
        run: roof_fiber_constancy,
    },
    CheckDef {
        id: "witness-werner-majorization",
        description: "Werner witness verdicts agree with majorization (mismatches)",
        tolerance: 0.0,
        run: witness_werner_majorization,
    },
    CheckDef {
        id: "witness-two-qubit-pure",
        description: "two-qubit witness on pure targets agrees with majorization (mismatches)",
        tolerance: 0.0,
        run: witness_two_qubit_pure,
    },
    CheckDef {
        id: "witness-iso-d2",
        description: "isotropic witness at d = 2 against its single-subproblem closed form",
        tolerance: 1e-8,
        run: witness_iso_d2,
    },
    CheckDef {
        id: "witness-iso-monotone",
        description: "isotropic witness is non-increasing in b",
        tolerance: 1e-8,
        run: witness_iso_monotone,
    },
    CheckDef {
        id: "witness-iso-feasibility",
        description: "reported subproblem optima satisfy their constraints",
        tolerance: FEASIBILITY_TOL,
        run: witness_iso_feasibility,
    },
    CheckDef {
        id: "witness-iso-oracle-agreement",
        description: "structured witness solver agrees with direct random search",
        tolerance: 1e-4,
        run: witness_iso_agreement,
    },
    CheckDef {
        id: "witness-iso-oracle-soundness",
        description: "direct random search never beats the structured solver",
        tolerance: 1e-6,
        run: witness_iso_soundness,
    },
    CheckDef {
        id: "witness-crossing",
        description: "zero crossing of W((0.6, 0.3, 0.1), b) at d = 3 lies in [0.890, 0.900]",
        tolerance: 0.0,
        run: witness_crossing,
    },
    CheckDef {
        id: "decomposition-gap",
        description: "decomposition search approaches the closed-form roofs",
        tolerance: 1e-3,
        run: decomposition_gap,
    },
    CheckDef {
        id: "decomposition-undercut",
        description: "decomposition search never undercuts the closed-form roofs",
        tolerance: 1e-6,
        run: decomposition_undercut,
    },
];

/// Identifiers of all checks, in report order.
pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.id).collect()
}

/// Runs every check of `suite` with random streams derived from `seed`.
pub fn run_suite(suite: Suite, seed: u64) -> VerifyReport {
    run_selected(suite, seed, |_| true)
}

/// Runs the checks whose identifier satisfies `select`.
pub fn run_selected(suite: Suite, seed: u64, select: impl Fn(&str) -> bool) -> VerifyReport {
    let scale = Scale::new(suite, seed);
    let checks = CHECKS
        .iter()
        .filter(|c| select(c.id))
        .map(|c| {
            let tolerance = if c.id == "twirl-monte-carlo" {
                twirl_tolerance(&scale)
            } else {
                c.tolerance
            };
            match (c.run)(&scale) {
                Ok((worst, detail)) => CheckResult {
                    id: c.id,
                    description: c.description,
                    passed: worst <= tolerance,
                    worst,
                    tolerance,
                    detail,
                },
                Err(e) => CheckResult {
                    id: c.id,
                    description: c.description,
                    passed: false,
                    worst: f64::NAN,
                    tolerance,
                    detail: format!("error: {e}"),
                },
            }
        })
        .collect();
    VerifyReport {
        suite,
        seed,
        checks,
    }
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

fn root_a(a: f64) -> f64 {
    (a * (1.0 - a)).max(0.0).sqrt()
}

/// Tracks the largest value together with a description of where it occurred.
struct Worst {
    value: f64,
    at: String,
}

impl Worst {
    fn new() -> Self {
        Worst {
            value: f64::NEG_INFINITY,
            at: String::new(),
        }
    }

    fn see(&mut self, v: f64, at: impl FnOnce() -> String) {
        if v > self.value || v.is_nan() {
            self.value = v;
            self.at = at();
        }
    }

    fn finish(self) -> (f64, String) {
        (self.value, self.at)
    }
}

fn random_schmidt(d: usize, rng: &mut Rng) -> Result<SchmidtVector> {
    SchmidtVector::from_unsorted((0..d).map(|_| rng.sample::<f64, _>(Exp1)).collect::<Vec<_>>())
        .or_else(|_| {
            let w: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(Exp1)).collect();
            SchmidtVector::normalized(w)
        })
}

fn werner_eof(_: &Scale) -> Measured {
    let spec = MonotoneSpec::entropy();
    let mut w = Worst::new();
    for d in [2, 3, 4] {
        for a in grid(0.0, 1.0, 201) {
            let roof = roof_werner(&spec, a, d)?;
            if a <= 0.5 {
                w.see(roof.abs(), || format!("d={d} a={a}"));
                continue;
            }
            let closed = binary_entropy(0.5 - root_a(a));
            let svd = spec.evaluate(&schmidt_coefficients(&werner_minimizer_state(a, d)?)?)?;
            w.see((roof - closed).abs().max((roof - svd).abs()), || {
                format!("d={d} a={a}")
            });
        }
    }
    Ok(w.finish())
}

fn werner_vidal(_: &Scale) -> Measured {
    let mut w = Worst::new();
    for d in 2..=5 {
        for a in grid(0.0, 1.0, 101) {
            let psi = schmidt_coefficients(&werner_minimizer_state(a.max(0.5), d)?)?;
            for k in 1..d {
                let spec = MonotoneSpec::vidal(k)?;
                let roof = roof_werner(&spec, a, d)?;
                let expected = if k == 1 && a > 0.5 { 0.5 - root_a(a) } else { 0.0 };
                let mut dev = (roof - expected).abs();
                if a >= 0.5 {
                    dev = dev.max((roof - spec.evaluate(&psi)?).abs());
                }
                w.see(dev, || format!("d={d} k={k} a={a}"));
            }
        }
    }
    Ok(w.finish())
}

fn second_differences(values: &[f64]) -> impl Iterator<Item = (usize, f64)> + '_ {
    values
        .windows(3)
        .enumerate()
        .map(|(i, v)| (i + 1, v[0] - 2.0 * v[1] + v[2]))
}

fn renyi_shape(_: &Scale) -> Measured {
    let g = grid(0.5, 1.0, 1001);
    let mut w = Worst::new();
    for (alpha, convex) in [
        (1.5, true),
        (2.0, true),
        (3.0, true),
        (0.1, false),
        (0.25, false),
        (0.4, false),
    ] {
        let v: Vec<f64> = g.iter().map(|&a| renyi_werner(alpha, a)).collect();
        for (i, dd) in second_differences(&v) {
            let bad = if convex { -dd } else { dd };
            w.see(bad, || format!("alpha={alpha} a={}", g[i]));
        }
    }
    Ok(w.finish())
}

fn renyi_small_alpha(_: &Scale) -> Measured {
    let mut w = Worst::new();
    for d in [2, 3] {
        for alpha in [0.1, 0.25, 0.4] {
            let spec = MonotoneSpec::renyi(alpha)?;
            for a in grid(0.0, 1.0, 101) {
                let env = roof_werner_by_envelope(&spec, a, d, 2001)?;
                let dev = (env - (2.0 * a - 1.0).max(0.0)).abs();
                w.see(dev, || format!("d={d} alpha={alpha} a={a}"));
            }
        }
    }
    Ok(w.finish())
}

fn iso_vidal_zeros(_: &Scale) -> Measured {
    let mut w = Worst::new();
    for d in 2..=6 {
        for k in 1..d {
            let b = k as f64 / d as f64;
            let v = iso_vidal_roof(k, b, d)?;
            w.see(v.abs(), || format!("d={d} k={k}"));
        }
    }
    Ok(w.finish())
}

/// Signed gaps `oracle − closed form` of the isotropic Vidal fiber oracle.
fn iso_vidal_gaps(scale: &Scale) -> Result<Gaps> {
    let mut out = Vec::new();
    for &d in scale.vidal_dims {
        let df = d as f64;
        for k in 1..d {
            let spec = MonotoneSpec::vidal(k)?;
            for b in grid(1.0 / df, 1.0, scale.oracle_grid) {
                let est = min_on_iso_fiber(&spec, b, d, &scale.budget)?;
                let closed = iso_vidal_roof(k, b, d)?;
                out.push((est.value - closed, format!("d={d} k={k} b={b:.4}")));
            }
        }
    }
    Ok(out)
}

fn gap_side(gaps: Vec<(f64, String)>, undercut: bool) -> (f64, String) {
    let mut w = Worst::new();
    for (g, at) in gaps {
        w.see(if undercut { -g } else { g }, || at);
    }
    w.finish()
}

fn iso_vidal_gap(scale: &Scale) -> Measured {
    Ok(gap_side(scale.gaps("iso_vidal", iso_vidal_gaps)?, false))
}

fn iso_vidal_undercut(scale: &Scale) -> Measured {
    Ok(gap_side(scale.gaps("iso_vidal", iso_vidal_gaps)?, true))
}

fn iso_fiber_specs() -> Result<Vec<MonotoneSpec>> {
    Ok(vec![
        MonotoneSpec::entropy(),
        MonotoneSpec::renyi(2.0)?,
        MonotoneSpec::renyi(0.3)?,
        MonotoneSpec::concurrence(2)?,
    ])
}

fn iso_fiber_gaps(scale: &Scale) -> Result<Gaps> {
    let mut out = Vec::new();
    for d in [3, 4] {
        let mut specs = iso_fiber_specs()?;
        specs.push(MonotoneSpec::concurrence(d)?);
        for spec in &specs {
            for b in [0.5, 0.7, 0.9] {
                let est = min_on_iso_fiber(spec, b, d, &scale.budget)?;
                let closed = iso_pre_envelope(spec, b, d)?;
                out.push((est.value - closed, format!("d={d} {} b={b}", spec.label())));
            }
        }
    }
    Ok(out)
}

fn iso_fiber_gap(scale: &Scale) -> Measured {
    Ok(gap_side(scale.gaps("iso_fiber", iso_fiber_gaps)?, false))
}

fn iso_fiber_undercut(scale: &Scale) -> Measured {
    Ok(gap_side(scale.gaps("iso_fiber", iso_fiber_gaps)?, true))
}

fn concurrence_roofs(_: &Scale) -> Measured {
    let mut w = Worst::new();
    for d in [3, 4, 5] {
        let df = d as f64;
        let c2 = MonotoneSpec::concurrence(2)?;
        let cd = MonotoneSpec::concurrence(d)?;
        for b in grid(1.0 / df, 1.0, 101) {
            let formula = (df * b - 1.0) / (df - 1.0);
            let dev = (roof_isotropic(&c2, b, d)? - formula)
                .abs()
                .max((iso_c2_roof(b, d)? - formula).abs())
                .max(formula - iso_c2_pre_envelope(b, d)?);
            w.see(dev, || format!("C2 d={d} b={b}"));
        }
        for b in grid(1.0 - 1.0 / df, 1.0, 101) {
            let formula = df * b - df + 1.0;
            let dev = (roof_isotropic(&cd, b, d)? - formula)
                .abs()
                .max((iso_cd_roof(b, d)? - formula).abs())
                .max(formula - iso_cd_pre_envelope(b, d)?);
            w.see(dev, || format!("Cd d={d} b={b}"));
        }
        let ends = [
            iso_c2_pre_envelope(1.0 / df, d)?,
            iso_c2_pre_envelope(1.0, d)? - 1.0,
            iso_cd_pre_envelope(1.0 - 1.0 / df, d)?,
            iso_cd_pre_envelope(1.0, d)? - 1.0,
        ];
        for e in ends {
            w.see(e.abs(), || format!("pre-envelope endpoint d={d}"));
        }
    }
    Ok(w.finish())
}

fn concurrence_concave(_: &Scale) -> Measured {
    let mut w = Worst::new();
    for d in [3, 4, 5] {
        let df = d as f64;
        let g = grid(1.0 / df, 1.0, 1001);
        let v = g.iter().map(|&b| iso_c2_pre_envelope(b, d)).collect::<Result<Vec<_>>>()?;
        for (i, dd) in second_differences(&v) {
            w.see(dd, || format!("C2 d={d} b={}", g[i]));
        }
        let g = grid(1.0 - 1.0 / df, 1.0, 1001);
        let v = g.iter().map(|&b| iso_cd_pre_envelope(b, d)).collect::<Result<Vec<_>>>()?;
        for (i, dd) in second_differences(&v) {
            w.see(dd, || format!("Cd d={d} b={}", g[i]));
        }
    }
    Ok(w.finish())
}

fn lower_bound_consistency(scale: &Scale) -> Measured {
    let mut rng = scale.rng(11);
    let mut w = Worst::new();
    let cases = scale.random_cases / 10;
    let budget = SearchBudget::new(8, 300, scale.seed);
    for _ in 0..cases {
        let d = rng.random_range(2..=5);
        let b = rng.random_range(1.0 / d as f64..=1.0);
        let spec = match rng.random_range(0..4) {
            0 => MonotoneSpec::entropy(),
            1 => MonotoneSpec::renyi(rng.random_range(0.2..4.0))?,
            2 => MonotoneSpec::vidal(rng.random_range(1..d))?,
            _ => MonotoneSpec::concurrence(2)?,
        };
        let lower = iso_lower_bound_roof(&spec, b, d)?;
        let fiber_min = iso_pre_envelope(&spec, b, d)?;
        let oracle = min_on_iso_fiber(&spec, b, d, &budget)?.value;
        w.see((lower - fiber_min).max(lower - oracle), || {
            format!("d={d} {} b={b:.4}", spec.label())
        });
    }
    Ok(w.finish())
}

fn werner_fiber_majorization(scale: &Scale) -> Measured {
    let mut w = Worst::new();
    for d in [2, 3, 4] {
        let mut rng = scale.rng(20 + d as u64);
        for a in [0.5, 0.6, 0.7, 0.8, 0.9, 1.0] {
            let bound = 0.5 + root_a(a);
            for _ in 0..scale.samples {
                let psi = fiber_state_werner_rng(a, d, &mut rng)?;
                let l1 = schmidt_coefficients(&psi)?.largest();
                w.see(l1 - bound, || format!("d={d} a={a}"));
            }
        }
    }
    Ok(w.finish())
}

fn werner_fiber_gaps(scale: &Scale) -> Result<Gaps> {
    let specs = [
        MonotoneSpec::vidal(1)?,
        MonotoneSpec::entropy(),
        MonotoneSpec::renyi(2.0)?,
    ];
    let mut out = Vec::new();
    for d in [2, 3] {
        for spec in &specs {
            for a in [0.6, 0.75, 0.9] {
                let est = min_on_werner_fiber(spec, a, d, &scale.budget)?;
                let profile = werner_minimizer(a)?;
                let closed = spec.evaluate(&profile.schmidt.padded(d))?;
                out.push((est.value - closed, format!("d={d} {} a={a}", spec.label())));
            }
        }
    }
    Ok(out)
}

fn werner_fiber_gap(scale: &Scale) -> Measured {
    Ok(gap_side(scale.gaps("werner_fiber", werner_fiber_gaps)?, false))
}

fn werner_fiber_undercut(scale: &Scale) -> Measured {
    Ok(gap_side(scale.gaps("werner_fiber", werner_fiber_gaps)?, true))
}

fn twirl_tolerance(scale: &Scale) -> f64 {
    5.0 / (scale.twirl_samples as f64).sqrt()
}

fn twirl_monte_carlo(scale: &Scale) -> Measured {
    let mut rng = scale.rng(30);
    let mut w = Worst::new();
    for i in 0..scale.twirl_states {
        let d = 2 + i % 2;
        let rho = random_density(d, &mut rng);
        for group in SymmetryGroup::ALL {
            let exact = twirl_density(&rho, group)?;
            let mc = monte_carlo_twirl(
                &rho,
                group,
                scale.twirl_samples,
                scale.seed ^ ((i as u64) << 8),
                scale.budget.execution,
            );
            w.see((mc - exact.matrix()).camax(), || format!("state {i} d={d} {group:?}"));
        }
    }
    Ok(w.finish())
}

fn twirl_idempotent(scale: &Scale) -> Measured {
    let mut rng = scale.rng(31);
    let mut w = Worst::new();
    for i in 0..10 {
        let d = 2 + i % 3;
        let rho = random_density(d, &mut rng);
        for group in SymmetryGroup::ALL {
            let once = twirl_density(&rho, group)?;
            let twice = twirl_density(&once, group)?;
            w.see((twice.matrix() - once.matrix()).camax(), || {
                format!("state {i} d={d} {group:?}")
            });
        }
    }
    Ok(w.finish())
}

fn orbit_certificates(scale: &Scale) -> Measured {
    let n = scale.oracle_grid.max(11);
    let mut w = Worst::new();
    let mut see = |c: OrbitCertificate, at: String| {
        let outside = (c.covered.0 - c.coordinate).max(c.coordinate - c.covered.1).max(0.0);
        w.see(c.max_violation().max(outside), || at);
    };
    for d in 2..=6 {
        let df = d as f64;
        for a in grid(0.5, 1.0, n) {
            let prof = werner_minimizer(a)?;
            for b in grid(0.0, 1.0 - a, 3) {
                let p = FamilyPoint::pp_werner(a, b, d)?;
                see(orbit_membership_certificate(&p, &prof)?, format!("{p}"));
            }
            for b in grid(0.0, 2.0 * (1.0 - a) / df, 3) {
                let p = FamilyPoint::oo(a, b, d)?;
                // The corner (1/2, 1/d) is assigned to the isotropic orbit.
                if region_membership(&p) == Region::WernerOrbit {
                    see(orbit_membership_certificate(&p, &prof)?, format!("{p}"));
                }
            }
        }
        for b in grid(1.0 / df, 1.0, n) {
            for spec in [MonotoneSpec::vidal(1)?, MonotoneSpec::entropy()] {
                let prof = iso_minimizer(&spec, b, d)?;
                for a in grid(0.0, 1.0 - b, 3) {
                    let p = FamilyPoint::pp_isotropic(a, b, d)?;
                    see(orbit_membership_certificate(&p, &prof)?, format!("{p}"));
                }
                let bound = df * (1.0 - b) / (2.0 * (df - 1.0));
                for a in grid(0.0, bound, 3) {
                    let p = FamilyPoint::oo(a, b, d)?;
                    see(orbit_membership_certificate(&p, &prof)?, format!("{p}"));
                }
            }
        }
    }
    Ok(w.finish())
}

fn roof_fiber_constancy(scale: &Scale) -> Measured {
    let n = scale.oracle_grid.max(11);
    let specs = [
        MonotoneSpec::vidal(1)?,
        MonotoneSpec::entropy(),
        MonotoneSpec::renyi(2.0)?,
    ];
    let mut w = Worst::new();
    for d in 2..=5 {
        let df = d as f64;
        for spec in &specs {
            for a in grid(0.5, 1.0, n) {
                let base = roof_werner(spec, a, d)?;
                for b in grid(0.0, 2.0 * (1.0 - a) / df, 5) {
                    let p = FamilyPoint::oo(a, b, d)?;
                    let v = extended_roof(spec, &p)?.value;
                    w.see((v - base).abs(), || format!("{} {p}", spec.label()));
                }
                for b in grid(0.0, 1.0 - a, 5) {
                    let p = FamilyPoint::pp_werner(a, b, d)?;
                    let v = extended_roof(spec, &p)?.value;
                    w.see((v - base).abs(), || format!("{} {p}", spec.label()));
                }
            }
            for b in grid(1.0 / df, 1.0, n) {
                let base = roof_isotropic(spec, b, d)?;
                for a in grid(0.0, df * (1.0 - b) / (2.0 * (df - 1.0)), 5) {
                    let p = FamilyPoint::oo(a, b, d)?;
                    let v = extended_roof(spec, &p)?.value;
                    w.see((v - base).abs(), || format!("{} {p}", spec.label()));
                }
                for a in grid(0.0, 1.0 - b, 5) {
                    let p = FamilyPoint::pp_isotropic(a, b, d)?;
                    let v = extended_roof(spec, &p)?.value;
                    w.see((v - base).abs(), || format!("{} {p}", spec.label()));
                }
            }
        }
    }
    Ok(w.finish())
}

fn witness_werner_majorization(scale: &Scale) -> Measured {
    let mut rng = scale.rng(40);
    let mut mismatches = 0usize;
    let mut first = String::new();
    for _ in 0..scale.random_cases {
        let d = rng.random_range(2..=5);
        let lambda = random_schmidt(d, &mut rng)?;
        let a = rng.random_range(0.5..=1.0);
        let r = root_a(a);
        let lambda_a = SchmidtVector::new(vec![0.5 + r, 0.5 - r])?;
        let go = pure_to_werner(&lambda, a)?.verdict == Verdict::Go;
        if go != majorizes(&lambda_a, &lambda) {
            mismatches += 1;
            if first.is_empty() {
                first = format!("first at λ={:?} a={a}", lambda.as_slice());
            }
        }
    }
    Ok((mismatches as f64, format!("{} cases {first}", scale.random_cases)))
}

fn witness_two_qubit_pure(scale: &Scale) -> Measured {
    let mut rng = scale.rng(41);
    let mut mismatches = 0usize;
    let mut first = String::new();
    for _ in 0..scale.random_cases {
        let lambda = random_schmidt(2, &mut rng)?;
        let psi = random_pure_state(2, &mut rng);
        let mu = schmidt_coefficients(&psi)?;
        let go = pure_to_two_qubit(&lambda, &DensityMatrix::from_pure(&psi))?.verdict == Verdict::Go;
        // Ties within the witness tolerance are decided either way.
        if (lambda.largest() - mu.largest()).abs() < 1e-8 {
            continue;
        }
        if go != majorizes(&mu, &lambda) {
            mismatches += 1;
            if first.is_empty() {
                first = format!("first at λ={:?} μ={:?}", lambda.as_slice(), mu.as_slice());
            }
        }
    }
    Ok((mismatches as f64, format!("{} cases {first}", scale.random_cases)))
}

fn witness_iso_d2(scale: &Scale) -> Measured {
    let mut w = Worst::new();
    for l1 in [0.55, 0.7, 0.9] {
        let lambda = SchmidtVector::new(vec![l1, 1.0 - l1])?;
        for b in grid(0.5, 1.0, scale.witness_grid) {
            let r = pure_to_isotropic_nogo(&lambda, b, 2)?;
            let closed = (1.0 - l1) - 0.5 * ((1.0 - b).sqrt() - b.sqrt()).powi(2);
            w.see((r.value - closed).abs(), || format!("λ1={l1} b={b}"));
        }
    }
    Ok(w.finish())
}

fn witness_sources() -> Result<Vec<SchmidtVector>> {
    Ok(vec![
        SchmidtVector::new(vec![0.6, 0.3, 0.1])?,
        SchmidtVector::new(vec![0.4, 0.3, 0.2, 0.1])?,
    ])
}

fn witness_iso_monotone(scale: &Scale) -> Measured {
    let mut w = Worst::new();
    for lambda in witness_sources()? {
        let d = lambda.d();
        let mut prev: Option<(f64, Verdict)> = None;
        for b in grid(1.0 / d as f64, 1.0, scale.witness_grid) {
            let r = pure_to_isotropic_nogo(&lambda, b, d)?;
            if let Some((pv, pverdict)) = prev {
                let mut bad = r.value - pv;
                if pverdict == Verdict::NoGo && r.verdict != Verdict::NoGo {
                    bad = bad.max(1.0);
                }
                w.see(bad, || format!("d={d} b={b:.4}"));
            }
            prev = Some((r.value, r.verdict));
        }
    }
    Ok(w.finish())
}

fn witness_iso_feasibility(scale: &Scale) -> Measured {
    let mut w = Worst::new();
    for lambda in witness_sources()? {
        let d = lambda.d();
        for b in grid(1.0 / d as f64, 1.0, scale.witness_grid) {
            let r = pure_to_isotropic_nogo(&lambda, b, d)?;
            w.see(r.diagnostics.max_violation, || format!("d={d} b={b:.4}"));
        }
    }
    Ok(w.finish())
}

/// Signed differences `oracle − structured` on the witness grids.
fn witness_oracle_diffs(scale: &Scale) -> Result<Gaps> {
    let lambda = SchmidtVector::new(vec![0.6, 0.3, 0.1])?;
    let mut out = Vec::new();
    for b in grid(1.0 / 3.0, 1.0, scale.oracle_grid) {
        let structured = pure_to_isotropic_nogo(&lambda, b, 3)?.value;
        let oracle = witness_oracle(&lambda, b, 3, &scale.budget)?.value;
        out.push((oracle - structured, format!("b={b:.4}")));
    }
    Ok(out)
}

fn witness_iso_agreement(scale: &Scale) -> Measured {
    let mut w = Worst::new();
    for (diff, at) in scale.gaps("witness", witness_oracle_diffs)? {
        w.see(diff.abs(), || at);
    }
    Ok(w.finish())
}

fn witness_iso_soundness(scale: &Scale) -> Measured {
    Ok(gap_side(scale.gaps("witness", witness_oracle_diffs)?, false))
}

/// Bisection for the sign change of the isotropic witness of `lambda` on `[lo, hi]`.
pub fn witness_crossing_by_bisection(
    lambda: &SchmidtVector,
    d: usize,
    mut lo: f64,
    mut hi: f64,
    width: f64,
) -> Result<f64> {
    let f = |b: f64| pure_to_isotropic_nogo(lambda, b, d).map(|r| r.value);
    let flo = f(lo)?;
    let fhi = f(hi)?;
    if flo.signum() == fhi.signum() {
        return crate::error::domain(format!(
            "witness does not change sign on [{lo}, {hi}] ({flo}, {fhi})"
        ));
    }
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if (f(mid)? >= 0.0) == (flo >= 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn witness_crossing(_: &Scale) -> Measured {
    let lambda = SchmidtVector::new(vec![0.6, 0.3, 0.1])?;
    let b = witness_crossing_by_bisection(&lambda, 3, 0.85, 0.95, 1e-5)?;
    let outside = (0.890 - b).max(b - 0.900).max(0.0);
    Ok((outside, format!("crossing at b={b:.5}")))
}

fn decomposition_cases(suite: Suite) -> Result<Vec<(FamilyPoint, MonotoneSpec)>> {
    let mut cases = vec![
        (FamilyPoint::werner(0.75, 2)?, MonotoneSpec::entropy()),
        (FamilyPoint::isotropic(0.7, 2)?, MonotoneSpec::entropy()),
        (FamilyPoint::isotropic(0.8, 3)?, MonotoneSpec::vidal(1)?),
    ];
    if suite == Suite::Full {
        cases.push((FamilyPoint::werner(0.9, 3)?, MonotoneSpec::entropy()));
        cases.push((FamilyPoint::werner(0.8, 2)?, MonotoneSpec::renyi(2.0)?));
        cases.push((FamilyPoint::isotropic(0.9, 3)?, MonotoneSpec::concurrence(2)?));
    }
    Ok(cases)
}

fn decomposition_gaps(scale: &Scale) -> Result<Gaps> {
    let mut out = Vec::new();
    for (point, spec) in decomposition_cases(scale.suite)? {
        let closed = extended_roof(&spec, &point)?.value;
        let est = roof_upper_bound_by_decompositions(&point, &spec, None, &scale.budget)?;
        let rho = family_to_density(&point)?;
        if let crate::oracle::Argmin::Decomposition(elements) = &est.argmin {
            let diff = (crate::oracle::recombine(elements, point.d()) - rho.matrix()).camax();
            if diff > 1e-8 {
                return crate::error::domain(format!(
                    "decomposition at {point} does not reproduce the state ({diff:e})"
                ));
            }
        }
        out.push((est.value - closed, format!("{point} {}", spec.label())));
    }
    Ok(out)
}

fn decomposition_gap(scale: &Scale) -> Measured {
    Ok(gap_side(scale.gaps("decomposition", decomposition_gaps)?, false))
}

fn decomposition_undercut(scale: &Scale) -> Measured {
    Ok(gap_side(scale.gaps("decomposition", decomposition_gaps)?, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::Fast, Suite::Full] {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("medium".parse::<Suite>().is_err());
    }

    #[test]
    fn ids_are_unique() {
        let mut ids = check_ids();
        let n = ids.len();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), n);
    }

    #[test]
    fn closed_form_checks_pass() {
        let r = run_selected(Suite::Fast, 3, |id| {
            matches!(id, "werner-eof" | "werner-vidal" | "iso-vidal-zeros" | "renyi-werner-shape")
        });
        assert_eq!(r.checks.len(), 4);
        assert!(r.passed(), "{}", r.render());
    }
}
