use proptest::prelude::*;
use symroof::families::family_to_density;
use symroof::oracle::{roof_upper_bound_by_decompositions, witness_oracle, SearchBudget};
use symroof::qcore::majorizes;
use symroof::roofs::werner::werner_minimizer;
use symroof::witness::{
    pure_to_isotropic_nogo, pure_to_two_qubit, pure_to_werner, Verdict, FEASIBILITY_TOL,
};
use symroof::{FamilyPoint, MonotoneSpec, SchmidtVector};

fn schmidt(d: usize) -> impl Strategy<Value = SchmidtVector> {
    prop::collection::vec(0.0f64..1.0, d).prop_filter_map("nonzero weights", |w| {
        let total: f64 = w.iter().sum();
        (total > 1e-6).then(|| SchmidtVector::normalized(w).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn werner_verdict_is_the_majorization_test(
        lambda in (2usize..=5).prop_flat_map(schmidt),
        a in 0.5f64..=1.0,
    ) {
        let target = werner_minimizer(a).unwrap().schmidt;
        let r = pure_to_werner(&lambda, a).unwrap();
        prop_assert!(r.is_consistent());
        prop_assert_eq!(r.verdict == Verdict::Go, majorizes(&target, &lambda));
    }

    #[test]
    fn two_qubit_witness_on_pure_targets(x in schmidt(2), y in schmidt(2)) {
        let psi = symroof::PureState::from_schmidt(&y);
        let rho = symroof::DensityMatrix::from_pure(&psi);
        let r = pure_to_two_qubit(&x, &rho).unwrap();
        prop_assert!(r.is_consistent());
        let nielsen = majorizes(&y, &x);
        if (x.largest() - y.largest()).abs() > 1e-9 {
            prop_assert_eq!(r.verdict == Verdict::Go, nielsen);
        }
    }

    #[test]
    fn isotropic_witness_in_two_dimensions(l1 in 0.5f64..=1.0, b in 0.5f64..=1.0) {
        let lambda = SchmidtVector::new(vec![l1, 1.0 - l1]).unwrap();
        let r = pure_to_isotropic_nogo(&lambda, b, 2).unwrap();
        let expected = (1.0 - l1) - 0.5 * ((1.0 - b).sqrt() - b.sqrt()).powi(2);
        prop_assert!((r.value - expected).abs() <= 1e-8, "{} vs {expected}", r.value);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn isotropic_witness_is_monotone_in_b(lambda in schmidt(3)) {
        let d = 3;
        let mut previous: Option<(f64, Verdict)> = None;
        for i in 0..=10 {
            let b = 1.0 / d as f64 + (1.0 - 1.0 / d as f64) * i as f64 / 10.0;
            let r = pure_to_isotropic_nogo(&lambda, b, d).unwrap();
            prop_assert!(r.is_consistent());
            prop_assert!(r.diagnostics.max_violation <= FEASIBILITY_TOL);
            prop_assert!(r.verdict != Verdict::Go);
            if let Some((value, verdict)) = previous {
                prop_assert!(r.value <= value + 1e-8, "b = {b}: {} > {value}", r.value);
                if verdict == Verdict::NoGo {
                    prop_assert_eq!(r.verdict, Verdict::NoGo);
                }
            }
            previous = Some((r.value, r.verdict));
        }
    }

    #[test]
    fn isotropic_witness_is_never_beaten_by_random_search(lambda in schmidt(4), t in 0.0f64..=1.0, seed in 0u64..100) {
        let d = 4;
        let b = 0.25 + 0.75 * t;
        let r = pure_to_isotropic_nogo(&lambda, b, d).unwrap();
        let oracle = witness_oracle(&lambda, b, d, &SearchBudget::new(8, 500, seed)).unwrap();
        prop_assert!(oracle.value <= r.value + 1e-6, "oracle {} above solver {}", oracle.value, r.value);
    }
}

/// `λ = (0.8, 0.2)` into `0.5·Bell + 0.5·1/4`: the two-qubit witness compares
/// `E₁(λ) = 0.2` with the roof of `E₁` at the target; a decomposition search
/// gives an independent upper bound on that roof.
#[test]
fn two_qubit_example_against_decompositions() {
    let lambda = SchmidtVector::new(vec![0.8, 0.2]).unwrap();
    let point = FamilyPoint::isotropic(0.625, 2).unwrap();
    let rho = family_to_density(&point).unwrap();
    let r = pure_to_two_qubit(&lambda, &rho).unwrap();
    let roof = roof_upper_bound_by_decompositions(
        &point,
        &MonotoneSpec::vidal(1).unwrap(),
        None,
        &SearchBudget::default(),
    )
    .unwrap();
    assert_eq!(r.verdict, Verdict::Go);
    assert!((r.value - (0.2 - roof.value)).abs() <= 1e-6, "{} vs {}", r.value, 0.2 - roof.value);
}

#[test]
fn isotropic_witness_crosses_zero_for_the_three_level_example() {
    let lambda = SchmidtVector::new(vec![0.6, 0.3, 0.1]).unwrap();
    assert_eq!(pure_to_isotropic_nogo(&lambda, 0.85, 3).unwrap().verdict, Verdict::Inconclusive);
    assert_eq!(pure_to_isotropic_nogo(&lambda, 0.95, 3).unwrap().verdict, Verdict::NoGo);
}
