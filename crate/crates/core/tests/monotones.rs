use proptest::prelude::*;
use symroof::monotones::{elementary_symmetric, vidal_ek};
use symroof::qcore::majorizes;
use symroof::{MonotoneSpec, ScalarFn, SchmidtVector};

fn specs(d: usize) -> Vec<MonotoneSpec> {
    let mut out = vec![
        MonotoneSpec::entropy(),
        MonotoneSpec::renyi(0.3).unwrap(),
        MonotoneSpec::renyi(0.5).unwrap(),
        MonotoneSpec::renyi(2.0).unwrap(),
        MonotoneSpec::renyi(3.5).unwrap(),
        MonotoneSpec::GeneralizedEntropy(ScalarFn::shannon()),
        MonotoneSpec::GeneralizedEntropy(ScalarFn::power(0.5).unwrap()),
    ];
    out.extend((1..d).map(|k| MonotoneSpec::vidal(k).unwrap()));
    out.extend((2..=d).map(|k| MonotoneSpec::concurrence(k).unwrap()));
    out
}

fn simplex(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, d).prop_filter_map("nonzero weights", |w| {
        let total: f64 = w.iter().sum();
        (total > 1e-6).then(|| w.iter().map(|x| x / total).collect())
    })
}

/// Applies a sequence of T-transforms `(i, j, t)`, each of which moves the
/// vector down in the majorization order.
fn t_transforms(x: &[f64], moves: &[(usize, usize, f64)]) -> Vec<f64> {
    let mut y = x.to_vec();
    let d = y.len();
    for &(i, j, t) in moves {
        let (i, j) = (i % d, j % d);
        let (a, b) = (y[i], y[j]);
        y[i] = t * a + (1.0 - t) * b;
        y[j] = t * b + (1.0 - t) * a;
    }
    y
}

fn case() -> impl Strategy<Value = (Vec<f64>, Vec<(usize, usize, f64)>)> {
    (2usize..=5).prop_flat_map(|d| {
        (
            simplex(d),
            prop::collection::vec((0usize..5, 0usize..5, 0.0f64..=1.0), 1..6),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn schur_concavity((x, moves) in case()) {
        let y = t_transforms(&x, &moves);
        let xs = SchmidtVector::from_unsorted(x.clone()).unwrap();
        let ys = SchmidtVector::from_unsorted(y).unwrap();
        prop_assert!(majorizes(&xs, &ys));
        for spec in specs(x.len()) {
            let mx = spec.evaluate(&xs).unwrap();
            let my = spec.evaluate(&ys).unwrap();
            prop_assert!(mx <= my + 1e-10, "{}: {mx} > {my}", spec.label());
        }
    }

    #[test]
    fn permutation_symmetry(x in simplex(5), seed in any::<u64>()) {
        let mut y = x.clone();
        let n = y.len();
        for i in (1..n).rev() {
            y.swap(i, (seed.rotate_left(i as u32) % (i as u64 + 1)) as usize);
        }
        let xs = SchmidtVector::from_unsorted(x).unwrap();
        let ys = SchmidtVector::from_unsorted(y).unwrap();
        for spec in specs(n) {
            let diff = (spec.evaluate(&xs).unwrap() - spec.evaluate(&ys).unwrap()).abs();
            prop_assert!(diff <= 1e-12, "{}", spec.label());
        }
    }

    #[test]
    fn vidal_telescoping(x in simplex(5)) {
        let xs = SchmidtVector::from_unsorted(x).unwrap();
        for k in 1..4 {
            let step = vidal_ek(&xs, k).unwrap() - vidal_ek(&xs, k + 1).unwrap();
            prop_assert!((step - xs.as_slice()[k]).abs() <= 1e-15);
        }
    }
}

#[test]
fn monotones_vanish_on_product_states() {
    for d in 2..=6 {
        let product = SchmidtVector::product(d);
        let vanishing = specs(d)
            .into_iter()
            .filter(|s| !matches!(s, MonotoneSpec::GeneralizedEntropy(f) if f.eval(1.0) != 0.0));
        for spec in vanishing {
            let v = spec.evaluate(&product).unwrap();
            assert!(v.abs() <= 1e-12, "{} at d = {d}: {v}", spec.label());
        }
    }
}

#[test]
fn concurrences_are_normalized_on_the_uniform_vector() {
    for d in 2..=6 {
        let u = SchmidtVector::uniform(d);
        for k in 2..=d {
            let c = MonotoneSpec::concurrence(k).unwrap().evaluate(&u).unwrap();
            assert!((c - 1.0).abs() <= 1e-12, "C_{k} at d = {d}: {c}");
        }
    }
}

#[test]
fn elementary_symmetric_on_the_uniform_vector() {
    for d in 1..=8usize {
        let u = vec![1.0 / d as f64; d];
        let mut binom = 1.0;
        for k in 1..=d {
            binom = binom * (d + 1 - k) as f64 / k as f64;
            let expected = binom / (d as f64).powi(k as i32);
            assert!((elementary_symmetric(&u, k) - expected).abs() <= 1e-15 * binom);
        }
    }
}

#[test]
fn renyi_at_one_is_rejected() {
    assert!(MonotoneSpec::renyi(1.0).is_err());
    assert!(MonotoneSpec::renyi(0.0).is_err());
    assert!(MonotoneSpec::vidal(0).is_err());
}
