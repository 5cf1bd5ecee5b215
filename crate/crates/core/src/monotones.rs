//! Pure-state entanglement monotones as functions of Schmidt vectors.
//!
//! Logarithms are base 2 throughout, so entropies are in ebits.
//!
//! Rényi entropies are accepted for every `α > 0, α ≠ 1`, although they are
//! entanglement monotones on pure states only for `α ∈ (0, 1)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::qcore::SchmidtVector;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A scalar function `f` on `[0, 1]` with `f(0) = 0`, optionally carrying `f′`.
#[derive(Clone)]
pub struct ScalarFn {
    name: String,
    f: RealFn,
    derivative: Option<RealFn>,
    continuous: bool,
}

impl ScalarFn {
    /// Registers `f`, rejecting it unless `|f(0)| ≤ 1e-12`.
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let name = name.into();
        let f0 = f(0.0);
        if f0.is_nan() || f0.abs() > 1e-12 {
            return Err(Error::Registration(format!("{name}: f(0) = {f0}, expected 0")));
        }
        Ok(Self {
            name,
            f: Arc::new(f),
            derivative: None,
            continuous: false,
        })
    }

    pub fn with_derivative(mut self, df: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.derivative = Some(Arc::new(df));
        self
    }

    /// Asserts that `f` is continuous on `[0, 1]`; roofs may then be extended
    /// from orbits to their convex hulls by continuity.
    pub fn assume_continuous(mut self, continuous: bool) -> Self {
        self.continuous = continuous;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        match &self.derivative {
            Some(df) => Ok(df(x)),
            None => Err(Error::Registration(format!(
                "{}: derivative handle required",
                self.name
            ))),
        }
    }

    pub fn has_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    pub fn is_continuous(&self) -> bool {
        self.continuous
    }

    /// `f(x) = x^p` with derivative, continuous.
    pub fn power(p: f64) -> Result<Self> {
        if p.is_nan() || p <= 0.0 {
            return domain(format!("power {p} must be positive"));
        }
        Ok(Self::new(format!("x^{p}"), move |x: f64| x.powf(p))?
            .with_derivative(move |x: f64| p * x.powf(p - 1.0))
            .assume_continuous(true))
    }

    /// `f(x) = −x^p` with derivative, continuous.
    pub fn neg_power(p: f64) -> Result<Self> {
        if p.is_nan() || p <= 0.0 {
            return domain(format!("power {p} must be positive"));
        }
        Ok(Self::new(format!("-x^{p}"), move |x: f64| -x.powf(p))?
            .with_derivative(move |x: f64| -p * x.powf(p - 1.0))
            .assume_continuous(true))
    }

    /// `f(x) = −x log₂ x`, the Shannon summand.
    pub fn shannon() -> Self {
        Self::new("-x log2 x", xlog2x_neg)
            .expect("f(0) = 0")
            .with_derivative(|x: f64| -x.log2() - std::f64::consts::LOG2_E)
            .assume_continuous(true)
    }
}

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFn")
            .field("name", &self.name)
            .field("derivative", &self.derivative.is_some())
            .field("continuous", &self.continuous)
            .finish()
    }
}

/// Selects a pure-state monotone.
#[derive(Debug, Clone)]
pub enum MonotoneSpec {
    /// `E_k(λ) = Σ_{i>k} λ_i`.
    Vidal(usize),
    /// `H_α(λ) = log₂(Σ λ_i^α)/(1−α)`.
    Renyi(f64),
    /// `H(λ) = −Σ λ_i log₂ λ_i`.
    EntropyOfEntanglement,
    /// `C_k(λ) = d (S_k(λ)/binom(d,k))^{1/k}` with `S_k` the elementary
    /// symmetric polynomial.
    Concurrence(usize),
    /// `H_f(λ) = Σ f(λ_i)`.
    GeneralizedEntropy(ScalarFn),
}

impl MonotoneSpec {
    pub fn vidal(k: usize) -> Result<Self> {
        check_k(k)?;
        Ok(Self::Vidal(k))
    }

    pub fn renyi(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self::Renyi(alpha))
    }

    pub fn concurrence(k: usize) -> Result<Self> {
        check_k(k)?;
        Ok(Self::Concurrence(k))
    }

    pub fn entropy() -> Self {
        Self::EntropyOfEntanglement
    }

    /// Checks parameters that do not depend on the dimension.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Vidal(k) | Self::Concurrence(k) => check_k(*k),
            Self::Renyi(a) => check_alpha(*a),
            Self::EntropyOfEntanglement | Self::GeneralizedEntropy(_) => Ok(()),
        }
    }

    /// Whether the pure-state function is continuous in `λ`.
    pub fn is_continuous(&self) -> bool {
        match self {
            Self::GeneralizedEntropy(f) => f.is_continuous(),
            _ => true,
        }
    }

    /// Short label such as `vidal:2` or `renyi:0.5`.
    pub fn label(&self) -> String {
        match self {
            Self::Vidal(k) => format!("vidal:{k}"),
            Self::Renyi(a) => format!("renyi:{a}"),
            Self::EntropyOfEntanglement => "entropy".into(),
            Self::Concurrence(k) => format!("concurrence:{k}"),
            Self::GeneralizedEntropy(f) => format!("gen:{}", f.name()),
        }
    }

    pub fn evaluate(&self, lambda: &SchmidtVector) -> Result<f64> {
        match self {
            Self::Vidal(k) => vidal_ek(lambda, *k),
            Self::Renyi(a) => renyi_entropy(lambda, *a),
            Self::EntropyOfEntanglement => Ok(entropy_of_entanglement(lambda)),
            Self::Concurrence(k) => concurrence_ck(lambda, *k),
            Self::GeneralizedEntropy(f) => Ok(generalized_entropy(lambda, f)),
        }
    }

    /// Evaluates on an arbitrary-order nonnegative vector summing to one.
    pub(crate) fn evaluate_raw(&self, p: &[f64]) -> Result<f64> {
        match self {
            Self::Vidal(k) => {
                check_k(*k)?;
                let mut v = p.to_vec();
                crate::qcore::types::sort_desc(&mut v);
                Ok(v.iter().skip(*k).sum())
            }
            Self::Renyi(a) => {
                check_alpha(*a)?;
                Ok(renyi_raw(p, *a))
            }
            Self::EntropyOfEntanglement => Ok(p.iter().map(|&x| xlog2x_neg(x)).sum()),
            Self::Concurrence(k) => concurrence_raw(p, *k),
            Self::GeneralizedEntropy(f) => Ok(p.iter().map(|&x| f.eval(x)).sum()),
        }
    }

    /// Gradient of the function with respect to each entry of `p` (any order).
    ///
    /// Entries at zero are evaluated at a small floor where the derivative is
    /// singular. Vidal monotones use the subgradient for the sorted order.
    pub fn gradient(&self, p: &[f64]) -> Result<Vec<f64>> {
        const FLOOR: f64 = 1e-14;
        let n = p.len();
        match self {
            Self::Vidal(k) => {
                check_k(*k)?;
                let mut idx: Vec<usize> = (0..n).collect();
                idx.sort_by(|&i, &j| p[j].total_cmp(&p[i]));
                let mut g = vec![0.0; n];
                for &i in idx.iter().skip(*k) {
                    g[i] = 1.0;
                }
                Ok(g)
            }
            Self::EntropyOfEntanglement => Ok(p
                .iter()
                .map(|&x| -x.max(FLOOR).log2() - std::f64::consts::LOG2_E)
                .collect()),
            Self::Renyi(a) => {
                check_alpha(*a)?;
                let s: f64 = p.iter().map(|&x| x.powf(*a)).sum();
                let c = a / ((1.0 - a) * s * std::f64::consts::LN_2);
                Ok(p.iter().map(|&x| c * x.max(FLOOR).powf(a - 1.0)).collect())
            }
            Self::Concurrence(k) => {
                let k = *k;
                check_concurrence_k(k, n)?;
                let sk = elementary_symmetric(p, k);
                let scale = n as f64 / binomial(n, k).powf(1.0 / k as f64);
                let outer = scale / k as f64 * sk.max(FLOOR).powf(1.0 / k as f64 - 1.0);
                Ok((0..n)
                    .map(|i| {
                        let rest: Vec<f64> = p
                            .iter()
                            .enumerate()
                            .filter(|&(j, _)| j != i)
                            .map(|(_, &x)| x)
                            .collect();
                        outer * elementary_symmetric(&rest, k - 1)
                    })
                    .collect())
            }
            Self::GeneralizedEntropy(f) => {
                p.iter().map(|&x| f.derivative(x.max(FLOOR))).collect()
            }
        }
    }
}

fn check_k(k: usize) -> Result<()> {
    if k < 1 {
        return domain("k must be at least 1");
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return domain(format!("Rényi order {alpha} must be positive"));
    }
    if alpha == 1.0 {
        return domain("Rényi order 1 is rejected; use the entropy of entanglement");
    }
    Ok(())
}

fn check_concurrence_k(k: usize, d: usize) -> Result<()> {
    if k < 1 || k > d {
        return domain(format!("concurrence order {k} is outside 1..={d}"));
    }
    Ok(())
}

pub(crate) fn xlog2x_neg(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Binary entropy `h(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    xlog2x_neg(p) + xlog2x_neg(1.0 - p)
}

/// Sum of the `d − k` smallest Schmidt coefficients.
pub fn vidal_ek(lambda: &SchmidtVector, k: usize) -> Result<f64> {
    check_k(k)?;
    Ok(lambda.as_slice().iter().skip(k).sum())
}

pub fn entropy_of_entanglement(lambda: &SchmidtVector) -> f64 {
    lambda.as_slice().iter().map(|&x| xlog2x_neg(x)).sum::<f64>().max(0.0)
}

pub fn renyi_entropy(lambda: &SchmidtVector, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(renyi_raw(lambda.as_slice(), alpha))
}

fn renyi_raw(p: &[f64], alpha: f64) -> f64 {
    let s: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| x.powf(alpha)).sum();
    (s.log2() / (1.0 - alpha)).max(0.0)
}

/// `S_k` by Vieta's iterative product `Π_i (1 + λ_i z)`.
pub fn elementary_symmetric(p: &[f64], k: usize) -> f64 {
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for &x in p {
        for j in (1..=k).rev() {
            e[j] += x * e[j - 1];
        }
    }
    e[k]
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn concurrence_ck(lambda: &SchmidtVector, k: usize) -> Result<f64> {
    concurrence_raw(lambda.as_slice(), k)
}

fn concurrence_raw(p: &[f64], k: usize) -> Result<f64> {
    let d = p.len();
    check_concurrence_k(k, d)?;
    let sk = elementary_symmetric(p, k).max(0.0);
    let c = d as f64 * (sk / binomial(d, k)).powf(1.0 / k as f64);
    Ok(c.min(1.0))
}

pub fn generalized_entropy(lambda: &SchmidtVector, f: &ScalarFn) -> f64 {
    lambda.as_slice().iter().map(|&x| f.eval(x)).sum()
}
