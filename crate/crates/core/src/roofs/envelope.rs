//! Lower convex envelope of a function of one variable.

use crate::error::{structural, Result};

/// Default number of grid points on `[0, 1]` for envelope-based roofs.
pub const DEFAULT_GRID: usize = 2001;

/// Piecewise-linear lower convex envelope, stored by its values on the
/// sample grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeFunction {
    grid: Vec<f64>,
    values: Vec<f64>,
    samples: Vec<f64>,
}

impl EnvelopeFunction {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Envelope values on the grid.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The input sample values on the grid.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Linear interpolation of the envelope; clamps outside the grid.
    pub fn eval(&self, x: f64) -> f64 {
        let g = &self.grid;
        let n = g.len();
        if x <= g[0] {
            return self.values[0];
        }
        if x >= g[n - 1] {
            return self.values[n - 1];
        }
        let hi = g.partition_point(|&v| v <= x).min(n - 1);
        let lo = hi - 1;
        let w = (x - g[lo]) / (g[hi] - g[lo]);
        self.values[lo] * (1.0 - w) + self.values[hi] * w
    }

    /// Whether the envelope touches the input at grid point `i`.
    pub fn is_tight_at(&self, i: usize, tol: f64) -> bool {
        (self.samples[i] - self.values[i]).abs() <= tol
    }
}

/// Lower convex hull of the graph through the samples (monotone chain),
/// re-evaluated at every sample abscissa.
pub fn convex_envelope_1d(samples: &[(f64, f64)]) -> Result<EnvelopeFunction> {
    if samples.len() < 2 {
        return structural("the envelope needs at least two samples");
    }
    if samples.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return structural("samples must be finite");
    }
    if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
        return structural("sample abscissae must be strictly increasing");
    }
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(samples.len());
    for &p in samples {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut values = Vec::with_capacity(samples.len());
    let mut seg = 0;
    for &(x, _) in samples {
        while seg + 2 < hull.len() && hull[seg + 1].0 < x {
            seg += 1;
        }
        let (p, q) = (hull[seg], hull[(seg + 1).min(hull.len() - 1)]);
        let v = if q.0 == p.0 {
            p.1
        } else {
            p.1 + (q.1 - p.1) * (x - p.0) / (q.0 - p.0)
        };
        values.push(v);
    }
    Ok(EnvelopeFunction {
        grid: samples.iter().map(|s| s.0).collect(),
        values,
        samples: samples.iter().map(|s| s.1).collect(),
    })
}

/// Uniform grid of `n ≥ 2` points on `[lo, hi]` with exact endpoints.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Envelope of `f` sampled on a uniform grid over `[0, 1]`.
pub fn envelope_of(f: impl Fn(f64) -> Result<f64>, n: usize) -> Result<EnvelopeFunction> {
    envelope_with_knots(f, n, &[])
}

/// Envelope of `f` sampled on a uniform grid over `[0, 1]` plus the points
/// in `knots`, so that kinks and query points are sampled exactly.
pub fn envelope_with_knots(
    f: impl Fn(f64) -> Result<f64>,
    n: usize,
    knots: &[f64],
) -> Result<EnvelopeFunction> {
    let mut xs = uniform_grid(0.0, 1.0, n);
    xs.extend(knots.iter().copied().filter(|x| (0.0..=1.0).contains(x)));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let samples = xs
        .into_iter()
        .map(|x| Ok((x, f(x)?)))
        .collect::<Result<Vec<_>>>()?;
    convex_envelope_1d(&samples)
}
