//! Small smooth optimizers shared by the witness solver and the oracles.
//!
//! The set of Schmidt vectors on an isotropic fiber, written in square-root
//! coordinates `x_i = √λ_i`, is the intersection of the unit sphere with the
//! hyperplane `Σx = s`. [`SpherePlane`] charts that intersection by the unit
//! sphere in `R^{d−1}` and pulls gradients back to chart coordinates.

/// The sphere-plane intersection `{x ∈ R^d : Σx = s, Σx² = 1}`.
#[derive(Debug, Clone)]
pub(crate) struct SpherePlane {
    d: usize,
    center: f64,
    radius: f64,
    /// Orthonormal basis of the complement of `(1, …, 1)`, one column per
    /// entry, stored column-major as `d − 1` vectors of length `d`.
    basis: Vec<Vec<f64>>,
}


impl SpherePlane {
    /// Chart for the isotropic fiber `Σ√λ = √(d·b)`, whose radius is `√(1−b)`.
    pub(crate) fn isotropic(b: f64, d: usize) -> Self {
        let s = (d as f64 * b).sqrt();
        let radius = (1.0 - b).max(0.0).sqrt();
        SpherePlane {
            d,
            center: s / d as f64,
            radius,
            basis: helmert_basis(d),
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.d
    }

    /// Common value `s/d` of every coordinate at the center.
    pub(crate) fn center(&self) -> f64 {
        self.center
    }

    pub(crate) fn radius(&self) -> f64 {
        self.radius
    }

    /// The point `c·1 + r·B·v/|v|`.
    pub(crate) fn point(&self, v: &[f64]) -> Vec<f64> {
        let norm = norm2(v).max(f64::MIN_POSITIVE);
        let mut x = vec![self.center; self.d];
        for (col, vi) in self.basis.iter().zip(v) {
            let w = self.radius * vi / norm;
            for (xj, bj) in x.iter_mut().zip(col) {
                *xj += w * bj;
            }
        }
        x
    }

    /// Gradient in chart coordinates of a function with gradient `gx` at
    /// `point(v)`.
    pub(crate) fn pullback(&self, v: &[f64], gx: &[f64]) -> Vec<f64> {
        let norm = norm2(v).max(f64::MIN_POSITIVE);
        let bt: Vec<f64> = self.basis.iter().map(|col| dot(col, gx)).collect();
        let u: Vec<f64> = v.iter().map(|vi| vi / norm).collect();
        let ub = dot(&u, &bt);
        bt.iter()
            .zip(&u)
            .map(|(g, ui)| self.radius * (g - ub * ui) / norm)
            .collect()
    }

    /// Chart coordinates of the projection of `x` onto the intersection.
    pub(crate) fn coords(&self, x: &[f64]) -> Vec<f64> {
        self.basis
            .iter()
            .map(|col| col.iter().zip(x).map(|(b, xi)| b * (xi - self.center)).sum())
            .collect()
    }
}

/// Spreads below this (relative to the mean) carry no direction.
const SPREAD_TOL: f64 = 1e-12;

/// Nearest-point style map of `y` onto `{Σx = s, Σx² = 1, x ≥ 0}`: removes
/// the mean and rescales on the free coordinates, zeroing the most negative
/// coordinate until none is left. Returns `None` when too few coordinates
/// remain to reach the plane, or when the free coordinates of `y` are all
/// equal while the target circle has positive radius.
pub(crate) fn project_nonneg(y: &[f64], s: f64) -> Option<Vec<f64>> {
    let d = y.len();
    let mut free = vec![true; d];
    loop {
        let m = free.iter().filter(|&&f| f).count();
        if (m as f64) < s * s - 1e-12 {
            return None;
        }
        let mean = (0..d).filter(|&i| free[i]).map(|i| y[i]).sum::<f64>() / m as f64;
        let mut dev: Vec<f64> = (0..d).map(|i| if free[i] { y[i] - mean } else { 0.0 }).collect();
        // A second centering pass removes the rounding left in `mean`.
        let shift = dev.iter().sum::<f64>() / m as f64;
        for i in (0..d).filter(|&i| free[i]) {
            dev[i] -= shift;
        }
        let spread = norm2(&dev);
        let degenerate = spread <= SPREAD_TOL * mean.abs().max(1.0);
        let r2 = 1.0 - s * s / m as f64;
        let radius = if r2 < 1e-14 { 0.0 } else { r2.sqrt() };
        if degenerate && radius > 0.0 {
            return None;
        }
        let center = s / m as f64;
        let x: Vec<f64> = (0..d)
            .map(|i| {
                if !free[i] {
                    0.0
                } else if degenerate {
                    center
                } else {
                    center + radius * dev[i] / spread
                }
            })
            .collect();
        let worst = (0..d)
            .filter(|&i| free[i] && x[i] < 0.0)
            .min_by(|&i, &j| x[i].total_cmp(&x[j]));
        match worst {
            None => return Some(x),
            Some(i) => free[i] = false,
        }
    }
}

/// Orthonormal basis of `{x : Σx = 0}` built from Helmert contrasts.
fn helmert_basis(d: usize) -> Vec<Vec<f64>> {
    (1..d)
        .map(|j| {
            let scale = 1.0 / ((j * (j + 1)) as f64).sqrt();
            let mut col = vec![0.0; d];
            for c in col.iter_mut().take(j) {
                *c = scale;
            }
            col[j] = -(j as f64) * scale;
            col
        })
        .collect()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Outcome of [`bfgs`].
#[derive(Debug, Clone)]
pub(crate) struct Minimum {
    pub x: Vec<f64>,
}

/// Quasi-Newton minimization with an Armijo backtracking line search.
///
/// `f` returns the value and the gradient. Stops after `max_iter` steps, when
/// the gradient falls below `gtol`, or when no descent step can be found.
pub(crate) fn bfgs<F>(mut f: F, x0: Vec<f64>, max_iter: usize, gtol: f64) -> Minimum
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
{
    let n = x0.len();
    let mut x = x0;
    let (mut fx, mut g) = f(&x);
    let mut h = identity(n);
    for _ in 0..max_iter {
        if norm_inf(&g) <= gtol {
            break;
        }
        let mut p: Vec<f64> = mat_vec(&h, &g).iter().map(|v| -v).collect();
        let mut slope = dot(&p, &g);
        if slope >= 0.0 {
            h = identity(n);
            p = g.iter().map(|v| -v).collect();
            slope = dot(&p, &g);
        }
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let xn: Vec<f64> = x.iter().zip(&p).map(|(xi, pi)| xi + t * pi).collect();
            let (fn_, gn) = f(&xn);
            if fn_.is_finite() && fn_ <= fx + 1e-4 * t * slope {
                accepted = Some((xn, fn_, gn));
                break;
            }
            t *= 0.5;
        }
        let Some((xn, fn_, gn)) = accepted else {
            break;
        };
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-14 * norm2(&s) * norm2(&y) && sy > 0.0 {
            update_inverse_hessian(&mut h, &s, &y, sy);
        }
        let progress = fx - fn_;
        x = xn;
        fx = fn_;
        g = gn;
        if progress.abs() <= 1e-16 * fx.abs().max(1.0) && norm_inf(&s) <= 1e-15 {
            break;
        }
    }
    Minimum { x }
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// `H ← (I − ρsyᵀ) H (I − ρysᵀ) + ρssᵀ` with `ρ = 1/(sᵀy)`.
fn update_inverse_hessian(h: &mut [Vec<f64>], s: &[f64], y: &[f64], sy: f64) {
    let rho = 1.0 / sy;
    let hy = mat_vec(h, y);
    let yhy = dot(y, &hy);
    let n = s.len();
    for i in 0..n {
        for j in 0..n {
            h[i][j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
        }
    }
}
