//! Small dense least-squares machinery: a damped Gauss-Newton
//! (Levenberg-Marquardt) driver with numeric Jacobians, plus closed-form
//! linear regression helpers.
//!
//! Parameter counts in this crate stay in the single digits, so the normal
//! equations are solved directly by Gaussian elimination.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct LmOptions {
    pub max_iterations: usize,
    /// Stop when an accepted step reduces the sum of squares by less than
    /// this relative amount.
    pub ftol: f64,
    /// Stop when the accepted step is smaller than this relative to the
    /// parameter scales.
    pub xtol: f64,
    pub initial_lambda: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        LmOptions {
            max_iterations: 400,
            ftol: 1e-14,
            xtol: 1e-12,
            initial_lambda: 1e-3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LmFit {
    pub params: Vec<f64>,
    pub ssr: f64,
    /// Row-major n x n parameter covariance, already scaled by the residual
    /// variance ssr / (m - n). Zero matrix when m <= n.
    pub covariance: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl LmFit {
    pub fn sigma(&self, i: usize) -> f64 {
        let n = self.params.len();
        self.covariance[i * n + i].max(0.0).sqrt()
    }
}

/// Minimises sum r_i(p)^2 starting from `initial`.
///
/// `residuals` writes the full residual vector into its output slice.
/// `scales` gives the typical magnitude of each parameter; it sets numeric
/// differentiation steps and the step-size convergence test.
pub fn least_squares<F>(
    mut residuals: F,
    n_residuals: usize,
    initial: &[f64],
    scales: &[f64],
    opts: &LmOptions,
) -> Result<LmFit>
where
    F: FnMut(&[f64], &mut [f64]),
{
    let n = initial.len();
    assert_eq!(scales.len(), n, "one scale per parameter");
    if n == 0 || n_residuals == 0 {
        return Err(Error::fit("empty least-squares problem"));
    }
    let m = n_residuals;

    let mut p = initial.to_vec();
    let mut r = vec![0.0; m];
    residuals(&p, &mut r);
    let mut ssr = dot(&r, &r);
    if !ssr.is_finite() {
        return Err(Error::fit("residuals not finite at the initial point"));
    }

    let mut lambda = opts.initial_lambda;
    let mut jac = vec![0.0; m * n];
    let mut converged = false;
    let mut iterations = 0;

    for iter in 0..opts.max_iterations {
        iterations = iter + 1;
        numeric_jacobian(&mut residuals, &p, scales, &mut jac, m);

        // Normal equations: A = J^T J, g = J^T r.
        let mut a = vec![0.0; n * n];
        let mut g = vec![0.0; n];
        for i in 0..m {
            for j in 0..n {
                let jij = jac[i * n + j];
                g[j] += jij * r[i];
                for k in j..n {
                    a[j * n + k] += jij * jac[i * n + k];
                }
            }
        }
        for j in 0..n {
            for k in 0..j {
                a[j * n + k] = a[k * n + j];
            }
        }

        let mut accepted = false;
        for _ in 0..40 {
            let mut damped = a.clone();
            for j in 0..n {
                let d = a[j * n + j];
                damped[j * n + j] = d + lambda * if d > 0.0 { d } else { 1.0 };
            }
            let mut rhs: Vec<f64> = g.iter().map(|v| -v).collect();
            if solve_in_place(&mut damped, &mut rhs, n).is_err() {
                lambda = (lambda * 10.0).min(1e14);
                continue;
            }
            let trial: Vec<f64> = p.iter().zip(&rhs).map(|(pi, d)| pi + d).collect();
            let mut rt = vec![0.0; m];
            residuals(&trial, &mut rt);
            let ssr_t = dot(&rt, &rt);
            if ssr_t.is_finite() && ssr_t <= ssr {
                let drop = ssr - ssr_t;
                let max_step = rhs
                    .iter()
                    .zip(scales)
                    .map(|(d, s)| (d / s).abs())
                    .fold(0.0, f64::max);
                p = trial;
                r = rt;
                ssr = ssr_t;
                lambda = (lambda * 0.3).max(1e-14);
                accepted = true;
                if drop <= opts.ftol * ssr.max(1e-300) || max_step <= opts.xtol {
                    converged = true;
                }
                break;
            }
            lambda = (lambda * 6.0).min(1e14);
        }

        if !accepted {
            // No downhill step found at any damping: treat the current point
            // as the optimum.
            converged = true;
        }
        if converged {
            break;
        }
    }

    // Covariance from the undamped normal equations at the solution.
    numeric_jacobian(&mut residuals, &p, scales, &mut jac, m);
    let mut a = vec![0.0; n * n];
    for i in 0..m {
        for j in 0..n {
            for k in 0..n {
                a[j * n + k] += jac[i * n + j] * jac[i * n + k];
            }
        }
    }
    let covariance = if m > n {
        let s2 = ssr / (m - n) as f64;
        invert(&a, n).map(|inv| inv.iter().map(|v| v * s2).collect())
    } else {
        None
    }
    .unwrap_or_else(|| vec![0.0; n * n]);

    Ok(LmFit {
        params: p,
        ssr,
        covariance,
        iterations,
        converged,
    })
}

fn numeric_jacobian<F>(f: &mut F, p: &[f64], scales: &[f64], jac: &mut [f64], m: usize)
where
    F: FnMut(&[f64], &mut [f64]),
{
    let n = p.len();
    let mut plus = vec![0.0; m];
    let mut minus = vec![0.0; m];
    let mut pt = p.to_vec();
    for j in 0..n {
        let h = 1e-6 * scales[j].abs().max(f64::MIN_POSITIVE);
        let orig = pt[j];
        pt[j] = orig + h;
        f(&pt, &mut plus);
        pt[j] = orig - h;
        f(&pt, &mut minus);
        pt[j] = orig;
        let inv = 0.5 / h;
        for i in 0..m {
            jac[i * n + j] = (plus[i] - minus[i]) * inv;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gaussian elimination with partial pivoting; overwrites inputs.
fn solve_in_place(a: &mut [f64], b: &mut [f64], n: usize) -> std::result::Result<(), ()> {
    for col in 0..n {
        let mut pivot = col;
        let mut best = a[col * n + col].abs();
        for row in col + 1..n {
            let v = a[row * n + col].abs();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best == 0.0 || !best.is_finite() {
            return Err(());
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            b.swap(col, pivot);
        }
        let diag = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / diag;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row * n + k] -= factor * a[col * n + k];
            }
            b[row] -= factor * b[col];
        }
    }
    for col in (0..n).rev() {
        let mut s = b[col];
        for k in col + 1..n {
            s -= a[col * n + k] * b[k];
        }
        b[col] = s / a[col * n + col];
    }
    Ok(())
}

fn invert(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut inv = vec![0.0; n * n];
    for col in 0..n {
        let mut m = a.to_vec();
        let mut e = vec![0.0; n];
        e[col] = 1.0;
        solve_in_place(&mut m, &mut e, n).ok()?;
        for row in 0..n {
            inv[row * n + col] = e[row];
        }
    }
    Some(inv)
}

#[derive(Debug, Clone, Copy)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_sigma: f64,
    pub intercept_sigma: f64,
    pub ssr: f64,
}

/// Ordinary least squares y = slope * x + intercept.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    weighted_linear_fit(x, y, None)
}

/// Weighted least squares; `weights` are 1/sigma_i^2. With weights supplied,
/// parameter sigmas come straight from the weight matrix; without, they are
/// scaled by the residual variance.
pub fn weighted_linear_fit(x: &[f64], y: &[f64], weights: Option<&[f64]>) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::input("linear fit needs at least two (x, y) points"));
    }
    let n = x.len();
    let w = |i: usize| weights.map_or(1.0, |w| w[i]);
    let (mut sw, mut swx, mut swy, mut swxx, mut swxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        let wi = w(i);
        sw += wi;
        swx += wi * x[i];
        swy += wi * y[i];
        swxx += wi * x[i] * x[i];
        swxy += wi * x[i] * y[i];
    }
    let det = sw * swxx - swx * swx;
    if det <= 0.0 || !det.is_finite() {
        return Err(Error::fit("degenerate abscissae in linear fit"));
    }
    let slope = (sw * swxy - swx * swy) / det;
    let intercept = (swxx * swy - swx * swxy) / det;

    let mut ssr = 0.0;
    for i in 0..n {
        let r = y[i] - slope * x[i] - intercept;
        ssr += w(i) * r * r;
    }
    let var_scale = if weights.is_some() {
        1.0
    } else if n > 2 {
        ssr / (n - 2) as f64
    } else {
        0.0
    };
    let slope_sigma = (sw / det * var_scale).sqrt();
    let intercept_sigma = (swxx / det * var_scale).sqrt();
    Ok(LinearFit {
        slope,
        intercept,
        slope_sigma,
        intercept_sigma,
        ssr,
    })
}

/// Least squares through the origin, y = a * x.
pub fn proportional_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::input("proportional fit needs matching samples"));
    }
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    if sxx == 0.0 {
        return Err(Error::fit("degenerate abscissae in proportional fit"));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let a = sxy / sxx;
    let ssr: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| {
            let r = yi - a * xi;
            r * r
        })
        .sum();
    let sigma = if x.len() > 1 {
        (ssr / (x.len() - 1) as f64 / sxx).sqrt()
    } else {
        0.0
    };
    Ok((a, sigma, ssr))
}
