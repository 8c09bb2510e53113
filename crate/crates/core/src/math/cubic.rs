//! Real roots of cubic polynomials via the closed-form solution, with a
//! guarded Newton cleanup pass.

/// Relative tolerance targeted by the cleanup step.
const POLISH_TOL: f64 = 1e-12;

/// Returns the real roots of `a3 x^3 + a2 x^2 + a1 x + a0 = 0`, sorted
/// ascending. Degenerate leading coefficients fall back to the quadratic or
/// linear solution. Multiple roots are returned once per distinct value.
pub fn real_cubic_roots(a3: f64, a2: f64, a1: f64, a0: f64) -> Vec<f64> {
    let scale = a3.abs().max(a2.abs()).max(a1.abs()).max(a0.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    if a3.abs() <= scale * 1e-14 {
        return real_quadratic_roots(a2, a1, a0);
    }

    // Monic form x^3 + b x^2 + c x + d, then depressed t^3 + p t + q with
    // x = t - b/3.
    let b = a2 / a3;
    let c = a1 / a3;
    let d = a0 / a3;
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;

    let discr = -4.0 * p * p * p - 27.0 * q * q;
    let mut roots = if discr > 0.0 {
        // Three distinct real roots: trigonometric form.
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let mut r = Vec::with_capacity(3);
        for k in 0..3 {
            let t = m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
            r.push(t - shift);
        }
        r
    } else {
        // One real root (or a multiple-root boundary): Cardano via cbrt,
        // formulated to avoid cancellation.
        let half_q = q / 2.0;
        let delta = half_q * half_q + p * p * p / 27.0;
        if delta >= 0.0 {
            let sd = delta.sqrt();
            let u = (-half_q + sd).cbrt();
            let v = (-half_q - sd).cbrt();
            vec![u + v - shift]
        } else {
            // Tiny negative delta from rounding: treat as triple/double root.
            let m = 2.0 * (-p / 3.0).sqrt();
            let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
            let theta = arg.acos() / 3.0;
            vec![m * theta.cos() - shift]
        }
    };

    for r in roots.iter_mut() {
        *r = polish(a3, a2, a1, a0, *r);
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots.dedup_by(|x, y| {
        let m = x.abs().max(y.abs()).max(1e-300);
        (*x - *y).abs() <= 4.0 * POLISH_TOL * m
    });
    roots
}

fn real_quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if a.abs() <= scale * 1e-14 {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    // Citardauq form for the smaller-magnitude root.
    let sq = disc.sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    let mut roots = if q == 0.0 {
        vec![0.0, 0.0]
    } else {
        vec![q / a, c / q]
    };
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots.dedup_by(|x, y| {
        let m = x.abs().max(y.abs()).max(1e-300);
        (*x - *y).abs() <= 4.0 * POLISH_TOL * m
    });
    roots
}

/// A few Newton steps; bail out if the derivative is too flat (multiple root)
/// or the step stops improving.
fn polish(a3: f64, a2: f64, a1: f64, a0: f64, mut x: f64) -> f64 {
    for _ in 0..4 {
        let f = ((a3 * x + a2) * x + a1) * x + a0;
        let df = (3.0 * a3 * x + 2.0 * a2) * x + a1;
        if df == 0.0 {
            break;
        }
        let step = f / df;
        let next = x - step;
        if !next.is_finite() {
            break;
        }
        let m = x.abs().max(1e-300);
        x = next;
        if step.abs() <= POLISH_TOL * m {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn assert_roots(got: &[f64], want: &[f64]) {
        assert_eq!(got.len(), want.len(), "got {got:?}, want {want:?}");
        for (g, w) in got.iter().zip(want) {
            assert_relative_eq!(g, w, max_relative = 1e-10, epsilon = 1e-12);
        }
    }

    #[test]
    fn three_distinct_roots() {
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        assert_roots(&real_cubic_roots(1.0, -6.0, 11.0, -6.0), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn one_real_root() {
        // (x-2)(x^2+x+1) = x^3 - x^2 - x - 2
        assert_roots(&real_cubic_roots(1.0, -1.0, -1.0, -2.0), &[2.0]);
    }

    #[test]
    fn triple_root() {
        // (x-5)^3 = x^3 - 15x^2 + 75x - 125
        let r = real_cubic_roots(1.0, -15.0, 75.0, -125.0);
        assert_eq!(r.len(), 1);
        assert_relative_eq!(r[0], 5.0, max_relative = 1e-4);
    }

    #[test]
    fn wildly_scaled_coefficients() {
        // Coefficients spanning many decades, roots near 1e-3, 1.0, 1e3.
        let (r1, r2, r3) = (1e-3, 1.0, 1e3);
        let a2 = -(r1 + r2 + r3);
        let a1 = r1 * r2 + r1 * r3 + r2 * r3;
        let a0 = -r1 * r2 * r3;
        let got = real_cubic_roots(1.0, a2, a1, a0);
        assert_roots(&got, &[r1, r2, r3]);
    }

    #[test]
    fn quadratic_fallback() {
        assert_roots(&real_cubic_roots(0.0, 1.0, -3.0, 2.0), &[1.0, 2.0]);
        assert_roots(&real_cubic_roots(0.0, 0.0, 2.0, -8.0), &[4.0]);
        assert!(real_cubic_roots(0.0, 1.0, 0.0, 1.0).is_empty());
    }

    #[test]
    fn polish_reaches_tight_tolerance() {
        let got = real_cubic_roots(2.0, -1.0, -13.0, -6.0); // roots -2, -0.5, 3
        assert_roots(&got, &[-2.0, -0.5, 3.0]);
        for r in got {
            let f = ((2.0 * r - 1.0) * r - 13.0) * r - 6.0;
            assert!(f.abs() < 1e-9, "residual {f} at root {r}");
        }
    }
}
