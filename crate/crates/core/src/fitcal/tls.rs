//! Saturable-loss fit of the power dependence of the internal quality
//! factor.
//!
//! Dielectric two-level defects absorb at low drive and saturate at high
//! drive; the standard phenomenological form
//!
//! ```text
//! 1/Q_i(n) = (1/Q_tls) (1 + n/n_sat)^(-beta) + 1/Q_other
//! ```
//!
//! interpolates between the low-power floor and the power-independent
//! residual `Q_other`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitcal::{FitParam, FitReport};
use crate::math::lm::{least_squares, LmOptions};

/// Fitted saturable-loss parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TlsSaturationFit {
    /// Quality factor of the saturable channel alone at zero power.
    pub tls_q: f64,
    pub tls_q_sigma: f64,
    /// Photon number at which the channel begins to saturate.
    pub saturation_photons: f64,
    /// Power-independent residual quality factor.
    pub other_q: f64,
    /// Saturation exponent beta.
    pub exponent: f64,
    /// Whether beta was fitted (true) or held fixed (false).
    pub exponent_fitted: bool,
    pub sum_squared_residuals: f64,
    pub converged: bool,
}

impl TlsSaturationFit {
    /// Model internal Q at a photon number.
    pub fn q_at(&self, photon_number: f64) -> f64 {
        let inv = (1.0 / self.tls_q)
            * (1.0 + photon_number / self.saturation_photons).powf(-self.exponent)
            + 1.0 / self.other_q;
        1.0 / inv
    }

    pub fn fit_report(&self) -> FitReport {
        FitReport {
            parameters: vec![
                FitParam::new("tls_q", self.tls_q, self.tls_q_sigma),
                FitParam::new("saturation_photons", self.saturation_photons, 0.0),
                FitParam::new("other_q", self.other_q, 0.0),
                FitParam::new("exponent", self.exponent, 0.0),
            ],
            residual_norm: self.sum_squared_residuals.sqrt(),
            converged: self.converged,
        }
    }
}

/// Fits the saturation model to `(n, Q_i)` samples.
///
/// Needs at least five points spanning two decades of photon number.
/// `exponent` fixes beta (0.5 is the customary choice); pass `None` to fit
/// it alongside the other parameters.
pub fn fit_tls_saturation(
    photon_numbers: &[f64],
    internal_qs: &[f64],
    exponent: Option<f64>,
) -> Result<TlsSaturationFit> {
    if photon_numbers.len() != internal_qs.len() {
        return Err(Error::input("photon and Q arrays differ in length"));
    }
    if photon_numbers.len() < 5 {
        return Err(Error::input("need at least five power points"));
    }
    let n_min = photon_numbers.iter().cloned().fold(f64::MAX, f64::min);
    let n_max = photon_numbers.iter().cloned().fold(f64::MIN, f64::max);
    if !(n_min > 0.0) {
        return Err(Error::input("photon numbers must be positive"));
    }
    if n_max / n_min < 100.0 {
        return Err(Error::fit(format!(
            "insufficient dynamic range: {:.1e}..{:.1e} spans less than two decades",
            n_min, n_max
        )));
    }
    if internal_qs.iter().any(|&q| !(q > 0.0)) {
        return Err(Error::input("quality factors must be positive"));
    }
    if let Some(beta) = exponent {
        if !(beta > 0.0) {
            return Err(Error::input("saturation exponent must be positive"));
        }
    }

    let q_min = internal_qs.iter().cloned().fold(f64::MAX, f64::min);
    let q_max = internal_qs.iter().cloned().fold(f64::MIN, f64::max);
    let other0 = 1.05 * q_max;
    let tls_inv0 = (1.0 / q_min - 1.0 / other0).max(0.1 / q_min);
    let nsat0 = (n_min * n_max).sqrt();

    // Log-parametrize the positive quantities; residuals are relative
    // errors in 1/Q so all points weigh equally.
    let fit_beta = exponent.is_none();
    let mut p0 = vec![(1.0 / tls_inv0).ln(), nsat0.ln(), other0.ln()];
    let mut scales = vec![0.2, 0.5, 0.2];
    if fit_beta {
        p0.push(0.5);
        scales.push(0.05);
    }
    let beta_fixed = exponent.unwrap_or(0.5);
    let n_pts = photon_numbers.len();

    let fit = least_squares(
        |p, out| {
            let beta = if fit_beta { p[3] } else { beta_fixed };
            if !(0.01..=3.0).contains(&beta) || p.iter().any(|v| !v.is_finite()) {
                out.iter_mut().for_each(|r| *r = 1e6);
                return;
            }
            let (q_tls, n_sat, q_other) = (p[0].exp(), p[1].exp(), p[2].exp());
            for (i, (&n, &q)) in photon_numbers.iter().zip(internal_qs).enumerate() {
                let inv = (1.0 / q_tls) * (1.0 + n / n_sat).powf(-beta) + 1.0 / q_other;
                out[i] = (inv - 1.0 / q) * q;
            }
        },
        n_pts,
        &p0,
        &scales,
        &LmOptions {
            max_iterations: 600,
            ..LmOptions::default()
        },
    )?;

    let tls_q = fit.params[0].exp();
    Ok(TlsSaturationFit {
        tls_q,
        tls_q_sigma: tls_q * fit.sigma(0),
        saturation_photons: fit.params[1].exp(),
        other_q: fit.params[2].exp(),
        exponent: if fit_beta { fit.params[3] } else { beta_fixed },
        exponent_fitted: fit_beta,
        sum_squared_residuals: fit.ssr,
        converged: fit.converged,
    })
}
