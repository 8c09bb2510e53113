//! Switching-time extraction from a phase time record via its
//! autocorrelation.
//!
//! A symmetric two-state telegraph process with mean dwell time `tau_d`
//! per state has autocorrelation `exp(-2 |dt| / tau_d)`. The fit reports
//! the raw decay constant `tau_c` of `exp(-|dt| / tau_c)` together with
//! both readings: quoted-as-is (`tau = tau_c`) and the mean dwell time
//! (`tau_d = 2 tau_c`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitcal::{FitParam, FitReport, MeasurementTrace, TraceKind};
use crate::math::lm::{least_squares, LmOptions};

/// Autocorrelation decay fit of a telegraph-like record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TelegraphFit {
    /// Decay constant of the autocorrelation exp(-dt/tau), s.
    pub decay_time_s: f64,
    /// Formal one-sigma from the exponential fit, s. Neighboring
    /// autocorrelation lags share samples, so treat this as a lower bound.
    pub decay_time_sigma_s: f64,
    /// Mean dwell time per state under the symmetric two-state reading,
    /// `2 decay_time_s`.
    pub dwell_time_s: f64,
    /// False when the decay is not slower than twice the sample interval;
    /// a white-noise record lands here.
    pub resolved: bool,
    /// Number of autocorrelation lags used in the fit.
    pub fit_lags: usize,
    pub sum_squared_residuals: f64,
}

impl TelegraphFit {
    pub fn fit_report(&self) -> FitReport {
        FitReport {
            parameters: vec![
                FitParam::new("decay_time_s", self.decay_time_s, self.decay_time_sigma_s),
                FitParam::new("dwell_time_s", self.dwell_time_s, 2.0 * self.decay_time_sigma_s),
                FitParam::new("resolved", if self.resolved { 1.0 } else { 0.0 }, 0.0),
            ],
            residual_norm: self.sum_squared_residuals.sqrt(),
            converged: true,
        }
    }
}

/// Mean-subtracted, biased autocorrelation normalized to lag zero.
fn autocorrelation(samples: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let x: Vec<f64> = samples.iter().map(|s| s - mean).collect();
    let c0 = x.iter().map(|v| v * v).sum::<f64>() / n as f64;
    let scale = samples.iter().map(|s| s * s).sum::<f64>() / n as f64;
    if c0 <= 1e-24 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::fit(
            "record has no fluctuations; autocorrelation is degenerate",
        ));
    }
    let mut acf = Vec::with_capacity(max_lag + 1);
    for k in 0..=max_lag {
        let c: f64 = x[..n - k].iter().zip(&x[k..]).map(|(a, b)| a * b).sum();
        acf.push(c / (n as f64 * c0));
    }
    Ok(acf)
}

/// Extracts the autocorrelation decay time of a uniformly sampled time
/// record.
///
/// The fit window runs from lag zero out to a few decay times. Lags past a
/// tenth of the record are considered unreliable, so the autocorrelation
/// must fall below 1/e before that point; a record that drifts for its
/// whole duration errors out instead of returning a meaningless constant.
pub fn telegraph_tau(trace: &MeasurementTrace) -> Result<TelegraphFit> {
    trace.validate_for_fit()?;
    if trace.kind != TraceKind::TimeSeries {
        return Err(Error::input("telegraph analysis needs a time series"));
    }
    let samples = trace.real_values()?;
    let dt = trace.uniform_step()?;
    let n = samples.len();
    let max_reliable = (n / 10).clamp(4, n.saturating_sub(20).max(4));

    // Grow the lag horizon geometrically until the 1/e crossing is inside
    // it; this keeps the cost linear for records much longer than the
    // decay.
    let inv_e = std::f64::consts::E.recip();
    let mut horizon = 256.min(max_reliable);
    let (probe, k_e) = loop {
        let probe = autocorrelation(samples, horizon)?;
        if let Some(k) = probe.iter().position(|&r| r < inv_e) {
            break (probe, k.max(1));
        }
        if horizon >= max_reliable {
            return Err(Error::fit(format!(
                "no decay detected: autocorrelation stays above 1/e over the \
                 first {max_reliable} lags; the record is too short for its \
                 slowest fluctuation"
            )));
        }
        horizon = (horizon * 4).min(max_reliable);
    };
    // The window extends to five decay times so the fit sees both the drop
    // and the flat tail.
    let k_fit = (5 * k_e).clamp(8.min(max_reliable), max_reliable);
    let acf: Vec<f64> = if k_fit < probe.len() {
        probe[..=k_fit].to_vec()
    } else {
        autocorrelation(samples, k_fit)?
    };
    let n_lags = acf.len();

    let tau0 = (k_e as f64 * dt).max(dt);
    let fit = least_squares(
        |p, out| {
            let (a, tau) = (p[0], p[1]);
            if tau <= 0.0 || !a.is_finite() {
                out.iter_mut().for_each(|r| *r = 1e6);
                return;
            }
            for (k, &r) in acf.iter().enumerate() {
                out[k] = a * (-(k as f64) * dt / tau).exp() - r;
            }
        },
        n_lags,
        &[1.0, tau0],
        &[0.05, tau0 / 10.0],
        &LmOptions::default(),
    )?;

    let tau = fit.params[1];
    let duration = n as f64 * dt;
    if tau > 0.5 * duration {
        return Err(Error::fit(format!(
            "no decay detected: fitted constant {tau:.3e} s exceeds half the record ({duration:.3e} s)"
        )));
    }

    Ok(TelegraphFit {
        decay_time_s: tau,
        decay_time_sigma_s: fit.sigma(1),
        dwell_time_s: 2.0 * tau,
        resolved: tau >= 2.0 * dt,
        fit_lags: n_lags,
        sum_squared_residuals: fit.ssr,
    })
}
