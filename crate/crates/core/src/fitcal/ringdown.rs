//! Energy-decay (T1) extraction from a ringdown record.
//!
//! After the drive is switched off the stored energy decays as
//! `P(t) = P0 exp(-t/T1) + floor`; the corresponding contribution to the
//! resonance linewidth is `1/(2 pi T1)`. Comparing it against the
//! steady-state linewidth bounds the dephasing contribution.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitcal::{FitParam, FitReport, MeasurementTrace, TraceKind};
use crate::math::lm::{least_squares, LmOptions};

/// Exponential ringdown fit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingdownFit {
    /// Energy decay time, s.
    pub t1_s: f64,
    pub t1_sigma_s: f64,
    /// Linewidth equivalent `1/(2 pi T1)`, Hz.
    pub linewidth_hz: f64,
    /// Fitted initial amplitude above the floor.
    pub amplitude: f64,
    /// Fitted detection floor.
    pub floor: f64,
    pub sum_squared_residuals: f64,
    pub converged: bool,
}

impl RingdownFit {
    /// What remains of a steady-state linewidth after subtracting the
    /// energy-decay part: an upper bound on dephasing, Hz.
    pub fn dephasing_residual_hz(&self, steady_state_linewidth_hz: f64) -> f64 {
        steady_state_linewidth_hz - self.linewidth_hz
    }

    pub fn fit_report(&self) -> FitReport {
        FitReport {
            parameters: vec![
                FitParam::new("t1_s", self.t1_s, self.t1_sigma_s),
                FitParam::new("linewidth_hz", self.linewidth_hz, 0.0),
                FitParam::new("amplitude", self.amplitude, 0.0),
                FitParam::new("floor", self.floor, 0.0),
            ],
            residual_norm: self.sum_squared_residuals.sqrt(),
            converged: self.converged,
        }
    }
}

/// Fits an exponential with a floor to a decaying power record.
pub fn ringdown_t1(trace: &MeasurementTrace) -> Result<RingdownFit> {
    trace.validate_for_fit()?;
    if trace.kind != TraceKind::TimeSeries {
        return Err(Error::input("ringdown analysis needs a time series"));
    }
    let samples = trace.real_values()?;
    let times = &trace.axis;
    let n = samples.len();

    let third = n / 3;
    let head: f64 = samples[..third].iter().sum::<f64>() / third as f64;
    let tail: f64 = samples[n - third..].iter().sum::<f64>() / third as f64;
    if head <= 1.05 * tail {
        return Err(Error::fit(
            "record does not decay; refusing to fit a ringdown",
        ));
    }

    let floor0 = samples.iter().cloned().fold(f64::MAX, f64::min);
    let amp0 = samples[0] - floor0;
    let target = floor0 + amp0 / std::f64::consts::E;
    let t_start = times[0];
    let t10 = samples
        .iter()
        .zip(times)
        .find(|(&s, _)| s <= target)
        .map(|(_, &t)| t - t_start)
        .unwrap_or((times[n - 1] - t_start) / 3.0)
        .max(times[1] - times[0]);

    let fit = least_squares(
        |p, out| {
            let (a, t1, c) = (p[0], p[1], p[2]);
            if t1 <= 0.0 {
                out.iter_mut().for_each(|r| *r = 1e6);
                return;
            }
            for (i, (&t, &s)) in times.iter().zip(samples).enumerate() {
                out[i] = a * (-(t - t_start) / t1).exp() + c - s;
            }
        },
        n,
        &[amp0, t10, floor0],
        &[amp0 / 10.0, t10 / 10.0, (amp0 / 100.0).max(1e-300)],
        &LmOptions::default(),
    )?;
    if !fit.converged {
        return Err(Error::fit(format!(
            "ringdown fit did not converge (ssr {:.3e})",
            fit.ssr
        )));
    }
    let t1 = fit.params[1];
    Ok(RingdownFit {
        t1_s: t1,
        t1_sigma_s: fit.sigma(1),
        linewidth_hz: 1.0 / (std::f64::consts::TAU * t1),
        amplitude: fit.params[0],
        floor: fit.params[2],
        sum_squared_residuals: fit.ssr,
        converged: fit.converged,
    })
}
