//! Output-line gain calibration from Johnson-Nyquist noise thermometry,
//! and the dB bookkeeping that turns it into an input-line attenuation.
//!
//! Heating the mixing-chamber stage changes the thermal noise emitted
//! toward the amplifier chain; the detected power follows
//!
//! ```text
//! P_OUT = dnu k_B G ( eta(f, T) T + T_HEMT )
//! ```
//!
//! where `eta` is the Bose-Einstein reduction of the classical `k_B T`
//! noise at finite frequency. The regression slope gives the chain gain
//! `G`, the intercept the amplifier noise temperature.

use serde::{Deserialize, Serialize};

use crate::constants::{H_PLANCK, K_B};
use crate::error::{Error, Result};
use crate::fitcal::{FitParam, FitReport};
use crate::math::lm::linear_fit;
use crate::units::ratio_to_db;

/// Quantum reduction factor of thermal noise power,
/// `eta = (h f / k T) / (exp(h f / k T) - 1)`. Approaches 1 in the
/// classical limit and 0 as T goes to zero.
pub fn bose_einstein_weight(frequency_hz: f64, temperature_k: f64) -> f64 {
    if temperature_k <= 0.0 {
        return 0.0;
    }
    let x = H_PLANCK * frequency_hz / (K_B * temperature_k);
    if x == 0.0 {
        return 1.0;
    }
    x / x.exp_m1()
}

/// One noise-thermometry sample.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NoisePowerPoint {
    /// Mixing-chamber stage temperature, K.
    pub stage_temperature_k: f64,
    /// Detected noise power in the measurement bandwidth, W.
    pub output_power_w: f64,
}

/// Calibrated output chain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GainCalibration {
    /// Chain power gain, linear.
    pub gain: f64,
    /// Chain power gain, dB.
    pub gain_db: f64,
    /// Spread of the per-point gain estimates, dB.
    pub gain_sigma_db: f64,
    /// Amplifier noise temperature from the regression intercept, K.
    pub hemt_temperature_k: f64,
    /// Set when the fitted noise temperature comes out negative; the
    /// calibration is still returned.
    pub hemt_temperature_flagged: bool,
    /// Gain inferred from each elevated-temperature point paired with the
    /// base point, dB.
    pub per_point_gain_db: Vec<f64>,
}

impl GainCalibration {
    pub fn fit_report(&self) -> FitReport {
        FitReport {
            parameters: vec![
                FitParam::new("gain_db", self.gain_db, self.gain_sigma_db),
                FitParam::new("hemt_temperature_k", self.hemt_temperature_k, 0.0),
            ],
            residual_norm: 0.0,
            converged: !self.per_point_gain_db.is_empty(),
        }
    }
}

/// Regresses detected noise power against the quantum-corrected stage
/// temperature.
///
/// Needs the base-temperature point plus at least two elevated
/// temperatures. The headline gain comes from the global regression; its
/// uncertainty is the standard deviation of the single-point estimates
/// formed by pairing each hot point with the base point. `eta_override`
/// replaces the Bose-Einstein weight (pass `Some(1.0)` for the classical
/// Johnson-Nyquist limit).
pub fn calibrate_output_gain(
    points: &[NoisePowerPoint],
    bandwidth_hz: f64,
    frequency_hz: f64,
    eta_override: Option<f64>,
) -> Result<GainCalibration> {
    if points.len() < 3 {
        return Err(Error::input(
            "gain calibration needs a base point plus at least two elevated temperatures",
        ));
    }
    if !(bandwidth_hz > 0.0) || !(frequency_hz > 0.0) {
        return Err(Error::input("bandwidth and frequency must be positive"));
    }
    for p in points {
        if !(p.stage_temperature_k > 0.0) || !(p.output_power_w > 0.0) {
            return Err(Error::input("temperatures and powers must be positive"));
        }
    }
    let eta = |t: f64| eta_override.unwrap_or_else(|| bose_einstein_weight(frequency_hz, t));

    // Effective radiated temperature on the x axis, power scaled to
    // temperature units on the y axis.
    let xs: Vec<f64> = points
        .iter()
        .map(|p| eta(p.stage_temperature_k) * p.stage_temperature_k)
        .collect();
    let ys: Vec<f64> = points
        .iter()
        .map(|p| p.output_power_w / (bandwidth_hz * K_B))
        .collect();
    let fit = linear_fit(&xs, &ys)
        .map_err(|_| Error::fit("temperatures are degenerate; cannot regress gain"))?;
    if fit.slope <= 0.0 {
        return Err(Error::fit("noise power does not grow with temperature"));
    }
    let gain = fit.slope;
    let hemt = fit.intercept / fit.slope;

    // Spread across the measurement set: pair each hot point with the
    // coldest one and difference away the amplifier term.
    let base_idx = points
        .iter()
        .enumerate()
        .min_by(|a, b| {
            a.1.stage_temperature_k
                .partial_cmp(&b.1.stage_temperature_k)
                .unwrap()
        })
        .map(|(i, _)| i)
        .unwrap();
    let mut per_point = Vec::new();
    for (i, _) in points.iter().enumerate() {
        if i == base_idx {
            continue;
        }
        let dx = xs[i] - xs[base_idx];
        if dx.abs() < 1e-12 {
            continue;
        }
        let g = (ys[i] - ys[base_idx]) / dx;
        if g > 0.0 {
            per_point.push(ratio_to_db(g));
        }
    }
    if per_point.len() < 2 {
        return Err(Error::fit("too few usable temperature differences"));
    }
    let mean = per_point.iter().sum::<f64>() / per_point.len() as f64;
    let var = per_point.iter().map(|g| (g - mean).powi(2)).sum::<f64>()
        / (per_point.len() - 1) as f64;

    Ok(GainCalibration {
        gain,
        gain_db: ratio_to_db(gain),
        gain_sigma_db: var.sqrt(),
        hemt_temperature_k: hemt,
        hemt_temperature_flagged: hemt < 0.0,
        per_point_gain_db: per_point,
    })
}

/// Input-line attenuation from the loop identity, as a positive dB number:
/// `A_IN = G_C - S_IO`.
pub fn line_attenuation(s_io_db: f64, gain_db: f64) -> f64 {
    gain_db - s_io_db
}

/// One row of a line-calibration table.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CalibrationRow {
    pub frequency_hz: f64,
    /// Net transmission through the full loop, dB (negative).
    pub s_io_db: f64,
    /// Output chain gain, dB.
    pub gain_db: f64,
    pub gain_sigma_db: f64,
    /// Input attenuation, positive dB.
    pub attenuation_db: f64,
}

/// Quantizes a quoted dB value to integer hundredths of a dB.
fn centi_db(db: f64) -> i64 {
    (db * 100.0).round() as i64
}

impl CalibrationRow {
    /// Builds a row with the attenuation filled in from the identity.
    pub fn from_measurement(
        frequency_hz: f64,
        s_io_db: f64,
        gain_db: f64,
        gain_sigma_db: f64,
    ) -> Self {
        CalibrationRow {
            frequency_hz,
            s_io_db,
            gain_db,
            gain_sigma_db,
            attenuation_db: line_attenuation(s_io_db, gain_db),
        }
    }

    /// Attenuation from the identity in exact hundredth-of-a-dB integer
    /// arithmetic. Quoted dB values carry at most two decimals, so this
    /// sidesteps binary rounding entirely.
    pub fn attenuation_centi_db(&self) -> i64 {
        centi_db(self.gain_db) - centi_db(self.s_io_db)
    }

    /// Whether the stored attenuation satisfies the identity exactly at
    /// quoted precision.
    pub fn identity_holds(&self) -> bool {
        centi_db(self.attenuation_db) == self.attenuation_centi_db()
    }

    /// The attenuation as it would appear in a one-decimal table, rounding
    /// halves away from zero like the usual hand-quoted convention.
    pub fn quoted_attenuation_db(&self) -> String {
        let c = self.attenuation_centi_db();
        let deci = if c >= 0 { (c + 5) / 10 } else { (c - 5) / 10 };
        format!("{}.{}", deci / 10, (deci % 10).abs())
    }
}
