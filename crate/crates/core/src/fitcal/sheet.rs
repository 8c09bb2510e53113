//! Sheet-inductance extraction from a length series of test resonators.
//!
//! For wire resonators sharing one film and one shunt capacitor, the
//! resonance obeys `1/f0^2 = 4 pi^2 Ls C l / w + b`, so the slope of
//! `1/f0^2` against wire length gives the sheet inductance directly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitcal::{FitParam, FitReport};
use crate::math::lm::linear_fit;

/// Result of the length-series regression.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SheetInductanceFit {
    /// Kinetic sheet inductance, H per square.
    pub sheet_inductance_h: f64,
    pub sheet_inductance_sigma_h: f64,
    /// Fitted slope of 1/f0^2 versus length, s^2/m.
    pub slope_s2_per_m: f64,
    /// Fitted intercept of 1/f0^2, s^2 (parasitic or offset inductance).
    pub intercept_s2: f64,
    pub sum_squared_residuals: f64,
}

impl SheetInductanceFit {
    pub fn fit_report(&self) -> FitReport {
        FitReport {
            parameters: vec![
                FitParam::new(
                    "sheet_inductance_h",
                    self.sheet_inductance_h,
                    self.sheet_inductance_sigma_h,
                ),
                FitParam::new("slope_s2_per_m", self.slope_s2_per_m, 0.0),
                FitParam::new("intercept_s2", self.intercept_s2, 0.0),
            ],
            residual_norm: self.sum_squared_residuals.sqrt(),
            converged: true,
        }
    }
}

/// Fits `1/f0^2` against wire length and converts the slope to a sheet
/// inductance via `Ls = m w / (4 pi^2 C)`.
pub fn fit_sheet_inductance(
    points: &[(f64, f64)],
    capacitance_f: f64,
    width_m: f64,
) -> Result<SheetInductanceFit> {
    if points.len() < 2 {
        return Err(Error::input("need at least two lengths"));
    }
    if !(capacitance_f > 0.0) || !(width_m > 0.0) {
        return Err(Error::input("capacitance and width must be positive"));
    }
    for &(l, f0) in points {
        if !(l > 0.0) || !(f0 > 0.0) {
            return Err(Error::input("lengths and frequencies must be positive"));
        }
    }
    let lengths: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| 1.0 / (p.1 * p.1)).collect();
    let fit = linear_fit(&lengths, &ys).map_err(|_| {
        Error::fit("degenerate length series: all wire lengths coincide")
    })?;
    if fit.slope <= 0.0 {
        return Err(Error::fit(
            "non-positive slope of 1/f0^2 versus length; data inconsistent with a wire series",
        ));
    }
    let factor = width_m / (4.0 * std::f64::consts::PI.powi(2) * capacitance_f);
    Ok(SheetInductanceFit {
        sheet_inductance_h: fit.slope * factor,
        sheet_inductance_sigma_h: fit.slope_sigma * factor,
        slope_s2_per_m: fit.slope,
        intercept_s2: fit.intercept,
        sum_squared_residuals: fit.ssr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const C: f64 = 60e-15;
    const W: f64 = 2e-6;
    const LS: f64 = 40e-12;

    fn model_points(intercept: f64) -> Vec<(f64, f64)> {
        let slope = 4.0 * std::f64::consts::PI.powi(2) * LS * C / W;
        [100e-6, 160e-6, 220e-6, 300e-6, 380e-6]
            .iter()
            .map(|&l| (l, 1.0 / (slope * l + intercept).sqrt()))
            .collect()
    }

    #[test]
    fn recovers_forty_picohenry_per_square() {
        let fit = fit_sheet_inductance(&model_points(0.0), C, W).unwrap();
        assert_relative_eq!(fit.sheet_inductance_h, LS, max_relative = 1e-10);
        assert!(fit.sum_squared_residuals < 1e-30);
        assert!(fit.intercept_s2.abs() < 1e-24);
    }

    #[test]
    fn intercept_absorbs_parasitic_offset() {
        let fit = fit_sheet_inductance(&model_points(2e-21), C, W).unwrap();
        assert_relative_eq!(fit.sheet_inductance_h, LS, max_relative = 1e-9);
        assert_relative_eq!(fit.intercept_s2, 2e-21, max_relative = 1e-9);
    }

    #[test]
    fn doubling_capacitance_halves_the_result() {
        let points = model_points(0.0);
        let a = fit_sheet_inductance(&points, C, W).unwrap();
        let b = fit_sheet_inductance(&points, 2.0 * C, W).unwrap();
        assert_relative_eq!(
            b.sheet_inductance_h,
            a.sheet_inductance_h / 2.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn rejects_degenerate_series() {
        let same = vec![(100e-6, 10e9), (100e-6, 11e9)];
        assert!(fit_sheet_inductance(&same, C, W).is_err());
        assert!(fit_sheet_inductance(&model_points(0.0)[..1], C, W).is_err());
    }
}
