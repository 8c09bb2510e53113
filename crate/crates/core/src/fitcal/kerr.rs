//! Kerr coefficient extraction from pump-probe shift data.
//!
//! Each pump power populates the cavity with `n` photons and drags the
//! probe resonance by `-K n`; the (weighted) slope of the shift against the
//! photon number gives `K`. Photon numbers come from applied powers through
//! the calibrated input-line attenuation, so a systematic attenuation
//! uncertainty of `sigma_A` dB scales every photon number by a common
//! factor and contributes `|K| ln(10)/10 sigma_A` to the Kerr uncertainty.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitcal::{FitParam, FitReport};
use crate::math::lm::{linear_fit, proportional_fit, weighted_linear_fit};

/// One pump level: inferred intracavity photons and the measured resonance
/// displacement (negative for a softening nonlinearity).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ShiftPoint {
    pub photon_number: f64,
    pub shift_hz: f64,
    /// Optional per-point shift uncertainty for weighting, Hz.
    pub shift_sigma_hz: Option<f64>,
}

/// Fitted Kerr coefficient with its uncertainty budget.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KerrSlopeFit {
    /// Kerr shift per photon (magnitude of the fitted slope), Hz.
    pub kerr_hz: f64,
    /// Total one-sigma uncertainty, Hz.
    pub kerr_sigma_hz: f64,
    /// Statistical part of the uncertainty from the regression, Hz.
    pub statistical_sigma_hz: f64,
    /// Systematic part from the attenuation calibration, Hz.
    pub attenuation_sigma_hz: f64,
    /// Fitted shift at zero photons, Hz (zero when anchored at the origin).
    pub intercept_hz: f64,
    /// False when the shifts wander against the fitted trend by more than
    /// their scatter; the slope is still returned.
    pub monotonic: bool,
    pub sum_squared_residuals: f64,
}

impl KerrSlopeFit {
    pub fn fit_report(&self) -> FitReport {
        FitReport {
            parameters: vec![
                FitParam::new("kerr_hz", self.kerr_hz, self.kerr_sigma_hz),
                FitParam::new("intercept_hz", self.intercept_hz, 0.0),
                FitParam::new(
                    "statistical_sigma_hz",
                    self.statistical_sigma_hz,
                    0.0,
                ),
                FitParam::new(
                    "attenuation_sigma_hz",
                    self.attenuation_sigma_hz,
                    0.0,
                ),
            ],
            residual_norm: self.sum_squared_residuals.sqrt(),
            converged: true,
        }
    }
}

/// Fits the shift-per-photon slope.
///
/// `attenuation_sigma_db` is the input-line calibration uncertainty folded
/// into the total error. With `fit_intercept` the regression co-fits a
/// drive-independent offset (the default in practice); without it the line
/// is anchored at the origin.
pub fn extract_kerr(
    points: &[ShiftPoint],
    attenuation_sigma_db: f64,
    fit_intercept: bool,
) -> Result<KerrSlopeFit> {
    if points.len() < 3 {
        return Err(Error::input("need at least three pump levels"));
    }
    if attenuation_sigma_db < 0.0 {
        return Err(Error::input("attenuation uncertainty must be non-negative"));
    }
    for p in points {
        if p.photon_number < 0.0 {
            return Err(Error::input("photon numbers must be non-negative"));
        }
        if let Some(s) = p.shift_sigma_hz {
            if !(s > 0.0) {
                return Err(Error::input("shift uncertainties must be positive"));
            }
        }
    }

    let ns: Vec<f64> = points.iter().map(|p| p.photon_number).collect();
    let shifts: Vec<f64> = points.iter().map(|p| p.shift_hz).collect();
    let weighted = points.iter().all(|p| p.shift_sigma_hz.is_some());

    let (slope, slope_sigma, intercept, ssr) = if fit_intercept {
        if weighted {
            let sigmas: Vec<f64> = points.iter().map(|p| p.shift_sigma_hz.unwrap()).collect();
            let weights: Vec<f64> = sigmas.iter().map(|s| 1.0 / (s * s)).collect();
            let fit = weighted_linear_fit(&ns, &shifts, Some(&weights))?;
            (fit.slope, fit.slope_sigma, fit.intercept, fit.ssr)
        } else {
            let fit = linear_fit(&ns, &shifts)?;
            (fit.slope, fit.slope_sigma, fit.intercept, fit.ssr)
        }
    } else {
        let (slope, sigma, ssr) = proportional_fit(&ns, &shifts)?;
        (slope, sigma, 0.0, ssr)
    };

    let kerr = slope.abs();
    let attenuation_sigma = kerr * (10f64.ln() / 10.0) * attenuation_sigma_db;
    let total = (slope_sigma * slope_sigma + attenuation_sigma * attenuation_sigma).sqrt();

    // Flag shift sequences that reverse direction by more than their
    // scatter; a clean Kerr series moves one way with power.
    let rms = (ssr / points.len() as f64).sqrt();
    let mut sorted: Vec<(f64, f64)> = ns.iter().cloned().zip(shifts.iter().cloned()).collect();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let direction = slope.signum();
    let monotonic = sorted
        .windows(2)
        .all(|w| direction * (w[1].1 - w[0].1) > -3.0 * rms - 1e-12);

    Ok(KerrSlopeFit {
        kerr_hz: kerr,
        kerr_sigma_hz: total,
        statistical_sigma_hz: slope_sigma,
        attenuation_sigma_hz: attenuation_sigma,
        intercept_hz: intercept,
        monotonic,
        sum_squared_residuals: ssr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_distr::{Distribution, Normal};

    fn softening_points(kerr_hz: f64, noise_frac: f64, seed: u64) -> Vec<ShiftPoint> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let dist = Normal::new(0.0, 1.0).unwrap();
        (1..=8)
            .map(|i| {
                let n = i as f64 * 0.75;
                let clean = -kerr_hz * n;
                ShiftPoint {
                    photon_number: n,
                    shift_hz: clean + noise_frac * kerr_hz * dist.sample(&mut rng),
                    shift_sigma_hz: Some(noise_frac.max(1e-4) * kerr_hz),
                }
            })
            .collect()
    }

    #[test]
    fn exact_slope_recovery() {
        let fit = extract_kerr(&softening_points(123.5e3, 0.0, 0), 0.0, true).unwrap();
        assert_relative_eq!(fit.kerr_hz, 123.5e3, max_relative = 1e-10);
        assert!(fit.intercept_hz.abs() < 1.0);
        assert!(fit.monotonic);
        assert_eq!(fit.attenuation_sigma_hz, 0.0);
    }

    #[test]
    fn noisy_recovery_within_quoted_envelope() {
        // 3% scatter with the attenuation systematic folded in lands inside
        // a +-3 kHz envelope around 123.5 kHz.
        for seed in [1, 2, 3] {
            let fit = extract_kerr(&softening_points(123.5e3, 0.03, seed), 0.1, true).unwrap();
            assert!(
                (fit.kerr_hz - 123.5e3).abs() < 3.0 * fit.kerr_sigma_hz.max(3e3),
                "seed {seed}: {} vs 123.5 kHz",
                fit.kerr_hz
            );
        }
    }

    #[test]
    fn attenuation_systematic_dominates_when_large() {
        let points = softening_points(123.5e3, 0.001, 4);
        let tight = extract_kerr(&points, 0.0, true).unwrap();
        let loose = extract_kerr(&points, 0.5, true).unwrap();
        assert_relative_eq!(tight.kerr_hz, loose.kerr_hz, max_relative = 1e-12);
        assert!(loose.kerr_sigma_hz > 5.0 * tight.kerr_sigma_hz);
        // sigma_K = |K| ln(10)/10 sigma_A in the systematic-dominated limit.
        let expected = loose.kerr_hz * 10f64.ln() / 10.0 * 0.5;
        assert_relative_eq!(loose.attenuation_sigma_hz, expected, max_relative = 1e-12);
    }

    #[test]
    fn zero_shifts_give_zero_kerr() {
        let points: Vec<ShiftPoint> = (1..=5)
            .map(|i| ShiftPoint {
                photon_number: i as f64,
                shift_hz: 0.0,
                shift_sigma_hz: None,
            })
            .collect();
        let fit = extract_kerr(&points, 0.2, true).unwrap();
        assert_eq!(fit.kerr_hz, 0.0);
        assert_eq!(fit.kerr_sigma_hz, 0.0);
    }

    #[test]
    fn origin_anchored_variant() {
        let points = softening_points(50e3, 0.0, 5);
        let fit = extract_kerr(&points, 0.0, false).unwrap();
        assert_relative_eq!(fit.kerr_hz, 50e3, max_relative = 1e-10);
        assert_eq!(fit.intercept_hz, 0.0);
    }

    #[test]
    fn non_monotonic_data_is_flagged() {
        let mut points = softening_points(100e3, 0.0, 6);
        // Corrupt one point far beyond any scatter.
        points[4].shift_hz += 250e3;
        let fit = extract_kerr(&points, 0.0, true).unwrap();
        assert!(!fit.monotonic);
    }

    #[test]
    fn input_validation() {
        assert!(extract_kerr(&softening_points(1e3, 0.0, 0)[..2], 0.0, true).is_err());
        let mut bad = softening_points(1e3, 0.0, 0);
        bad[0].photon_number = -1.0;
        assert!(extract_kerr(&bad, 0.0, true).is_err());
    }
}
