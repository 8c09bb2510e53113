//! Complex single-port reflection fit.
//!
//! The model is an ideal reflection resonator behind an instrumental
//! background of amplitude, amplitude slope, global phase and cable delay:
//!
//! ```text
//! S(f) = A (1 + m x) exp(i (theta - 2 pi tau (f - f_ref)))
//!        [ 1 - (2/Qc) / (1/Ql - 2i (f - f0)/f0) ],   x = (f - f_ref)/f_ref
//! ```
//!
//! All seven parameters are fitted simultaneously on the real and imaginary
//! parts, with a deterministic initialization read off the trace geometry.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitcal::{FitParam, FitReport, MeasurementTrace, TraceKind};
use crate::math::lm::{least_squares, linear_fit, LmOptions};

const TWO_PI: f64 = std::f64::consts::TAU;

/// Reflection model with instrumental background; also the generator used
/// to synthesize traces.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ReflectionModel {
    pub resonance_hz: f64,
    pub loaded_q: f64,
    pub coupling_q: f64,
    /// Background amplitude at the reference frequency.
    pub amplitude: f64,
    /// Background phase at the reference frequency, rad.
    pub phase_rad: f64,
    /// Fractional amplitude slope per fractional frequency offset.
    pub amplitude_slope: f64,
    /// Cable delay, s.
    pub delay_s: f64,
    /// Frequency at which the background is anchored, Hz.
    pub reference_hz: f64,
}

impl ReflectionModel {
    pub fn eval(&self, f_hz: f64) -> Complex64 {
        let x = (f_hz - self.reference_hz) / self.reference_hz;
        let background = self.amplitude
            * (1.0 + self.amplitude_slope * x)
            * Complex64::new(0.0, self.phase_rad - TWO_PI * self.delay_s * (f_hz - self.reference_hz))
                .exp();
        let resonator = Complex64::new(1.0, 0.0)
            - (2.0 / self.coupling_q)
                / Complex64::new(
                    1.0 / self.loaded_q,
                    -2.0 * (f_hz - self.resonance_hz) / self.resonance_hz,
                );
        background * resonator
    }
}

/// Fitted resonance parameters with one-sigma uncertainties.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResonanceFit {
    pub resonance_hz: f64,
    pub resonance_sigma_hz: f64,
    pub loaded_q: f64,
    pub internal_q: f64,
    pub internal_q_sigma: f64,
    pub coupling_q: f64,
    pub coupling_q_sigma: f64,
    /// Internal linewidth `f0 / Q_i`, Hz.
    pub internal_linewidth_hz: f64,
    pub amplitude: f64,
    pub amplitude_slope: f64,
    pub phase_rad: f64,
    pub delay_s: f64,
    /// Frequency the background slope, phase and delay are referenced to
    /// (the trace midpoint). Together with the other fields this pins down
    /// a complete [`ReflectionModel`] for residual inspection.
    pub reference_hz: f64,
    pub residual_norm: f64,
    pub converged: bool,
}

impl ResonanceFit {
    /// The fitted reflection model, for evaluating residuals.
    pub fn model(&self) -> ReflectionModel {
        ReflectionModel {
            resonance_hz: self.resonance_hz,
            loaded_q: self.loaded_q,
            coupling_q: self.coupling_q,
            amplitude: self.amplitude,
            phase_rad: self.phase_rad,
            amplitude_slope: self.amplitude_slope,
            delay_s: self.delay_s,
            reference_hz: self.reference_hz,
        }
    }
}

impl ResonanceFit {
    pub fn fit_report(&self) -> FitReport {
        FitReport {
            parameters: vec![
                FitParam::new("resonance_hz", self.resonance_hz, self.resonance_sigma_hz),
                FitParam::new("internal_q", self.internal_q, self.internal_q_sigma),
                FitParam::new("coupling_q", self.coupling_q, self.coupling_q_sigma),
                FitParam::new("loaded_q", self.loaded_q, 0.0),
                FitParam::new(
                    "internal_linewidth_hz",
                    self.internal_linewidth_hz,
                    0.0,
                ),
                FitParam::new("delay_s", self.delay_s, 0.0),
            ],
            residual_norm: self.residual_norm,
            converged: self.converged,
        }
    }
}

fn unwrap_phases(values: &[Complex64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut offset = 0.0;
    let mut prev = values[0].arg();
    out.push(prev);
    for v in &values[1..] {
        let raw = v.arg();
        let mut d = raw - prev;
        while d > std::f64::consts::PI {
            d -= TWO_PI;
        }
        while d < -std::f64::consts::PI {
            d += TWO_PI;
        }
        offset += d;
        out.push(out[0] + offset);
        prev = raw;
    }
    out
}

struct InitialGuess {
    model: ReflectionModel,
}

fn initial_guess(freqs: &[f64], values: &[Complex64]) -> InitialGuess {
    let n = freqs.len();
    let edge = (n / 10).max(2);
    let f_ref = 0.5 * (freqs[0] + freqs[n - 1]);

    let baseline: f64 = values[..edge]
        .iter()
        .chain(&values[n - edge..])
        .map(|v| v.norm())
        .sum::<f64>()
        / (2 * edge) as f64;

    // Cable delay from the phase slope of the background-dominated edges,
    // fitted per edge so that any winding through the resonance (a full
    // turn when the port is overcoupled) cannot leak into the estimate.
    let phases = unwrap_phases(values);
    let mut slopes = Vec::new();
    for range in [0..edge, n - edge..n] {
        if let Ok(fit) = linear_fit(&freqs[range.clone()], &phases[range]) {
            slopes.push(fit.slope);
        }
    }
    let delay = if slopes.is_empty() {
        0.0
    } else {
        -slopes.iter().sum::<f64>() / slopes.len() as f64 / TWO_PI
    };

    // Background phase at the reference after removing the delay estimate,
    // averaged circularly over the edge samples.
    let mut sum = Complex64::new(0.0, 0.0);
    for i in (0..edge).chain(n - edge..n) {
        let corrected = values[i] * Complex64::new(0.0, TWO_PI * delay * (freqs[i] - f_ref)).exp();
        sum += corrected / corrected.norm().max(1e-300);
    }
    let phase = sum.arg();

    // The resonance sits at the farthest complex excursion from the
    // background point, and the excursion length is the resonance circle's
    // diameter. Working in the complex plane keeps both estimates valid
    // when the dip wraps the origin (overcoupled port), where the
    // magnitude alone misplaces the minimum.
    let background = Complex64::from_polar(baseline, phase);
    let excursions: Vec<f64> = values
        .iter()
        .zip(freqs)
        .map(|(v, &f)| {
            let corrected = v * Complex64::new(0.0, TWO_PI * delay * (f - f_ref)).exp();
            (corrected - background).norm()
        })
        .collect();
    let (i_max, diameter) = excursions
        .iter()
        .enumerate()
        .fold((0, 0.0), |acc, (i, &d)| if d > acc.1 { (i, d) } else { acc });
    let f0 = freqs[i_max];

    // The excursion falls to half its peak sqrt(3) half-linewidths out.
    let above_half = excursions.iter().filter(|&&d| d >= 0.5 * diameter).count();
    let spacing = (freqs[n - 1] - freqs[0]) / (n - 1) as f64;
    let fwhm = (above_half.max(1) as f64) * spacing;
    let loaded_q = (3f64.sqrt() * f0 / fwhm).clamp(10.0, 1e9);

    let coupling_q = 2.0 * loaded_q * baseline / diameter.max(1e-6 * baseline);

    InitialGuess {
        model: ReflectionModel {
            resonance_hz: f0,
            loaded_q,
            coupling_q,
            amplitude: baseline,
            phase_rad: phase,
            amplitude_slope: 0.0,
            delay_s: delay,
            reference_hz: f_ref,
        },
    }
}

/// Fits the seven-parameter reflection model to a frequency sweep.
///
/// Fails when the optimizer does not converge, the fitted resonance falls
/// outside the measured span, the internal quality factor comes out
/// non-positive, or the span covers fewer than three linewidths.
pub fn fit_resonance(trace: &MeasurementTrace) -> Result<ResonanceFit> {
    trace.validate_for_fit()?;
    if trace.kind != TraceKind::FrequencySweep {
        return Err(Error::input("resonance fits need a frequency sweep"));
    }
    let freqs = &trace.axis;
    let values = trace.complex_values()?;
    let n = freqs.len();
    let span = freqs[n - 1] - freqs[0];

    let guess = initial_guess(freqs, values).model;
    let p0 = [
        guess.resonance_hz,
        guess.loaded_q,
        guess.coupling_q,
        guess.amplitude,
        guess.phase_rad,
        guess.amplitude_slope,
        guess.delay_s,
    ];
    let scales = [
        (span / 100.0).max(1.0),
        guess.loaded_q / 10.0,
        guess.coupling_q / 10.0,
        (guess.amplitude / 100.0).max(1e-12),
        0.01,
        0.1,
        1e-10,
    ];
    let f_ref = guess.reference_hz;

    let fit = least_squares(
        |p, out| {
            if p[1] <= 0.0 || p[2] <= 0.0 || p[3] <= 0.0 || p[0] <= 0.0 {
                out.iter_mut().for_each(|r| *r = 1e6);
                return;
            }
            let model = ReflectionModel {
                resonance_hz: p[0],
                loaded_q: p[1],
                coupling_q: p[2],
                amplitude: p[3],
                phase_rad: p[4],
                amplitude_slope: p[5],
                delay_s: p[6],
                reference_hz: f_ref,
            };
            for (i, (&f, v)) in freqs.iter().zip(values).enumerate() {
                let d = model.eval(f) - v;
                out[2 * i] = d.re;
                out[2 * i + 1] = d.im;
            }
        },
        2 * n,
        &p0,
        &scales,
        &LmOptions::default(),
    )?;

    if !fit.converged {
        return Err(Error::fit(format!(
            "reflection fit did not converge after {} iterations (ssr {:.3e})",
            fit.iterations, fit.ssr
        )));
    }
    let [f0, ql, qc, amp, phase, slope, delay] =
        [fit.params[0], fit.params[1], fit.params[2], fit.params[3], fit.params[4], fit.params[5], fit.params[6]];
    if f0 < freqs[0] || f0 > freqs[n - 1] {
        return Err(Error::fit(format!(
            "fitted resonance {f0:.6e} Hz falls outside the measured span"
        )));
    }
    if qc <= ql {
        return Err(Error::fit(format!(
            "fitted coupling Q {qc:.3e} at or below loaded Q {ql:.3e}: internal Q is unphysical"
        )));
    }
    if span < 3.0 * f0 / ql {
        return Err(Error::fit(format!(
            "span {:.3e} Hz covers fewer than 3 linewidths of {:.3e} Hz",
            span,
            f0 / ql
        )));
    }

    let qi = 1.0 / (1.0 / ql - 1.0 / qc);
    // Propagate Ql, Qc uncertainties (with their covariance) onto Qi.
    let dql = qi * qi / (ql * ql);
    let dqc = -qi * qi / (qc * qc);
    let var_qi = dql * dql * fit.covariance[1 * 7 + 1]
        + dqc * dqc * fit.covariance[2 * 7 + 2]
        + 2.0 * dql * dqc * fit.covariance[1 * 7 + 2];

    Ok(ResonanceFit {
        resonance_hz: f0,
        resonance_sigma_hz: fit.sigma(0),
        loaded_q: ql,
        internal_q: qi,
        internal_q_sigma: var_qi.max(0.0).sqrt(),
        coupling_q: qc,
        coupling_q_sigma: fit.sigma(2),
        internal_linewidth_hz: f0 / qi,
        amplitude: amp,
        amplitude_slope: slope,
        phase_rad: phase,
        delay_s: delay,
        reference_hz: f_ref,
        residual_norm: fit.ssr.sqrt(),
        converged: fit.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitcal::TraceValues;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_distr::{Distribution, Normal};

    fn device_model() -> ReflectionModel {
        // f0 = 6.3 GHz, Qi = 1.08e4 with a slightly undercoupled port.
        let qi: f64 = 1.08e4;
        let qc: f64 = 1.6e4;
        let ql = 1.0 / (1.0 / qi + 1.0 / qc);
        ReflectionModel {
            resonance_hz: 6.3e9,
            loaded_q: ql,
            coupling_q: qc,
            amplitude: 0.82,
            phase_rad: 0.4,
            amplitude_slope: 0.0,
            delay_s: 0.0,
            reference_hz: 6.3e9,
        }
    }

    fn sweep(model: &ReflectionModel, span_hz: f64, n: usize) -> MeasurementTrace {
        let f0 = model.resonance_hz;
        let axis: Vec<f64> = (0..n)
            .map(|i| f0 - span_hz / 2.0 + span_hz * i as f64 / (n - 1) as f64)
            .collect();
        let values = axis.iter().map(|&f| model.eval(f)).collect();
        MeasurementTrace {
            kind: TraceKind::FrequencySweep,
            axis,
            values: TraceValues::Complex(values),
        }
    }

    fn add_noise(trace: &mut MeasurementTrace, sigma: f64, seed: u64) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let dist = Normal::new(0.0, sigma).unwrap();
        if let TraceValues::Complex(values) = &mut trace.values {
            for v in values {
                *v += Complex64::new(dist.sample(&mut rng), dist.sample(&mut rng));
            }
        }
    }

    #[test]
    fn noiseless_recovery_is_exact() {
        let truth = device_model();
        let trace = sweep(&truth, 8e6, 401);
        let fit = fit_resonance(&trace).unwrap();
        assert_relative_eq!(fit.resonance_hz, truth.resonance_hz, max_relative = 1e-10);
        let qi_truth = 1.0 / (1.0 / truth.loaded_q - 1.0 / truth.coupling_q);
        assert_relative_eq!(fit.internal_q, qi_truth, max_relative = 1e-8);
        assert_relative_eq!(fit.coupling_q, truth.coupling_q, max_relative = 1e-8);
        assert_relative_eq!(fit.amplitude, truth.amplitude, max_relative = 1e-8);
        assert_relative_eq!(
            fit.internal_linewidth_hz,
            truth.resonance_hz / qi_truth,
            max_relative = 1e-8
        );
    }

    #[test]
    fn one_percent_noise_keeps_internal_q_within_three_percent() {
        let truth = device_model();
        let qi_truth = 1.0 / (1.0 / truth.loaded_q - 1.0 / truth.coupling_q);
        for seed in [1, 7, 42] {
            let mut trace = sweep(&truth, 8e6, 401);
            add_noise(&mut trace, 0.01 * truth.amplitude, seed);
            let fit = fit_resonance(&trace).unwrap();
            assert!(
                ((fit.internal_q - qi_truth) / qi_truth).abs() < 0.03,
                "seed {seed}: Qi {} vs {}",
                fit.internal_q,
                qi_truth
            );
        }
    }

    #[test]
    fn recovery_improves_as_noise_vanishes() {
        let truth = device_model();
        let mut last_err = f64::INFINITY;
        for sigma in [1e-2, 1e-3, 1e-4] {
            let mut trace = sweep(&truth, 8e6, 401);
            add_noise(&mut trace, sigma * truth.amplitude, 3);
            let fit = fit_resonance(&trace).unwrap();
            let err = ((fit.resonance_hz - truth.resonance_hz) / truth.resonance_hz).abs();
            assert!(err < last_err.max(1e-9), "error must shrink with noise");
            last_err = err;
        }
        assert!(last_err < 1e-8);
    }

    #[test]
    fn cable_delay_does_not_move_the_resonance() {
        let clean = device_model();
        let mut delayed = clean;
        delayed.delay_s = 30e-9;
        delayed.phase_rad = -1.1;
        let fit_clean = fit_resonance(&sweep(&clean, 8e6, 401)).unwrap();
        let fit_delayed = fit_resonance(&sweep(&delayed, 8e6, 401)).unwrap();
        assert!((fit_clean.resonance_hz - fit_delayed.resonance_hz).abs() < 1e3);
        assert_relative_eq!(fit_delayed.delay_s, 30e-9, max_relative = 1e-6);
        assert_relative_eq!(
            fit_clean.internal_q,
            fit_delayed.internal_q,
            max_relative = 1e-6
        );
    }

    #[test]
    fn invariant_under_global_complex_scaling() {
        let truth = device_model();
        let trace = sweep(&truth, 8e6, 401);
        let mut scaled = trace.clone();
        if let TraceValues::Complex(values) = &mut scaled.values {
            let factor = Complex64::from_polar(3.7, 0.9);
            values.iter_mut().for_each(|v| *v *= factor);
        }
        let a = fit_resonance(&trace).unwrap();
        let b = fit_resonance(&scaled).unwrap();
        assert_relative_eq!(a.resonance_hz, b.resonance_hz, max_relative = 1e-12);
        assert_relative_eq!(a.internal_q, b.internal_q, max_relative = 1e-8);
        assert_relative_eq!(b.amplitude, 3.7 * a.amplitude, max_relative = 1e-8);
    }

    #[test]
    fn rejects_undersized_input() {
        let truth = device_model();
        let short = sweep(&truth, 8e6, 5);
        assert!(fit_resonance(&short).is_err());

        // A span much narrower than the linewidth cannot constrain the fit.
        let narrow = sweep(&truth, 2e5, 101);
        assert!(fit_resonance(&narrow).is_err());
    }
}
