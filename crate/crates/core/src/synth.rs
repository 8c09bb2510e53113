//! Deterministic synthetic-data generators.
//!
//! Every generator draws from the same model its matching fit assumes, so
//! generate-fit round trips close. Seeds make the output reproducible
//! across runs and platforms.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};

use crate::fitcal::kerr::ShiftPoint;
use crate::fitcal::resonance::ReflectionModel;
use crate::fitcal::thermometry::{bose_einstein_weight, NoisePowerPoint};
use crate::fitcal::{MeasurementTrace, TraceKind, TraceValues};
use crate::constants::K_B;
use crate::mb::{frequency_shift, GapModel};

/// Complex reflection sweep of `model` over `[start_hz, stop_hz]` with
/// additive Gaussian noise of `noise_sigma` per quadrature.
pub fn reflection_trace(
    model: &ReflectionModel,
    start_hz: f64,
    stop_hz: f64,
    n: usize,
    noise_sigma: f64,
    seed: u64,
) -> MeasurementTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Normal::new(0.0, noise_sigma.max(0.0)).unwrap();
    let axis: Vec<f64> = (0..n)
        .map(|i| start_hz + (stop_hz - start_hz) * i as f64 / (n - 1).max(1) as f64)
        .collect();
    let values = axis
        .iter()
        .map(|&f| {
            let clean = model.eval(f);
            if noise_sigma > 0.0 {
                clean + Complex64::new(dist.sample(&mut rng), dist.sample(&mut rng))
            } else {
                clean
            }
        })
        .collect();
    MeasurementTrace {
        kind: TraceKind::FrequencySweep,
        axis,
        values: TraceValues::Complex(values),
    }
}

/// Symmetric two-state telegraph record whose autocorrelation decays with
/// the given constant. The mean dwell time per state is twice the decay
/// constant.
pub fn telegraph_series(decay_time_s: f64, dt_s: f64, n: usize, seed: u64) -> MeasurementTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let uniform = Uniform::new(0.0, 1.0);
    // Per-sample flip probability chosen so the sampled chain's
    // autocorrelation is exactly exp(-k dt / decay) at every lag.
    let flip_probability = 0.5 * (1.0 - (-dt_s / decay_time_s).exp());
    let mut state = 1.0;
    let mut axis = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        if uniform.sample(&mut rng) < flip_probability {
            state = -state;
        }
        axis.push(i as f64 * dt_s);
        values.push(state);
    }
    MeasurementTrace {
        kind: TraceKind::TimeSeries,
        axis,
        values: TraceValues::Real(values),
    }
}

/// Exponential energy ringdown with a detection floor and optional
/// fractional Gaussian noise.
pub fn ringdown_series(
    t1_s: f64,
    amplitude: f64,
    floor: f64,
    dt_s: f64,
    n: usize,
    noise_frac: f64,
    seed: u64,
) -> MeasurementTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Normal::new(0.0, noise_frac.max(0.0) * amplitude).unwrap();
    let axis: Vec<f64> = (0..n).map(|i| i as f64 * dt_s).collect();
    let values = axis
        .iter()
        .map(|&t| {
            let clean = amplitude * (-t / t1_s).exp() + floor;
            if noise_frac > 0.0 {
                clean + dist.sample(&mut rng)
            } else {
                clean
            }
        })
        .collect();
    MeasurementTrace {
        kind: TraceKind::TimeSeries,
        axis,
        values: TraceValues::Real(values),
    }
}

/// `(photon number, internal Q)` samples from the saturable-loss model.
pub fn tls_quality_curve(
    tls_q: f64,
    saturation_photons: f64,
    other_q: f64,
    exponent: f64,
    photon_numbers: &[f64],
    noise_frac: f64,
    seed: u64,
) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Normal::new(0.0, noise_frac.max(0.0)).unwrap();
    photon_numbers
        .iter()
        .map(|&n| {
            let inv = (1.0 / tls_q) * (1.0 + n / saturation_photons).powf(-exponent)
                + 1.0 / other_q;
            let q = 1.0 / inv;
            let noisy = if noise_frac > 0.0 {
                q * (1.0 + dist.sample(&mut rng))
            } else {
                q
            };
            (n, noisy)
        })
        .collect()
}

/// Pump-probe shift points with a softening slope of `kerr_hz` per photon.
pub fn kerr_shift_points(
    kerr_hz: f64,
    photon_numbers: &[f64],
    noise_frac: f64,
    seed: u64,
) -> Vec<ShiftPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Normal::new(0.0, noise_frac.max(0.0) * kerr_hz).unwrap();
    photon_numbers
        .iter()
        .map(|&n| {
            let clean = -kerr_hz * n;
            let noisy = if noise_frac > 0.0 {
                clean + dist.sample(&mut rng)
            } else {
                clean
            };
            ShiftPoint {
                photon_number: n,
                shift_hz: noisy,
                shift_sigma_hz: if noise_frac > 0.0 {
                    Some(noise_frac * kerr_hz)
                } else {
                    None
                },
            }
        })
        .collect()
}

/// Noise-thermometry samples for an output chain with the given gain and
/// amplifier noise temperature.
pub fn noise_power_points(
    gain_db: f64,
    hemt_temperature_k: f64,
    stage_temperatures_k: &[f64],
    bandwidth_hz: f64,
    frequency_hz: f64,
    noise_frac: f64,
    seed: u64,
) -> Vec<NoisePowerPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Normal::new(0.0, noise_frac.max(0.0)).unwrap();
    let gain = 10f64.powf(gain_db / 10.0);
    stage_temperatures_k
        .iter()
        .map(|&t| {
            let eta = bose_einstein_weight(frequency_hz, t);
            let clean = bandwidth_hz * K_B * gain * (eta * t + hemt_temperature_k);
            let noisy = if noise_frac > 0.0 {
                clean * (1.0 + dist.sample(&mut rng))
            } else {
                clean
            };
            NoisePowerPoint {
                stage_temperature_k: t,
                output_power_w: noisy,
            }
        })
        .collect()
}

/// Resonance-vs-temperature samples pulled down by the thermal surface
/// reactance. The noise is applied to the relative shift itself, so the
/// scatter vanishes toward zero temperature the way measured pulls do.
pub fn tc_shift_curve(
    base_hz: f64,
    tc_k: f64,
    alpha: f64,
    temperatures_k: &[f64],
    model: GapModel,
    noise_frac: f64,
    seed: u64,
) -> crate::error::Result<Vec<f64>> {
    let curve = frequency_shift(base_hz, temperatures_k, tc_k, alpha, model)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Normal::new(0.0, noise_frac.max(0.0)).unwrap();
    Ok(curve
        .relative_shift
        .iter()
        .map(|&s| {
            let factor = if noise_frac > 0.0 {
                1.0 + dist.sample(&mut rng)
            } else {
                1.0
            };
            base_hz * (1.0 + s * factor)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic_per_seed() {
        let a = telegraph_series(1.0, 0.05, 500, 42);
        let b = telegraph_series(1.0, 0.05, 500, 42);
        let c = telegraph_series(1.0, 0.05, 500, 43);
        assert_eq!(a.real_values().unwrap(), b.real_values().unwrap());
        assert_ne!(a.real_values().unwrap(), c.real_values().unwrap());
    }

    #[test]
    fn telegraph_states_are_binary_with_plausible_switching() {
        let trace = telegraph_series(1.0, 0.05, 20_000, 1);
        let values = trace.real_values().unwrap();
        assert!(values.iter().all(|&v| v == 1.0 || v == -1.0));
        let switches = values.windows(2).filter(|w| w[0] != w[1]).count();
        // Mean dwell 2 s at 50 ms per step over 1000 s: about 500 switches.
        assert!((300..800).contains(&switches), "{switches} switches");
    }

    #[test]
    fn ringdown_series_decays_to_floor() {
        let trace = ringdown_series(1e-6, 2.0, 0.25, 10e-9, 2000, 0.0, 0);
        let v = trace.real_values().unwrap();
        assert!((v[0] - 2.25).abs() < 1e-12);
        assert!((v[1999] - 0.25).abs() < 1e-3);
    }

    #[test]
    fn tc_shift_curve_noise_scales_with_the_pull() {
        let temps = [0.2, 0.6, 1.0, 1.4];
        let clean = tc_shift_curve(6.3e9, 2.9, 0.9, &temps, GapModel::Tanh, 0.0, 0).unwrap();
        let again = tc_shift_curve(6.3e9, 2.9, 0.9, &temps, GapModel::Tanh, 0.0, 9).unwrap();
        assert_eq!(clean, again, "zero noise must ignore the seed");
        assert!(clean.windows(2).all(|w| w[1] < w[0]), "pull must grow on warming");

        let noisy = tc_shift_curve(6.3e9, 2.9, 0.9, &temps, GapModel::Tanh, 0.01, 5).unwrap();
        for (c, n) in clean.iter().zip(&noisy) {
            let shift_c = c - 6.3e9;
            let shift_n = n - 6.3e9;
            assert!((shift_n / shift_c - 1.0).abs() < 0.05);
        }
    }
}
