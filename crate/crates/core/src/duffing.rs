//! Driven steady states of a Kerr resonator.
//!
//! With the Kerr convention used here (positive `K` softens the resonance,
//! shifting it down as the circulating photon number grows) the mean-field
//! photon number `n` of a single-port cavity driven at detuning
//! `delta = f_drive - f0` obeys
//!
//! ```text
//! n [ (delta_w + K_w n)^2 + (kappa_w / 2)^2 ] = kappa_ext_w P / (hbar w_d)
//! ```
//!
//! where the `_w` subscript marks angular rates (`x_w = 2 pi x`) and `P` is
//! the drive power reaching the chip. This cubic has one or three real
//! non-negative roots; above the bifurcation threshold the middle root is
//! dynamically unstable and the response folds over into hysteresis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::fitcal::{MeasurementTrace, TraceKind, TraceValues};
use crate::math::cubic::real_cubic_roots;

const TWO_PI: f64 = std::f64::consts::TAU;

/// The minimal cavity description the drive simulations need.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct KerrCavity {
    /// Bare resonance frequency, Hz.
    pub resonance_hz: f64,
    /// Self-Kerr shift per photon, Hz. Non-negative (softening).
    pub kerr_hz: f64,
    /// Internal loss rate gamma, Hz.
    pub internal_linewidth_hz: f64,
    /// External coupling rate kappa_ext, Hz.
    pub coupling_rate_hz: f64,
}

impl KerrCavity {
    pub fn validate(&self) -> Result<()> {
        if !(self.resonance_hz > 0.0) {
            return Err(Error::input("resonance frequency must be positive"));
        }
        if self.kerr_hz < 0.0 {
            return Err(Error::input(
                "kerr must be non-negative in the softening convention",
            ));
        }
        if self.internal_linewidth_hz < 0.0 {
            return Err(Error::input("internal linewidth must be non-negative"));
        }
        if !(self.coupling_rate_hz > 0.0) {
            return Err(Error::input("coupling rate must be positive"));
        }
        Ok(())
    }

    /// Total linewidth kappa = gamma + kappa_ext, Hz.
    pub fn total_linewidth_hz(&self) -> f64 {
        self.internal_linewidth_hz + self.coupling_rate_hz
    }
}

/// Drive tones for steady-state and pump-probe evaluations.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DriveConfig {
    /// Drive (or pump) frequency, Hz.
    pub drive_frequency_hz: f64,
    /// Drive power reaching the chip, W.
    pub drive_power_w: f64,
    /// Probe power reaching the chip for two-tone runs, W.
    #[serde(default)]
    pub probe_power_w: f64,
}

/// One steady-state solution branch.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CavityRoot {
    /// Intracavity photon number.
    pub photon_number: f64,
    /// Dynamically stable branch (slope criterion).
    pub stable: bool,
    /// Single-port reflection evaluated on this branch.
    pub s11: Complex64,
}

/// All steady-state branches at one drive point, photon number ascending.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SteadyState {
    pub drive_frequency_hz: f64,
    pub drive_power_w: f64,
    pub roots: Vec<CavityRoot>,
}

impl SteadyState {
    /// The branch reached when sweeping power up from zero (lowest stable).
    pub fn lower_branch(&self) -> &CavityRoot {
        &self.roots[0]
    }

    pub fn is_bistable(&self) -> bool {
        self.roots.len() == 3
    }
}

fn s11_at(cavity: &KerrCavity, delta_w: f64, n: f64) -> Complex64 {
    let kappa_w = TWO_PI * cavity.total_linewidth_hz();
    let kext_w = TWO_PI * cavity.coupling_rate_hz;
    let kerr_w = TWO_PI * cavity.kerr_hz;
    Complex64::new(1.0, 0.0)
        - kext_w / Complex64::new(kappa_w / 2.0, -(delta_w + kerr_w * n))
}

/// Solves the steady-state cubic at one drive point.
///
/// Roots are returned ascending in photon number; with three roots the
/// middle one is unstable. Stability is classified by the sign of the
/// derivative of the drive-balance cubic at the root.
pub fn steady_state(cavity: &KerrCavity, drive: &DriveConfig) -> Result<SteadyState> {
    cavity.validate()?;
    if !(drive.drive_frequency_hz > 0.0) {
        return Err(Error::input("drive frequency must be positive"));
    }
    if drive.drive_power_w < 0.0 {
        return Err(Error::input("drive power must be non-negative"));
    }

    let delta_w = TWO_PI * (drive.drive_frequency_hz - cavity.resonance_hz);
    let kappa_w = TWO_PI * cavity.total_linewidth_hz();
    let kext_w = TWO_PI * cavity.coupling_rate_hz;
    let kerr_w = TWO_PI * cavity.kerr_hz;
    let flux =
        kext_w * drive.drive_power_w / (HBAR * TWO_PI * drive.drive_frequency_hz);

    let mut ns: Vec<f64> = if kerr_w == 0.0 || flux == 0.0 {
        if kerr_w == 0.0 {
            vec![flux / (delta_w * delta_w + kappa_w * kappa_w / 4.0)]
        } else {
            vec![0.0]
        }
    } else {
        // Reduced variables keep the cubic coefficients O(1): x = K_w n / kappa_w.
        let d = delta_w / kappa_w;
        let phi = kerr_w * flux / (kappa_w * kappa_w * kappa_w);
        real_cubic_roots(1.0, 2.0 * d, d * d + 0.25, -phi)
            .into_iter()
            .map(|x| x * kappa_w / kerr_w)
            .collect()
    };
    ns.retain(|&n| n >= -1e-9 * flux.max(1.0));

    let roots = ns
        .into_iter()
        .map(|n| {
            let n = n.max(0.0);
            // d/dn of n[(delta + K n)^2 + (kappa/2)^2]
            let slope = (delta_w + kerr_w * n) * (delta_w + 3.0 * kerr_w * n)
                + kappa_w * kappa_w / 4.0;
            CavityRoot {
                photon_number: n,
                stable: slope >= 0.0,
                s11: s11_at(cavity, delta_w, n),
            }
        })
        .collect();

    Ok(SteadyState {
        drive_frequency_hz: drive.drive_frequency_hz,
        drive_power_w: drive.drive_power_w,
        roots,
    })
}

/// Photon number at the onset of bistability, `n_crit = kappa / (sqrt(3) K)`.
/// Returns infinity for a linear cavity (`K = 0`).
pub fn bifurcation_threshold(kerr_hz: f64, kappa_hz: f64) -> f64 {
    if kerr_hz == 0.0 {
        return f64::INFINITY;
    }
    kappa_hz / (3.0_f64.sqrt() * kerr_hz)
}

/// Linear-cavity photon number for a drive of power `p_w` detuned by
/// `detuning_hz` from resonance. This is the `K = 0` limit of
/// [`steady_state`] and the photon-number calibration used to convert
/// applied powers.
pub fn photon_number_from_power(
    p_w: f64,
    f_drive_hz: f64,
    kappa_ext_hz: f64,
    kappa_hz: f64,
    detuning_hz: f64,
) -> f64 {
    let delta_w = TWO_PI * detuning_hz;
    let kappa_w = TWO_PI * kappa_hz;
    let kext_w = TWO_PI * kappa_ext_hz;
    kext_w / (delta_w * delta_w + kappa_w * kappa_w / 4.0) * p_w
        / (HBAR * TWO_PI * f_drive_hz)
}

/// Pump-probe response: pump populates the cavity, the probe sees a
/// resonance shifted by the cross-action of the pump photons.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwoToneResponse {
    pub pump_photon_number: f64,
    pub shifted_resonance_hz: f64,
    pub trace: MeasurementTrace,
}

/// Computes the weak-probe reflection across `probe_freqs_hz` with the pump
/// on. `shift_slope` sets the shift per pump photon in units of the Kerr
/// coefficient; the plain per-photon convention is `1.0`.
///
/// The probe must stay a spectator: its estimated on-resonance population
/// may not exceed 1% of the pump's.
pub fn two_tone_response(
    cavity: &KerrCavity,
    pump: &DriveConfig,
    probe_freqs_hz: &[f64],
    shift_slope: f64,
) -> Result<TwoToneResponse> {
    cavity.validate()?;
    if probe_freqs_hz.len() < 2 {
        return Err(Error::input("probe grid needs at least two frequencies"));
    }
    let kappa = cavity.total_linewidth_hz();
    let n_pump = photon_number_from_power(
        pump.drive_power_w,
        pump.drive_frequency_hz,
        cavity.coupling_rate_hz,
        kappa,
        pump.drive_frequency_hz - cavity.resonance_hz,
    );
    if pump.drive_power_w > 0.0 {
        let n_probe = photon_number_from_power(
            pump.probe_power_w,
            cavity.resonance_hz,
            cavity.coupling_rate_hz,
            kappa,
            0.0,
        );
        if n_probe > 1e-2 * n_pump {
            return Err(Error::input(format!(
                "probe would populate the cavity with {n_probe:.3e} photons, \
                 more than 1% of the pump's {n_pump:.3e}; lower the probe power"
            )));
        }
    }

    let shifted = cavity.resonance_hz - shift_slope * cavity.kerr_hz * n_pump;
    let values: Vec<Complex64> = probe_freqs_hz
        .iter()
        .map(|&f| {
            let delta_w = TWO_PI * (f - shifted);
            s11_at(cavity, delta_w, 0.0)
        })
        .collect();
    let trace = MeasurementTrace {
        kind: TraceKind::FrequencySweep,
        axis: probe_freqs_hz.to_vec(),
        values: TraceValues::Complex(values),
    };
    trace.validate()?;
    Ok(TwoToneResponse {
        pump_photon_number: n_pump,
        shifted_resonance_hz: shifted,
        trace,
    })
}

/// Drive-photon shot-noise broadening of the resonance linewidth.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LinewidthModel {
    /// Low-power linewidth gamma_0, Hz.
    pub base_linewidth_hz: f64,
    /// Kerr coefficient of the device, Hz.
    pub kerr_hz: f64,
    /// Dimensionless broadening coefficient multiplying `sqrt(n) K`.
    pub broadening_coefficient: f64,
}

/// `gamma(n) = gamma_0 + c sqrt(n) K`: linewidth growth with the square root
/// of the circulating photon number, the signature of drive shot noise on a
/// Kerr mode.
pub fn shot_noise_linewidth(model: &LinewidthModel, photon_number: f64) -> f64 {
    model.base_linewidth_hz
        + model.broadening_coefficient * photon_number.sqrt() * model.kerr_hz
}

/// Far-detuned residual dephasing rate `n K^2 / delta`, Hz: what a detuned
/// pump of `n` photons still inflicts on the mode it probes.
pub fn off_resonant_dephasing(photon_number: f64, kerr_hz: f64, detuning_hz: f64) -> f64 {
    photon_number * kerr_hz * kerr_hz / detuning_hz.abs()
}
