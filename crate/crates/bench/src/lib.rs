//! Fixtures shared by the criterion targets: the measured device design, a
//! cavity biased into its bistable window and a noisy reflection trace.

use nanokerr::fitcal::resonance::ReflectionModel;
use nanokerr::synth::reflection_trace;
use nanokerr::{
    units, BoxMode, BoxModeKind, DriveConfig, KerrCavity, MaterialSpec, MeasurementTrace,
    PadGeometry, ResonatorDesign, WireGeometry,
};

/// The 18 nm x 460 nm wire with the shunt that puts it at 6.30 GHz.
pub fn device_design() -> ResonatorDesign {
    ResonatorDesign {
        material: MaterialSpec {
            critical_temperature_k: 2.9,
            resistivity_ohm_m: None,
            dos_fermi_per_j_m3: None,
            pair_dos_per_j_m3: None,
            sheet_inductance_h: Some(units::ph_per_square_to_h(40.0)),
            scaling_current_density_a_m2: Some(units::ma_per_cm2_to_a_per_m2(3.95)),
            thickness_m: 14e-9,
        },
        wire: WireGeometry {
            width_m: 18e-9,
            length_m: 460e-9,
            thickness_m: 14e-9,
        },
        shunt_capacitance_f: 624.3294861e-15,
        pad_inductance_h: 0.0,
        coupling_rate_hz: Some(580e3),
    }
}

/// Cavity at the measured operating point; Kerr per photon is about a
/// tenth of the total linewidth.
pub fn measured_cavity() -> KerrCavity {
    KerrCavity {
        resonance_hz: 6.3e9,
        kerr_hz: 123.5e3,
        internal_linewidth_hz: 580e3,
        coupling_rate_hz: 580e3,
    }
}

/// A drive point inside the bistable window of [`measured_cavity`].
pub fn bistable_drive() -> DriveConfig {
    DriveConfig {
        drive_frequency_hz: 6.2982e9,
        drive_power_w: 1e-3 * 10f64.powf(-126.0 / 10.0),
        probe_power_w: 0.0,
    }
}

/// A weak on-resonance drive with a single steady-state root.
pub fn monostable_drive() -> DriveConfig {
    DriveConfig {
        drive_frequency_hz: 6.3e9,
        drive_power_w: 1e-3 * 10f64.powf(-136.0 / 10.0),
        probe_power_w: 0.0,
    }
}

/// 401-point reflection trace with 0.8% amplitude noise, the size a single
/// VNA segment typically has.
pub fn noisy_trace() -> MeasurementTrace {
    let model = ReflectionModel {
        resonance_hz: 7.7e9,
        loaded_q: 1.0 / (1.0 / 3.5e4 + 1.0 / 6.0e4),
        coupling_q: 6.0e4,
        amplitude: 0.8,
        phase_rad: 0.3,
        amplitude_slope: 0.05,
        delay_s: 30e-9,
        reference_hz: 7.7e9,
    };
    reflection_trace(&model, 7.6985e9, 7.7015e9, 401, 0.008, 42)
}

/// Pad pair of the lumped capacitor, 500 um wide with a 1 um gap.
pub fn device_pads() -> PadGeometry {
    PadGeometry {
        gap_m: 1e-6,
        pad_width_m: 500e-6,
        pad_length_m: 500e-6,
        pad_voltage_v: 1.0,
    }
}

/// Squat sample box whose lowest mode sits near 17 GHz.
pub fn sample_box() -> BoxMode {
    BoxMode {
        lx_m: 10e-3,
        ly_m: 12.46972235296372e-3,
        lz_m: 12.46972235296372e-3,
        quality_factor: 500.0,
        kind: BoxModeKind::Te011,
    }
}
