//! Design and measurement-analysis toolkit for kinetic-inductance nanowire
//! Kerr resonators.
//!
//! A thin disordered superconducting wire stores most of a resonator's
//! inductive energy kinetically, and the quartic term of its current-phase
//! relation turns the circuit into a Kerr oscillator. This crate covers the
//! full loop from film parameters to measured device properties:
//!
//! - [`material`] / [`circuit`]: film and wire description, lumped-circuit
//!   derivation, self- and cross-Kerr coefficients, the inverse-volume
//!   design trend.
//! - [`duffing`]: driven steady states of the Kerr oscillator, bistability
//!   threshold, pump-probe response, photon-number calibration and
//!   drive-noise broadening.
//! - [`mb`]: thermal complex conductivity of the film, surface impedance
//!   and the temperature pull of the resonance used to fit the critical
//!   temperature.
//! - [`loss`]: quasiparticle and radiative (Purcell) loss channels, box
//!   modes, pad fringe fields and the mode-overlap coupling rate.
//! - [`fitcal`]: measurement-side fits in one place: complex reflection
//!   resonances, sheet-inductance extraction, noise thermometry, Kerr-slope
//!   extraction, loss-vs-power saturation, telegraph switching and
//!   energy-decay ringdowns.
//! - [`config`] / [`io`]: configuration-file ingestion and CSV/JSON trace
//!   formats shared by the command-line tools.
//!
//! # Example
//!
//! ```
//! use nanokerr::{MaterialSpec, ResonatorDesign, WireGeometry, derive_circuit, units};
//!
//! let design = ResonatorDesign {
//!     material: MaterialSpec {
//!         critical_temperature_k: 2.9,
//!         resistivity_ohm_m: None,
//!         dos_fermi_per_j_m3: None,
//!         pair_dos_per_j_m3: None,
//!         sheet_inductance_h: Some(units::ph_per_square_to_h(40.0)),
//!         scaling_current_density_a_m2: Some(units::ma_per_cm2_to_a_per_m2(3.95)),
//!         thickness_m: 14e-9,
//!     },
//!     wire: WireGeometry { width_m: 18e-9, length_m: 460e-9, thickness_m: 14e-9 },
//!     shunt_capacitance_f: 0.624e-12,
//!     pad_inductance_h: 0.0,
//!     coupling_rate_hz: Some(580e3),
//! };
//! let circuit = derive_circuit(&design).unwrap();
//! assert!(circuit.kerr_hz > 100e3); // strongly nonlinear per photon
//! ```
//!
//! Conventions: every rate and frequency is stored as an ordinary frequency
//! in hertz; factors of 2 pi appear only inside formulas. Inputs in lab
//! units (pH per square, MA/cm^2, ...) are converted once at the boundary by
//! [`units`].

pub mod circuit;
pub mod config;
pub mod constants;
pub mod duffing;
pub mod error;
pub mod fitcal;
pub mod io;
pub mod loss;
pub mod material;
pub mod math;
pub mod mb;
pub mod synth;
pub mod units;

pub use circuit::{
    cross_kerr, derive_circuit, design_report, fit_inverse_volume, kerr_shift,
    kerr_shift_geometric, scale_kerr_quadratic, DerivedCircuit, DesignReport, InverseVolumeFit,
    KerrCrossCheck, KerrVolumePoint, ResonatorDesign,
};
pub use duffing::{
    bifurcation_threshold, off_resonant_dephasing, photon_number_from_power, shot_noise_linewidth,
    steady_state, two_tone_response, CavityRoot, DriveConfig, KerrCavity, LinewidthModel,
    SteadyState, TwoToneResponse,
};
pub use error::{Error, Result};
pub use fitcal::kerr::{extract_kerr, KerrSlopeFit, ShiftPoint};
pub use fitcal::resonance::{fit_resonance, ResonanceFit};
pub use fitcal::ringdown::{ringdown_t1, RingdownFit};
pub use fitcal::sheet::{fit_sheet_inductance, SheetInductanceFit};
pub use fitcal::telegraph::{telegraph_tau, TelegraphFit};
pub use fitcal::thermometry::{
    bose_einstein_weight, calibrate_output_gain, line_attenuation, CalibrationRow,
    GainCalibration, NoisePowerPoint,
};
pub use fitcal::tls::{fit_tls_saturation, TlsSaturationFit};
pub use fitcal::{FitParam, FitReport, MeasurementTrace, TraceKind, TraceValues};
pub use loss::{
    assemble_budget, box_mode_field, coplanar_pad_field, coupling_rate, far_detuned, purcell_loss,
    qp_loss, BoxMode, BoxModeKind, LossBudget, LossChannel, ModeField, OverlapConfig, PadFieldMap,
    PadGeometry, QpEnvironment,
};
pub use material::{
    gap_from_tc, scaling_current, wire_inductance, InductanceRoute, MaterialSpec, WireGeometry,
    WireInductance,
};
pub use mb::{
    bcs_gap, bcs_gap_exact, fit_tc, frequency_shift, mb_conductivity, surface_impedance,
    ConductivityPoint, FreqShiftCurve, GapModel, TcFit,
};
