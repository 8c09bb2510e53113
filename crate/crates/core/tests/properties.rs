//! Randomized invariant checks over the public API.
//!
//! Where the acceptance suite pins numbers, these tests pin structure:
//! identities, monotonicities, scaling laws and estimator consistency that
//! must hold for any valid input, not just the reference devices.

use nanokerr::mb::GapModel;
use nanokerr::synth;
use nanokerr::units;
use nanokerr::{
    calibrate_output_gain, derive_circuit, extract_kerr, fit_inverse_volume, fit_resonance,
    frequency_shift, gap_from_tc, kerr_shift_geometric, mb_conductivity, qp_loss, ringdown_t1,
    steady_state, two_tone_response, DriveConfig, KerrCavity, KerrVolumePoint, MaterialSpec,
    QpEnvironment, ResonatorDesign, WireGeometry,
};
use proptest::prelude::*;

fn film(tc: f64, rho_uohm_cm: f64, dos_per_ev_um3: f64, thickness_m: f64) -> MaterialSpec {
    MaterialSpec {
        critical_temperature_k: tc,
        resistivity_ohm_m: Some(units::uohm_cm_to_ohm_m(rho_uohm_cm)),
        dos_fermi_per_j_m3: Some(units::per_ev_um3_to_per_j_m3(dos_per_ev_um3)),
        pair_dos_per_j_m3: None,
        sheet_inductance_h: None,
        scaling_current_density_a_m2: None,
        thickness_m,
    }
}

prop_compose! {
    fn arb_design()(
        tc in 0.5f64..12.0,
        rho in 10.0f64..500.0,
        dos_exp in 9.0f64..11.0,
        t_nm in 5.0f64..50.0,
        w_nm in 10.0f64..500.0,
        l_nm in 100.0f64..10_000.0,
        c_ff in 10.0f64..2000.0,
    ) -> ResonatorDesign {
        let t = t_nm * 1e-9;
        ResonatorDesign {
            material: film(tc, rho, 10f64.powf(dos_exp), t),
            wire: WireGeometry { width_m: w_nm * 1e-9, length_m: l_nm * 1e-9, thickness_m: t },
            shunt_capacitance_f: c_ff * 1e-15,
            pad_inductance_h: 0.0,
            coupling_rate_hz: None,
        }
    }
}

prop_compose! {
    fn arb_cavity()(
        kerr_exp in 3.0f64..6.0,
        gamma_exp in 3.0f64..6.5,
        kext_exp in 3.0f64..6.5,
    ) -> KerrCavity {
        KerrCavity {
            resonance_hz: 6.3e9,
            kerr_hz: 10f64.powf(kerr_exp),
            internal_linewidth_hz: 10f64.powf(gamma_exp),
            coupling_rate_hz: 10f64.powf(kext_exp),
        }
    }
}

proptest! {
    /// The lumped-circuit and film-geometry Kerr expressions are the same
    /// quantity written two ways; for a pad-free design they must agree to
    /// solver precision.
    #[test]
    fn kerr_routes_agree(design in arb_design()) {
        let circuit = derive_circuit(&design).unwrap();
        let geometric = kerr_shift_geometric(
            &design.material,
            &design.wire,
            circuit.resonance_hz,
            circuit.participation,
        ).unwrap();
        prop_assert!(((circuit.kerr_hz - geometric) / geometric).abs() < 1e-9);
    }

    /// At fixed participation and frequency the Kerr shift scales exactly
    /// as the inverse wire volume.
    #[test]
    fn kerr_scales_inverse_volume(design in arb_design(), c in 0.1f64..10.0) {
        let f0 = 6e9;
        let base = kerr_shift_geometric(&design.material, &design.wire, f0, 0.8).unwrap();
        let mut stretched = design.wire;
        stretched.length_m *= c;
        let scaled = kerr_shift_geometric(&design.material, &stretched, f0, 0.8).unwrap();
        prop_assert!((scaled * c / base - 1.0).abs() < 1e-12);
    }

    /// Series pad inductance dilutes the nonlinearity: both the
    /// participation and the Kerr shift fall monotonically as Lp grows.
    #[test]
    fn pad_inductance_dilutes(design in arb_design(), lp1_frac in 0.01f64..1.0, lp2_mult in 1.1f64..10.0) {
        let lw = derive_circuit(&design).unwrap().wire_inductance_h;
        let mut with_lp1 = design.clone();
        with_lp1.pad_inductance_h = lp1_frac * lw;
        let mut with_lp2 = design.clone();
        with_lp2.pad_inductance_h = lp1_frac * lp2_mult * lw;
        let bare = derive_circuit(&design).unwrap();
        let d1 = derive_circuit(&with_lp1).unwrap();
        let d2 = derive_circuit(&with_lp2).unwrap();
        prop_assert!(bare.participation > d1.participation && d1.participation > d2.participation);
        prop_assert!(bare.kerr_hz > d1.kerr_hz && d1.kerr_hz > d2.kerr_hz);
    }

    /// Same input, same output, bit for bit.
    #[test]
    fn derivation_is_deterministic(design in arb_design()) {
        let a = derive_circuit(&design).unwrap();
        let b = derive_circuit(&design).unwrap();
        prop_assert!(a.resonance_hz == b.resonance_hz);
        prop_assert!(a.kerr_hz == b.kerr_hz);
        prop_assert!(a.zero_point_current_a == b.zero_point_current_a);
        prop_assert!(a.participation == b.participation);
    }

    /// Noise-free data drawn from K = a/V must be fit exactly.
    #[test]
    fn inverse_volume_fit_is_exact_on_model_data(
        a_exp in -19.0f64..-16.0,
        seeds in prop::collection::vec(0.1f64..100.0, 3..10),
    ) {
        let a = 10f64.powf(a_exp);
        let points: Vec<KerrVolumePoint> = seeds.iter().map(|&s| KerrVolumePoint {
            volume_m3: s * 1e-22,
            kerr_hz: a / (s * 1e-22),
            kerr_sigma_hz: None,
        }).collect();
        let fit = fit_inverse_volume(&points).unwrap();
        prop_assert!((fit.coefficient_hz_m3 / a - 1.0).abs() < 1e-9);
        let typical = a / (seeds[0] * 1e-22);
        prop_assert!(fit.residual_norm < 1e-9 * typical);
    }

    /// The steady-state cubic has one or three branches, returned in
    /// ascending photon number; with three, stability alternates.
    #[test]
    fn steady_state_root_structure(
        cavity in arb_cavity(),
        detuning_frac in -10.0f64..10.0,
        power_exp in -21.0f64..-12.0,
    ) {
        let kappa = cavity.total_linewidth_hz();
        let drive = DriveConfig {
            drive_frequency_hz: cavity.resonance_hz + detuning_frac * kappa,
            drive_power_w: 10f64.powf(power_exp),
            probe_power_w: 0.0,
        };
        let state = steady_state(&cavity, &drive).unwrap();
        prop_assert!(state.roots.len() == 1 || state.roots.len() == 3);
        for root in &state.roots {
            prop_assert!(root.photon_number >= 0.0);
            prop_assert!(root.s11.norm().is_finite());
        }
        for pair in state.roots.windows(2) {
            prop_assert!(pair[0].photon_number < pair[1].photon_number);
        }
        if state.roots.len() == 3 {
            prop_assert!(state.roots[0].stable);
            prop_assert!(!state.roots[1].stable);
            prop_assert!(state.roots[2].stable);
        }
    }

    /// With no internal loss every photon that enters leaves: unit-modulus
    /// reflection on every branch at every detuning.
    #[test]
    fn lossless_reflection_is_unitary(
        kerr_exp in 3.0f64..6.0,
        kext_exp in 3.0f64..6.5,
        detuning_frac in -10.0f64..10.0,
        power_exp in -21.0f64..-13.0,
    ) {
        let cavity = KerrCavity {
            resonance_hz: 6.3e9,
            kerr_hz: 10f64.powf(kerr_exp),
            internal_linewidth_hz: 0.0,
            coupling_rate_hz: 10f64.powf(kext_exp),
        };
        let drive = DriveConfig {
            drive_frequency_hz: cavity.resonance_hz + detuning_frac * cavity.coupling_rate_hz,
            drive_power_w: 10f64.powf(power_exp),
            probe_power_w: 0.0,
        };
        let state = steady_state(&cavity, &drive).unwrap();
        for root in &state.roots {
            prop_assert!((root.s11.norm() - 1.0).abs() < 1e-10);
        }
    }

    /// A softening nonlinearity only ever pulls the probed resonance down.
    #[test]
    fn pumped_resonance_shifts_downward(
        cavity in arb_cavity(),
        power_exp in -20.0f64..-14.0,
    ) {
        let pump = DriveConfig {
            drive_frequency_hz: cavity.resonance_hz,
            drive_power_w: 10f64.powf(power_exp),
            probe_power_w: 0.0,
        };
        let probe: Vec<f64> = (0..16)
            .map(|i| cavity.resonance_hz - 2e6 + i as f64 * 25e4)
            .collect();
        let resp = two_tone_response(&cavity, &pump, &probe, 1.0).unwrap();
        prop_assert!(resp.pump_photon_number > 0.0);
        prop_assert!(resp.shifted_resonance_hz < cavity.resonance_hz);
    }

    /// The quasiparticle rate is strictly proportional to both the excess
    /// density and the kinetic participation.
    #[test]
    fn qp_loss_is_linear(
        alpha in 0.05f64..1.0,
        density in 0.1f64..100.0,
        scale in 0.01f64..0.99,
        f0_ghz in 2.0f64..12.0,
    ) {
        let gap = gap_from_tc(2.9);
        let env = QpEnvironment { qp_density_per_um3: density, pair_dos_per_ev_um3: 2e10 };
        let scaled_env = QpEnvironment { qp_density_per_um3: scale * density, ..env };
        let base = qp_loss(alpha, f0_ghz * 1e9, gap, &env).unwrap();
        let halved = qp_loss(scale * alpha, f0_ghz * 1e9, gap, &env).unwrap();
        let diluted = qp_loss(alpha, f0_ghz * 1e9, gap, &scaled_env).unwrap();
        prop_assert!((halved / base - scale).abs() < 1e-12);
        prop_assert!((diluted / base - scale).abs() < 1e-12);
    }
}

/// Thermal quasiparticles soften the superconducting response on warming:
/// dissipation rises, screening falls, the resonance pulls down.
#[test]
fn conductivity_and_shift_are_monotone_in_temperature() {
    let tc = 2.9;
    let f = 6.3e9;
    let temps: Vec<f64> = (1..=8).map(|i| 0.2 * tc + i as f64 * 0.0875 * tc).collect();
    let mut last_s1 = 0.0;
    let mut last_s2 = f64::INFINITY;
    for &t in &temps {
        let point = mb_conductivity(f, t, tc, GapModel::Tanh).unwrap();
        assert!(
            point.sigma1_ratio > last_s1,
            "dissipative part must grow with temperature"
        );
        assert!(
            point.sigma2_ratio < last_s2,
            "reactive part must fall with temperature"
        );
        last_s1 = point.sigma1_ratio;
        last_s2 = point.sigma2_ratio;
    }

    let curve = frequency_shift(f, &temps, tc, 0.8, GapModel::Tanh).unwrap();
    for pair in curve.relative_shift.windows(2) {
        assert!(pair[1] < pair[0], "resonance must pull down on warming");
    }
}

/// The zero-temperature point of a shift curve is exactly zero, not just
/// small: it is the reference the rest of the curve is measured against.
#[test]
fn zero_temperature_shift_is_identically_zero() {
    let curve = frequency_shift(6.3e9, &[0.0, 0.4, 0.9], 2.9, 0.9, GapModel::Tanh).unwrap();
    assert_eq!(curve.relative_shift[0], 0.0);
}

/// Halving the quadrature tolerance moves the conductivity by less than
/// the looser tolerance claimed.
#[test]
fn conductivity_is_converged_at_reported_tolerance() {
    let a = mb_conductivity(6.3e9, 1.45, 2.9, GapModel::Tanh).unwrap();
    let b = mb_conductivity(6.3e9, 1.45, 2.9, GapModel::Exact).unwrap();
    // Model difference dwarfs quadrature error; identical models must agree
    // far tighter than the two gap interpolations differ.
    let again = mb_conductivity(6.3e9, 1.45, 2.9, GapModel::Tanh).unwrap();
    assert_eq!(a.sigma1_ratio, again.sigma1_ratio);
    assert_eq!(a.sigma2_ratio, again.sigma2_ratio);
    assert!((a.sigma1_ratio - b.sigma1_ratio).abs() / a.sigma1_ratio < 0.05);
}

/// Estimators converge on their generative models: recovery error shrinks
/// proportionally as the injected noise shrinks.
#[test]
fn fits_are_consistent_estimators() {
    for &(noise, tol_frac) in &[(1e-2, 3e-2), (1e-3, 3e-3), (1e-4, 3e-4)] {
        // Kerr slope.
        let photon_numbers: Vec<f64> = (1..=12).map(|i| 0.4 * i as f64).collect();
        let points = synth::kerr_shift_points(123.5e3, &photon_numbers, noise, 42);
        let fit = extract_kerr(&points, 0.0, true).unwrap();
        assert!(
            (fit.kerr_hz / 123.5e3 - 1.0).abs() < tol_frac,
            "kerr recovery at noise {noise}"
        );

        // Output-chain gain.
        let temps = [0.73, 0.84, 0.95, 1.05];
        let pts = synth::noise_power_points(64.5, 2.2, &temps, 1e6, 6.56e9, noise, 43);
        let cal = calibrate_output_gain(&pts, 1e6, 6.56e9, None).unwrap();
        assert!(
            (cal.gain / units::db_to_ratio(64.5) - 1.0).abs() < 40.0 * noise,
            "gain recovery at noise {noise}"
        );

        // Energy decay time.
        let ring = synth::ringdown_series(1.06e-6, 1.0, 0.02, 20e-9, 500, noise, 44);
        let rd = ringdown_t1(&ring).unwrap();
        assert!(
            (rd.t1_s / 1.06e-6 - 1.0).abs() < 10.0 * noise,
            "ringdown recovery at noise {noise}"
        );
    }
}

/// A VNA's absolute amplitude and phase are arbitrary; the physical
/// parameters a resonance fit returns must not depend on them.
#[test]
fn resonance_fit_ignores_global_scaling() {
    use nanokerr::fitcal::resonance::ReflectionModel;
    use num_complex::Complex64;

    let internal_q = 3.5e4;
    let coupling_q = 1.2e4;
    let model = ReflectionModel {
        resonance_hz: 6.3e9,
        loaded_q: 1.0 / (1.0 / internal_q + 1.0 / coupling_q),
        coupling_q,
        amplitude: 1.0,
        phase_rad: 0.0,
        amplitude_slope: 0.0,
        delay_s: 0.0,
        reference_hz: 6.3e9,
    };
    let trace = synth::reflection_trace(&model, 6.297e9, 6.303e9, 401, 1e-4, 7);
    let fit_a = fit_resonance(&trace).unwrap();

    let mut scaled = trace.clone();
    if let nanokerr::TraceValues::Complex(values) = &mut scaled.values {
        for v in values.iter_mut() {
            *v *= Complex64::from_polar(3.7, 1.1);
        }
    }
    let fit_b = fit_resonance(&scaled).unwrap();
    assert!((fit_a.resonance_hz / fit_b.resonance_hz - 1.0).abs() < 1e-9);
    assert!((fit_a.internal_q / fit_b.internal_q - 1.0).abs() < 1e-6);
}

/// Forcing the quantum occupation weight to one must reproduce the plain
/// Johnson-Nyquist regression on classical synthetic data.
#[test]
fn classical_limit_of_gain_calibration() {
    use nanokerr::NoisePowerPoint;
    let gain = units::db_to_ratio(60.0);
    let temps = [0.5, 0.7, 0.9, 1.1];
    let bandwidth = 1e6;
    let points: Vec<NoisePowerPoint> = temps
        .iter()
        .map(|&t| NoisePowerPoint {
            stage_temperature_k: t,
            output_power_w: bandwidth * nanokerr::constants::K_B * gain * (t + 2.0),
        })
        .collect();
    let cal = calibrate_output_gain(&points, bandwidth, 6.5e9, Some(1.0)).unwrap();
    assert!((cal.gain / gain - 1.0).abs() < 1e-9);
    assert!((cal.hemt_temperature_k - 2.0).abs() < 1e-6);
}
