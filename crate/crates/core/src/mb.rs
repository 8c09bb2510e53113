//! Complex conductivity of a thin superconducting film and the resonance
//! pulling it produces.
//!
//! The conductivity ratios follow the standard dirty-limit expressions for
//! photon energies below the pair-breaking threshold (`h f < 2 gap`):
//!
//! ```text
//! s1 = sigma1/sigma_n = (2/hw) Int_gap^inf [f(E) - f(E+hw)] g(E) dE
//! s2 = sigma2/sigma_n = (1/hw) Int_{gap-hw}^gap [1 - 2 f(E+hw)] g(E) dE
//! g(E) = (E(E+hw) + gap^2) / (sqrt(|E^2-gap^2|) sqrt((E+hw)^2-gap^2))
//! ```
//!
//! Both integrands carry inverse-square-root endpoint singularities, which
//! naive panel quadrature handles poorly. Each integral is evaluated after a
//! substitution that absorbs its singular factor, so the adaptive rule only
//! ever sees a smooth integrand.

use serde::{Deserialize, Serialize};

use crate::constants::{H_PLANCK, K_B};
use crate::error::{Error, Result};
use crate::material::gap_from_tc;
use crate::math::lm::{least_squares, LmOptions};
use crate::math::quad::integrate;
use num_complex::Complex64;

/// Weak-coupling ratio `gap(0) / (k_B Tc)` of the self-consistent gap
/// equation, `pi e^(-euler_gamma)`.
pub const EXACT_GAP_RATIO: f64 = 1.763_876_988_862_045_6;

const QUAD_REL_TOL: f64 = 1e-10;
const QUAD_ABS_FLOOR: f64 = 1e-16;

fn fermi(energy_j: f64, temperature_k: f64) -> f64 {
    1.0 / ((energy_j / (K_B * temperature_k)).exp() + 1.0)
}

/// Interpolated gap, J: `gap(0) tanh(1.74 sqrt(Tc/T - 1))`, zero at and
/// above Tc. Uses the 1.76 ratio for `gap(0)`.
pub fn bcs_gap(temperature_k: f64, tc_k: f64) -> f64 {
    let gap0 = gap_from_tc(tc_k);
    if temperature_k <= 0.0 {
        return gap0;
    }
    if temperature_k >= tc_k {
        return 0.0;
    }
    gap0 * (1.74 * (tc_k / temperature_k - 1.0).sqrt()).tanh()
}

/// Self-consistent gap, J, from the weak-coupling gap equation
/// `ln(gap0/gap) = 2 Int_0^inf f(sqrt(xi^2 + gap^2)) / sqrt(xi^2 + gap^2) dxi`
/// solved by bisection. `gap0` uses the self-consistent ratio so the gap
/// closes exactly at Tc.
pub fn bcs_gap_exact(temperature_k: f64, tc_k: f64) -> f64 {
    let gap0 = EXACT_GAP_RATIO * K_B * tc_k;
    if temperature_k <= 0.0 {
        return gap0;
    }
    if temperature_k >= tc_k {
        return 0.0;
    }
    let kt = K_B * temperature_k;
    let excitation_integral = |gap: f64| -> f64 {
        let xi_max = 60.0 * kt + gap;
        integrate(
            |xi| {
                let e = (xi * xi + gap * gap).sqrt();
                fermi(e, temperature_k) / e
            },
            0.0,
            xi_max,
            1e-11,
            1e-16,
        )
        .value
    };
    let imbalance = |gap: f64| (gap0 / gap).ln() - 2.0 * excitation_integral(gap);
    let mut lo = 1e-12 * gap0;
    let mut hi = gap0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if imbalance(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Temperature dependence used for the gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapModel {
    /// Closed-form tanh interpolation. Default.
    Tanh,
    /// Numerical solution of the self-consistent gap equation.
    Exact,
}

impl GapModel {
    pub fn gap_j(&self, temperature_k: f64, tc_k: f64) -> f64 {
        match self {
            GapModel::Tanh => bcs_gap(temperature_k, tc_k),
            GapModel::Exact => bcs_gap_exact(temperature_k, tc_k),
        }
    }
}

impl Default for GapModel {
    fn default() -> Self {
        GapModel::Tanh
    }
}

/// Conductivity ratios at one frequency and temperature.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ConductivityPoint {
    pub frequency_hz: f64,
    pub temperature_k: f64,
    /// Dissipative part, sigma1 / sigma_n.
    pub sigma1_ratio: f64,
    /// Reactive part, sigma2 / sigma_n.
    pub sigma2_ratio: f64,
}

/// Evaluates the conductivity ratios below the pair-breaking threshold.
///
/// Fails with a regime error at or above Tc (no gap) and when the photon
/// energy reaches `2 gap(T)`, where the sub-gap expressions stop applying.
pub fn mb_conductivity(
    frequency_hz: f64,
    temperature_k: f64,
    tc_k: f64,
    model: GapModel,
) -> Result<ConductivityPoint> {
    if !(frequency_hz > 0.0) {
        return Err(Error::input("frequency must be positive"));
    }
    if temperature_k < 0.0 {
        return Err(Error::input("temperature must be non-negative"));
    }
    if !(tc_k > 0.0) {
        return Err(Error::input("critical temperature must be positive"));
    }
    if temperature_k >= tc_k {
        return Err(Error::regime(format!(
            "film is normal at {temperature_k} K (Tc = {tc_k} K)"
        )));
    }
    let gap_j = model.gap_j(temperature_k, tc_k);
    let hw_j = H_PLANCK * frequency_hz;
    if hw_j >= 2.0 * gap_j {
        return Err(Error::regime(format!(
            "photon energy {:.3e} J reaches the pair-breaking threshold {:.3e} J; \
             the sub-gap conductivity expressions do not apply",
            hw_j,
            2.0 * gap_j
        )));
    }

    // Work in energies of k_B Tc so the integrals are order one and the
    // quadrature's absolute floor only ever catches true zeros.
    let unit = K_B * tc_k;
    let gap = gap_j / unit;
    let hw = hw_j / unit;
    let theta_t = temperature_k / tc_k;
    let occ = |e: f64| 1.0 / ((e / theta_t).exp() + 1.0);

    // Thermal part: substitute E = gap + s^2 so the 1/sqrt(E - gap) edge
    // becomes smooth. The Fermi factors cut the integrand off at a few kT.
    let sigma1 = if temperature_k == 0.0 {
        0.0
    } else {
        let s_max = (60.0 * theta_t).sqrt();
        let integral = integrate(
            |s| {
                let e = gap + s * s;
                let occupation = occ(e) - occ(e + hw);
                let numerator = e * (e + hw) + gap * gap;
                let root = (e + gap).sqrt() * ((e + hw) * (e + hw) - gap * gap).sqrt();
                2.0 * occupation * numerator / root
            },
            0.0,
            s_max,
            QUAD_REL_TOL,
            QUAD_ABS_FLOOR,
        );
        2.0 / hw * integral.value
    };

    // Reactive part: E = gap - hw cos^2(theta) soaks up both endpoint
    // singularities at once.
    let sigma2 = {
        let integral = integrate(
            |theta| {
                let c = theta.cos();
                let e = gap - hw * c * c;
                let occupation = if temperature_k == 0.0 {
                    1.0
                } else {
                    1.0 - 2.0 * occ(e + hw)
                };
                let numerator = e * (e + hw) + gap * gap;
                let root = (gap + e).sqrt() * (e + hw + gap).sqrt();
                2.0 * occupation * numerator / root
            },
            0.0,
            std::f64::consts::FRAC_PI_2,
            QUAD_REL_TOL,
            QUAD_ABS_FLOOR,
        );
        integral.value / hw
    };

    Ok(ConductivityPoint {
        frequency_hz,
        temperature_k,
        sigma1_ratio: sigma1,
        sigma2_ratio: sigma2,
    })
}

/// Surface impedance of a film much thinner than the penetration depth,
/// `Zs = rho_n / ((s1 - i s2) t)`, Ohm per square. The imaginary part is
/// positive (inductive).
pub fn surface_impedance(
    frequency_hz: f64,
    temperature_k: f64,
    tc_k: f64,
    normal_resistivity_ohm_m: f64,
    thickness_m: f64,
    model: GapModel,
) -> Result<Complex64> {
    if !(normal_resistivity_ohm_m > 0.0) {
        return Err(Error::input("normal-state resistivity must be positive"));
    }
    if !(thickness_m > 0.0) {
        return Err(Error::input("film thickness must be positive"));
    }
    let point = mb_conductivity(frequency_hz, temperature_k, tc_k, model)?;
    let sigma = Complex64::new(point.sigma1_ratio, -point.sigma2_ratio);
    Ok(normal_resistivity_ohm_m / thickness_m / sigma)
}

/// Fractional resonance shift versus temperature for a resonator whose
/// inductance is a fraction `alpha` kinetic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FreqShiftCurve {
    /// Kinetic inductance participation used for the curve.
    pub alpha: f64,
    pub temperatures_k: Vec<f64>,
    /// `(f0(T) - f0(0)) / f0(0)` at each temperature. Zero at T = 0,
    /// increasingly negative on warming.
    pub relative_shift: Vec<f64>,
}

impl FreqShiftCurve {
    /// Absolute resonance positions for a base frequency, Hz.
    pub fn resonances_hz(&self, base_hz: f64) -> Vec<f64> {
        self.relative_shift
            .iter()
            .map(|s| base_hz * (1.0 + s))
            .collect()
    }
}

/// Computes `delta f0 / f0 = -(alpha/2) (Xs(T) - Xs(0)) / Xs(0)` on a
/// temperature grid. The normal-state resistivity cancels in the ratio, so
/// only the readout frequency, Tc and the participation matter.
pub fn frequency_shift(
    frequency_hz: f64,
    temperatures_k: &[f64],
    tc_k: f64,
    alpha: f64,
    model: GapModel,
) -> Result<FreqShiftCurve> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::input("participation must be in (0, 1]"));
    }
    if temperatures_k.is_empty() {
        return Err(Error::input("temperature grid is empty"));
    }
    let base = mb_conductivity(frequency_hz, 0.0, tc_k, model)?;
    let xs0 = reactance_ratio(&base);
    let mut shift = Vec::with_capacity(temperatures_k.len());
    for &t in temperatures_k {
        if t == 0.0 {
            shift.push(0.0);
            continue;
        }
        let point = mb_conductivity(frequency_hz, t, tc_k, model)?;
        let xs = reactance_ratio(&point);
        shift.push(-0.5 * alpha * (xs - xs0) / xs0);
    }
    Ok(FreqShiftCurve {
        alpha,
        temperatures_k: temperatures_k.to_vec(),
        relative_shift: shift,
    })
}

/// Xs in units of rho_n/t; the common factor cancels wherever ratios are
/// taken.
fn reactance_ratio(point: &ConductivityPoint) -> f64 {
    let s1 = point.sigma1_ratio;
    let s2 = point.sigma2_ratio;
    s2 / (s1 * s1 + s2 * s2)
}

/// Result of fitting a measured `f0(T)` curve to the conductivity model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TcFit {
    pub critical_temperature_k: f64,
    pub critical_temperature_sigma_k: f64,
    /// Zero-temperature resonance, Hz.
    pub base_resonance_hz: f64,
    pub sum_squared_residuals: f64,
    pub converged: bool,
}

/// Extracts Tc and the zero-temperature resonance from `(T, f0)` samples at
/// fixed participation. Points must sit below Tc; the initial Tc guess is
/// placed just above the warmest sample.
pub fn fit_tc(
    temperatures_k: &[f64],
    resonances_hz: &[f64],
    alpha: f64,
    model: GapModel,
) -> Result<TcFit> {
    if temperatures_k.len() != resonances_hz.len() {
        return Err(Error::input("temperature and frequency arrays differ in length"));
    }
    if temperatures_k.len() < 3 {
        return Err(Error::input("need at least three points to fit Tc"));
    }
    let t_max = temperatures_k.iter().cloned().fold(f64::MIN, f64::max);
    let f_max = resonances_hz.iter().cloned().fold(f64::MIN, f64::max);
    if !(f_max > 0.0) {
        return Err(Error::input("resonance frequencies must be positive"));
    }

    let guess = [1.3 * t_max, f_max];
    let scales = [0.1 * t_max, 1e-4 * f_max];
    let n = temperatures_k.len();
    let fit = least_squares(
        |p, out| {
            let (tc, f_base) = (p[0], p[1]);
            if tc <= t_max * 1.0001 || f_base <= 0.0 {
                out.iter_mut().for_each(|r| *r = 1e9);
                return;
            }
            match frequency_shift(f_max, temperatures_k, tc, alpha, model) {
                Ok(curve) => {
                    for (i, s) in curve.relative_shift.iter().enumerate() {
                        out[i] = f_base * (1.0 + s) - resonances_hz[i];
                    }
                }
                Err(_) => out.iter_mut().for_each(|r| *r = 1e9),
            }
        },
        n,
        &guess,
        &scales,
        &LmOptions {
            max_iterations: 60,
            ..LmOptions::default()
        },
    )?;
    Ok(TcFit {
        critical_temperature_k: fit.params[0],
        critical_temperature_sigma_k: fit.sigma(0),
        base_resonance_hz: fit.params[1],
        sum_squared_residuals: fit.ssr,
        converged: fit.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use crate::constants::HBAR;

    const F: f64 = 6.3e9;
    const TC: f64 = 2.9;

    #[test]
    fn gap_interpolation_limits() {
        assert_relative_eq!(bcs_gap(0.0, TC), 1.76 * K_B * TC);
        assert_eq!(bcs_gap(TC, TC), 0.0);
        assert_eq!(bcs_gap(4.0, TC), 0.0);
        assert!(bcs_gap(1.0, TC) > bcs_gap(2.0, TC));
    }

    #[test]
    fn exact_gap_matches_weak_coupling_limits() {
        assert_relative_eq!(bcs_gap_exact(0.0, TC), EXACT_GAP_RATIO * K_B * TC);
        // The gap barely moves at T/Tc = 0.2 and collapses near Tc.
        let low = bcs_gap_exact(0.2 * TC, TC) / bcs_gap_exact(0.0, TC);
        assert!(low > 0.999, "low-temperature gap should be flat, got {low}");
        let near = bcs_gap_exact(0.995 * TC, TC) / bcs_gap_exact(0.0, TC);
        assert!(near < 0.15, "gap must collapse approaching Tc, got {near}");
    }

    #[test]
    fn tanh_interpolation_tracks_exact_gap() {
        // Compare shapes normalized to each model's own zero-temperature
        // value; the interpolation is good to a couple of percent.
        let mut worst: f64 = 0.0;
        for i in 1..=9 {
            let t = 0.1 * i as f64 * TC;
            let a = bcs_gap(t, TC) / bcs_gap(0.0, TC);
            let b = bcs_gap_exact(t, TC) / bcs_gap_exact(0.0, TC);
            worst = worst.max(((a - b) / b).abs());
        }
        assert!(worst < 0.02, "interpolation error {worst} exceeds 2%");
    }

    #[test]
    fn conductivity_against_frozen_quadrature() {
        // Independently computed with 40-digit adaptive quadrature after
        // the same singularity-removing substitutions.
        let cases = [
            (0.5, 1.08900065355e-03, 5.29667252478e+01),
            (1.0, 1.40288110252e-01, 5.15615259237e+01),
            (1.45, 5.87675159427e-01, 4.66684768477e+01),
            (2.0, 1.29626361564e+00, 3.47568921290e+01),
            (2.5, 1.70177118953e+00, 1.81202758714e+01),
        ];
        for (t, s1, s2) in cases {
            let p = mb_conductivity(F, t, TC, GapModel::Tanh).unwrap();
            assert_relative_eq!(p.sigma1_ratio, s1, max_relative = 1e-8);
            assert_relative_eq!(p.sigma2_ratio, s2, max_relative = 1e-8);
        }
    }

    #[test]
    fn zero_temperature_recovers_reactive_asymptote() {
        let p = mb_conductivity(F, 0.0, TC, GapModel::Tanh).unwrap();
        assert_eq!(p.sigma1_ratio, 0.0);
        assert_relative_eq!(p.sigma2_ratio, 5.30214945214e+01, max_relative = 1e-8);
        // hw << gap: sigma2/sigma_n approaches pi gap / hw from below.
        let asymptote = std::f64::consts::PI * bcs_gap(0.0, TC) / (H_PLANCK * F);
        let ratio = p.sigma2_ratio / asymptote;
        assert!(ratio > 0.9995 && ratio < 1.0, "ratio {ratio}");

        let low = mb_conductivity(1e8, 0.0, TC, GapModel::Tanh).unwrap();
        let asymptote_low = std::f64::consts::PI * bcs_gap(0.0, TC) / (H_PLANCK * 1e8);
        assert_relative_eq!(low.sigma2_ratio, asymptote_low, max_relative = 1e-6);
    }

    #[test]
    fn sigma_trends_with_temperature() {
        let mut last = mb_conductivity(F, 0.1, TC, GapModel::Tanh).unwrap();
        for i in 2..=14 {
            let t = 0.1 + 0.15 * i as f64;
            if t >= 0.99 * TC {
                break;
            }
            let p = mb_conductivity(F, t, TC, GapModel::Tanh).unwrap();
            assert!(p.sigma1_ratio > last.sigma1_ratio, "sigma1 must grow with T");
            assert!(p.sigma2_ratio < last.sigma2_ratio, "sigma2 must fall with T");
            last = p;
        }
    }

    #[test]
    fn rejects_pair_breaking_and_normal_state() {
        // 2 gap / h = 2 * 1.76 k Tc / h = 212 GHz for Tc = 2.9 K.
        let f_break = 2.0 * bcs_gap(0.0, TC) / H_PLANCK;
        assert!(mb_conductivity(1.01 * f_break, 0.0, TC, GapModel::Tanh).is_err());
        assert!(mb_conductivity(F, TC, TC, GapModel::Tanh).is_err());
        let err = mb_conductivity(F, 3.5, TC, GapModel::Tanh).unwrap_err();
        assert!(matches!(err, Error::Regime(_)));
    }

    #[test]
    fn surface_impedance_is_inductive_and_reproduces_sheet_inductance() {
        let rho = 1.1755894698e-6;
        let t_film = 14e-9;
        let zs = surface_impedance(F, 0.0, TC, rho, t_film, GapModel::Tanh).unwrap();
        assert_eq!(zs.re, 0.0);
        assert!(zs.im > 0.0);
        // Xs / omega is the kinetic sheet inductance; this resistivity was
        // chosen to land on 40 pH per square within the reactive-asymptote
        // correction.
        let ls = zs.im / (std::f64::consts::TAU * F);
        assert_relative_eq!(ls, 40.0088e-12, max_relative = 1e-4);

        let warm = surface_impedance(F, 1.5, TC, rho, t_film, GapModel::Tanh).unwrap();
        assert!(warm.re > 0.0);
        assert!(warm.im > zs.im, "kinetic reactance grows on warming");
    }

    #[test]
    fn frequency_shift_against_frozen_values() {
        let temps = [0.0, 0.3, 0.8, 1.0, 1.2, 2.0, 2.5];
        let curve = frequency_shift(F, &temps, TC, 0.8, GapModel::Tanh).unwrap();
        let expected = [
            0.0,
            -2.84667191523e-05,
            -4.05206054310e-03,
            -1.13229860613e-02,
            -2.49390244424e-02,
            -2.09350774596e-01,
            -7.60201523244e-01,
        ];
        for (got, want) in curve.relative_shift.iter().zip(expected) {
            if want == 0.0 {
                assert_eq!(*got, 0.0);
            } else {
                assert_relative_eq!(*got, want, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn shift_scales_linearly_with_participation() {
        let temps = [1.2];
        let full = frequency_shift(F, &temps, TC, 1.0, GapModel::Tanh).unwrap();
        let half = frequency_shift(F, &temps, TC, 0.5, GapModel::Tanh).unwrap();
        assert_relative_eq!(
            full.relative_shift[0],
            2.0 * half.relative_shift[0],
            max_relative = 1e-12
        );
    }

    #[test]
    fn tc_fit_recovers_generating_parameters() {
        let temps = [0.3, 0.8, 1.1, 1.4, 1.7, 2.0];
        let truth = frequency_shift(F, &temps, TC, 0.8, GapModel::Tanh).unwrap();
        let f0s = truth.resonances_hz(6.3e9);
        let fit = fit_tc(&temps, &f0s, 0.8, GapModel::Tanh).unwrap();
        assert!(fit.converged);
        assert_relative_eq!(fit.critical_temperature_k, TC, max_relative = 1e-4);
        assert_relative_eq!(fit.base_resonance_hz, 6.3e9, max_relative = 1e-7);
        // Noiseless round trip: RMS residual far below a ppm of the
        // resonance.
        assert!(fit.sum_squared_residuals.sqrt() < 1e-6 * 6.3e9);
    }

    #[test]
    fn photon_energy_scale_sanity() {
        // 6.3 GHz photons sit two orders below the pair-breaking threshold,
        // the regime the sub-gap expressions assume.
        let hw = HBAR * std::f64::consts::TAU * F;
        assert!(hw < 0.05 * 2.0 * bcs_gap(0.0, TC));
    }
}
