//! Lumped-element description of a nanowire resonator and the self-Kerr
//! shift per photon it develops.
//!
//! Two independent routes to the Kerr coefficient are kept side by side:
//! the circuit route built from zero-point current fluctuations through the
//! wire, and the geometric route that only sees the film's density of states
//! and the wire volume. When the inputs describe the same film the two agree
//! to rounding, which makes the pair a useful end-to-end consistency check.

use serde::{Deserialize, Serialize};

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::material::{
    gap_from_tc, scaling_current, wire_inductance, MaterialSpec, WireGeometry, WireInductance,
};
use crate::math::lm;

const TWO_PI: f64 = std::f64::consts::TAU;

/// A nanowire shunted by a capacitor, with optional series pad inductance
/// and input coupling.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResonatorDesign {
    pub material: MaterialSpec,
    pub wire: WireGeometry,
    /// Shunt capacitance, F.
    pub shunt_capacitance_f: f64,
    /// Series inductance contributed by pads and leads, H.
    #[serde(default)]
    pub pad_inductance_h: f64,
    /// External coupling rate, Hz. Optional; only drive simulations need it.
    #[serde(default)]
    pub coupling_rate_hz: Option<f64>,
}

impl ResonatorDesign {
    pub fn validate(&self) -> Result<()> {
        self.material.validate()?;
        self.wire.validate()?;
        if !(self.shunt_capacitance_f > 0.0) {
            return Err(Error::input("shunt capacitance must be positive"));
        }
        if self.pad_inductance_h < 0.0 {
            return Err(Error::input("pad inductance must be non-negative"));
        }
        if let Some(k) = self.coupling_rate_hz {
            if !(k > 0.0) {
                return Err(Error::input("coupling rate must be positive when given"));
            }
        }
        Ok(())
    }
}

/// Circuit quantities derived from a design.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DerivedCircuit {
    /// Kinetic inductance of the wire, H.
    pub wire_inductance_h: f64,
    /// Total inductance including pads, H.
    pub total_inductance_h: f64,
    /// Resonance frequency, Hz.
    pub resonance_hz: f64,
    /// Zero-point current fluctuation through the inductor, A.
    pub zero_point_current_a: f64,
    /// Current scale of the nonlinearity, A.
    pub scaling_current_a: f64,
    /// Kinetic-inductance participation of the wire, Lw / (Lw + Lp).
    pub participation: f64,
    /// Self-Kerr shift per photon, Hz.
    pub kerr_hz: f64,
}

/// Derives the lumped circuit: inductances, resonance frequency, zero-point
/// current, participation and Kerr shift.
pub fn derive_circuit(design: &ResonatorDesign) -> Result<DerivedCircuit> {
    design.validate()?;
    let lw = wire_inductance(&design.material, &design.wire)?.inductance_h;
    let total = lw + design.pad_inductance_h;
    let c = design.shunt_capacitance_f;
    let omega = 1.0 / (total * c).sqrt();
    let f0 = omega / TWO_PI;
    let izpf = (HBAR * omega / (2.0 * total)).sqrt();
    let istar = scaling_current(&design.material, &design.wire)?;
    let participation = lw / total;
    let kerr = kerr_shift(f0, participation, izpf, istar);
    Ok(DerivedCircuit {
        wire_inductance_h: lw,
        total_inductance_h: total,
        resonance_hz: f0,
        zero_point_current_a: izpf,
        scaling_current_a: istar,
        participation,
        kerr_hz: kerr,
    })
}

/// Self-Kerr shift per photon from circuit quantities,
/// `K = (3/2) omega (Lw/L) (I_zpf / I*)^2 / 2pi`, Hz.
pub fn kerr_shift(resonance_hz: f64, participation: f64, izpf_a: f64, istar_a: f64) -> f64 {
    let ratio = izpf_a / istar_a;
    1.5 * resonance_hz * participation * ratio * ratio
}

/// Self-Kerr shift per photon from film and geometry alone,
/// `K = (3/4) (hbar omega^2 / (N_0 Delta_0^2)) (alpha^2 / V) / 2pi`, Hz.
///
/// Needs `dos_fermi` on the material. `alpha` is the kinetic-inductance
/// participation, usually taken from the derived circuit.
pub fn kerr_shift_geometric(
    material: &MaterialSpec,
    wire: &WireGeometry,
    resonance_hz: f64,
    alpha: f64,
) -> Result<f64> {
    material.validate()?;
    wire.validate()?;
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::input("participation must lie in (0, 1]"));
    }
    let n0 = material.dos_fermi_per_j_m3.ok_or_else(|| {
        Error::input("geometric Kerr route needs the density of states (dos_fermi)")
    })?;
    let d0 = material.gap0_j();
    let omega = TWO_PI * resonance_hz;
    let v = wire.volume_m3();
    Ok(0.75 * HBAR * omega * omega / (n0 * d0 * d0) * alpha * alpha / v / TWO_PI)
}

/// Cross-Kerr shift between two modes sharing the wire, `2 sqrt(K_a K_b)`, Hz.
pub fn cross_kerr(kerr_a_hz: f64, kerr_b_hz: f64) -> f64 {
    2.0 * (kerr_a_hz * kerr_b_hz).sqrt()
}

/// Rescales a Kerr coefficient with the square of frequency, the scaling the
/// geometric route implies when film, participation and wire volume are held
/// fixed. Useful for extrapolating a measured value to a different band.
pub fn scale_kerr_quadratic(kerr_ref_hz: f64, f_ref_hz: f64, f_target_hz: f64) -> f64 {
    let r = f_target_hz / f_ref_hz;
    kerr_ref_hz * r * r
}

/// One measured resonator for the inverse-volume trend.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct KerrVolumePoint {
    /// Wire volume, m^3.
    pub volume_m3: f64,
    /// Measured Kerr shift, Hz.
    pub kerr_hz: f64,
    /// One-sigma uncertainty on the Kerr shift, Hz.
    pub kerr_sigma_hz: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct InverseVolumeFit {
    /// Fitted coefficient of K = a / V, in Hz m^3.
    pub coefficient_hz_m3: f64,
    pub coefficient_sigma_hz_m3: f64,
    pub residual_norm: f64,
}

impl InverseVolumeFit {
    /// The fitted coefficient in the unit the trend is usually quoted in.
    pub fn coefficient_khz_um3(&self) -> f64 {
        self.coefficient_hz_m3 / 1e-15
    }
}

/// Fits `K = a / V` by (optionally weighted) least squares through the
/// origin. Weights are 1/sigma^2 where uncertainties are given; points
/// without an uncertainty get unit weight relative to the others only when
/// no point carries one.
pub fn fit_inverse_volume(points: &[KerrVolumePoint]) -> Result<InverseVolumeFit> {
    if points.len() < 2 {
        return Err(Error::input("inverse-volume fit needs at least two points"));
    }
    for p in points {
        if !(p.volume_m3 > 0.0) || !(p.kerr_hz > 0.0) {
            return Err(Error::input("volumes and Kerr shifts must be positive"));
        }
    }
    let any_sigma = points.iter().any(|p| p.kerr_sigma_hz.is_some());
    let x: Vec<f64> = points.iter().map(|p| 1.0 / p.volume_m3).collect();
    let y: Vec<f64> = points.iter().map(|p| p.kerr_hz).collect();
    let (a, sigma, ssr) = if any_sigma {
        let w: Vec<f64> = points
            .iter()
            .map(|p| match p.kerr_sigma_hz {
                Some(s) if s > 0.0 => 1.0 / (s * s),
                _ => 0.0,
            })
            .collect();
        let sxx: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi * xi).sum();
        if sxx <= 0.0 {
            return Err(Error::fit("all weights vanish in inverse-volume fit"));
        }
        let sxy: f64 = x
            .iter()
            .zip(&y)
            .zip(&w)
            .map(|((xi, yi), wi)| wi * xi * yi)
            .sum();
        let a = sxy / sxx;
        let ssr: f64 = x
            .iter()
            .zip(&y)
            .zip(&w)
            .map(|((xi, yi), wi)| {
                let r = yi - a * xi;
                wi * r * r
            })
            .sum();
        (a, (1.0 / sxx).sqrt(), ssr)
    } else {
        lm::proportional_fit(&x, &y)?
    };
    Ok(InverseVolumeFit {
        coefficient_hz_m3: a,
        coefficient_sigma_hz_m3: sigma,
        residual_norm: ssr.sqrt(),
    })
}

/// Side-by-side result of the two Kerr routes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KerrCrossCheck {
    pub circuit_route_hz: f64,
    pub geometric_route_hz: f64,
    pub relative_difference: f64,
    /// True when the density of states or resistivity had to be inferred
    /// from measured sheet inductance / current-density scale.
    pub inferred_film_parameters: bool,
}

/// Full derivation report for one design: derived circuit, route
/// diagnostics and the two-route Kerr cross-check when enough film
/// information is present.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DesignReport {
    pub circuit: DerivedCircuit,
    pub wire_inductance_routes: WireInductance,
    /// Measured / derived current-density scale, when both are known.
    pub scaling_current_consistency: Option<f64>,
    pub kerr_cross_check: Option<KerrCrossCheck>,
}

pub fn design_report(design: &ResonatorDesign) -> Result<DesignReport> {
    let circuit = derive_circuit(design)?;
    let routes = wire_inductance(&design.material, &design.wire)?;

    // Fill in film parameters from measured values where needed so the
    // geometric route can run.
    let mat = &design.material;
    let d0 = gap_from_tc(mat.critical_temperature_k);
    let mut inferred = false;
    let rho = mat.resistivity_ohm_m.or_else(|| {
        inferred = true;
        mat.sheet_inductance_h
            .map(|ls| ls * std::f64::consts::PI * d0 * mat.thickness_m / HBAR)
    });
    let n0 = mat.dos_fermi_per_j_m3.or_else(|| {
        inferred = true;
        match (mat.scaling_current_density_a_m2, rho) {
            (Some(j), Some(r)) => {
                Some(j * j * HBAR * r / (std::f64::consts::PI * d0 * d0 * d0))
            }
            _ => None,
        }
    });

    let cross = if let Some(n0) = n0 {
        let mut filled = mat.clone();
        filled.dos_fermi_per_j_m3 = Some(n0);
        filled.resistivity_ohm_m = rho;
        let geo = kerr_shift_geometric(
            &filled,
            &design.wire,
            circuit.resonance_hz,
            circuit.participation,
        )?;
        let denom = circuit.kerr_hz.abs().max(f64::MIN_POSITIVE);
        Some(KerrCrossCheck {
            circuit_route_hz: circuit.kerr_hz,
            geometric_route_hz: geo,
            relative_difference: (geo - circuit.kerr_hz).abs() / denom,
            inferred_film_parameters: inferred,
        })
    } else {
        None
    };

    Ok(DesignReport {
        circuit,
        wire_inductance_routes: routes,
        scaling_current_consistency: mat.scaling_current_consistency(),
        kerr_cross_check: cross,
    })
}
