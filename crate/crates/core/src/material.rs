//! Superconducting film properties and nanowire geometry.
//!
//! A thin disordered film is described by its critical temperature, normal
//! state resistivity and densities of states; measured quantities (sheet
//! inductance, critical current-density scale) can be supplied alongside and
//! take precedence over values derived from first principles.

use serde::{Deserialize, Serialize};

use crate::constants::{BCS_GAP_RATIO, HBAR, K_B};
use crate::error::{Error, Result};

/// Zero-temperature gap from the weak-coupling relation
/// `Delta_0 = 1.76 k_B T_c`, in joule.
pub fn gap_from_tc(tc_k: f64) -> f64 {
    BCS_GAP_RATIO * K_B * tc_k
}

/// Film parameters, SI units throughout. Optional fields may be omitted when
/// an operation does not need them; each operation states what it requires.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MaterialSpec {
    /// Critical temperature, K.
    pub critical_temperature_k: f64,
    /// Normal-state resistivity, ohm m.
    pub resistivity_ohm_m: Option<f64>,
    /// Single-spin density of states at the Fermi level, 1/(J m^3).
    pub dos_fermi_per_j_m3: Option<f64>,
    /// Density of pair states at the Fermi level, 1/(J m^3). Used by the
    /// quasiparticle loss estimate.
    pub pair_dos_per_j_m3: Option<f64>,
    /// Measured kinetic sheet inductance, H per square.
    pub sheet_inductance_h: Option<f64>,
    /// Measured current-density scale of the kinetic-inductance
    /// nonlinearity, A/m^2.
    pub scaling_current_density_a_m2: Option<f64>,
    /// Film thickness, m.
    pub thickness_m: f64,
}

impl MaterialSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.critical_temperature_k > 0.0) {
            return Err(Error::input("critical_temperature must be positive"));
        }
        if !(self.thickness_m > 0.0) {
            return Err(Error::input("film thickness must be positive"));
        }
        for (name, v) in [
            ("resistivity", self.resistivity_ohm_m),
            ("dos_fermi", self.dos_fermi_per_j_m3),
            ("pair_dos", self.pair_dos_per_j_m3),
            ("sheet_inductance", self.sheet_inductance_h),
            ("scaling_current_density", self.scaling_current_density_a_m2),
        ] {
            if let Some(v) = v {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(Error::input(format!("{name} must be positive and finite")));
                }
            }
        }
        Ok(())
    }

    /// Zero-temperature gap, joule.
    pub fn gap0_j(&self) -> f64 {
        gap_from_tc(self.critical_temperature_k)
    }

    /// Current-density scale from film parameters,
    /// `J* = sqrt(pi N_0 Delta_0^3 / (hbar rho_n))`, A/m^2.
    pub fn derived_scaling_current_density(&self) -> Option<f64> {
        let n0 = self.dos_fermi_per_j_m3?;
        let rho = self.resistivity_ohm_m?;
        let d0 = self.gap0_j();
        Some((std::f64::consts::PI * n0 * d0 * d0 * d0 / (HBAR * rho)).sqrt())
    }

    /// Ratio measured / derived of the current-density scale, when both
    /// routes are available. Reported as a diagnostic, never enforced.
    pub fn scaling_current_consistency(&self) -> Option<f64> {
        let measured = self.scaling_current_density_a_m2?;
        let derived = self.derived_scaling_current_density()?;
        Some(measured / derived)
    }

    /// Sheet inductance from the resistivity route,
    /// `L_s = hbar rho_n / (pi Delta_0 t)`, H per square.
    pub fn derived_sheet_inductance(&self) -> Option<f64> {
        let rho = self.resistivity_ohm_m?;
        Some(HBAR * rho / (std::f64::consts::PI * self.gap0_j() * self.thickness_m))
    }
}

/// Nanowire dimensions, m.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WireGeometry {
    pub width_m: f64,
    pub length_m: f64,
    pub thickness_m: f64,
}

impl WireGeometry {
    pub fn validate(&self) -> Result<()> {
        if !(self.width_m > 0.0 && self.length_m > 0.0 && self.thickness_m > 0.0) {
            return Err(Error::input("wire dimensions must be positive"));
        }
        Ok(())
    }

    /// Wire volume, m^3.
    pub fn volume_m3(&self) -> f64 {
        self.width_m * self.length_m * self.thickness_m
    }

    /// Number of squares seen by a current flowing along the wire.
    pub fn squares(&self) -> f64 {
        self.length_m / self.width_m
    }

    /// Cross-section area, m^2.
    pub fn cross_section_m2(&self) -> f64 {
        self.width_m * self.thickness_m
    }
}

/// Current scale of the nonlinearity, `I* = J* w t`, ampere.
///
/// Uses the measured current-density scale when present, otherwise derives
/// it from `(N_0, rho_n, T_c)`.
pub fn scaling_current(material: &MaterialSpec, wire: &WireGeometry) -> Result<f64> {
    material.validate()?;
    wire.validate()?;
    let jstar = material
        .scaling_current_density_a_m2
        .or_else(|| material.derived_scaling_current_density())
        .ok_or_else(|| {
            Error::input(
                "scaling current needs either a measured current-density scale \
                 or (dos_fermi, resistivity)",
            )
        })?;
    Ok(jstar * wire.cross_section_m2())
}

/// Which inputs produced a wire inductance value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InductanceRoute {
    MeasuredSheet,
    Resistivity,
}

/// Kinetic wire inductance with the per-route values kept for diagnostics.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WireInductance {
    /// Value used downstream, H.
    pub inductance_h: f64,
    pub route: InductanceRoute,
    /// Sheet route `L_s l / w`, when sheet inductance is known.
    pub from_sheet_h: Option<f64>,
    /// Resistivity route `hbar rho_n l / (pi Delta_0 w t)`, when resistivity
    /// is known.
    pub from_resistivity_h: Option<f64>,
}

/// Kinetic inductance of the wire. The measured sheet-inductance route is
/// preferred; the resistivity route is reported alongside as a diagnostic.
pub fn wire_inductance(material: &MaterialSpec, wire: &WireGeometry) -> Result<WireInductance> {
    material.validate()?;
    wire.validate()?;
    let from_sheet = material.sheet_inductance_h.map(|ls| ls * wire.squares());
    let from_resistivity = material
        .derived_sheet_inductance()
        .map(|ls| ls * wire.squares());
    let (value, route) = match (from_sheet, from_resistivity) {
        (Some(v), _) => (v, InductanceRoute::MeasuredSheet),
        (None, Some(v)) => (v, InductanceRoute::Resistivity),
        (None, None) => {
            return Err(Error::input(
                "wire inductance needs either a sheet inductance or a resistivity",
            ))
        }
    };
    Ok(WireInductance {
        inductance_h: value,
        route,
        from_sheet_h: from_sheet,
        from_resistivity_h: from_resistivity,
    })
}
