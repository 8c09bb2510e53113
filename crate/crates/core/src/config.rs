//! Declarative TOML run configurations.
//!
//! Config files speak lab units (nm, fF, pH per square, MA/cm^2, GHz, kHz,
//! dBm); everything is converted to SI on ingestion. CSV data files, by
//! contrast, are SI with unit-suffixed headers.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::circuit::ResonatorDesign;
use crate::error::{Error, Result};
use crate::loss::{BoxMode, BoxModeKind, PadGeometry, QpEnvironment};
use crate::material::{MaterialSpec, WireGeometry};
use crate::mb::GapModel;
use crate::units::{
    dbm_to_watt, ma_per_cm2_to_a_per_m2, per_ev_um3_to_per_j_m3, ph_per_square_to_h,
    uohm_cm_to_ohm_m,
};

/// Reads and parses a TOML config file.
pub fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(toml::from_str(&text)?)
}

/// Film parameters as quoted in fab and measurement records.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSection {
    pub tc_k: f64,
    pub thickness_nm: f64,
    #[serde(default)]
    pub sheet_inductance_ph_per_sq: Option<f64>,
    #[serde(default)]
    pub resistivity_uohm_cm: Option<f64>,
    /// Single-spin density of states at the Fermi level.
    #[serde(default)]
    pub dos_per_ev_um3: Option<f64>,
    /// Pair density of states entering quasiparticle loss.
    #[serde(default)]
    pub pair_dos_per_ev_um3: Option<f64>,
    #[serde(default)]
    pub scaling_current_density_ma_cm2: Option<f64>,
}

impl MaterialSection {
    pub fn to_material(&self) -> Result<MaterialSpec> {
        let spec = MaterialSpec {
            critical_temperature_k: self.tc_k,
            thickness_m: self.thickness_nm * 1e-9,
            sheet_inductance_h: self.sheet_inductance_ph_per_sq.map(ph_per_square_to_h),
            resistivity_ohm_m: self.resistivity_uohm_cm.map(uohm_cm_to_ohm_m),
            dos_fermi_per_j_m3: self.dos_per_ev_um3.map(per_ev_um3_to_per_j_m3),
            pair_dos_per_j_m3: self.pair_dos_per_ev_um3.map(per_ev_um3_to_per_j_m3),
            scaling_current_density_a_m2: self
                .scaling_current_density_ma_cm2
                .map(ma_per_cm2_to_a_per_m2),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireSection {
    pub width_nm: f64,
    pub length_nm: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitSection {
    pub shunt_capacitance_ff: f64,
    #[serde(default)]
    pub pad_inductance_nh: f64,
    #[serde(default)]
    pub coupling_rate_khz: Option<f64>,
    /// Replaces the derived participation in the reported Kerr when the
    /// physical circuit is known to carry current outside the wire.
    #[serde(default)]
    pub alpha_override: Option<f64>,
}

/// Full single-device description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    pub material: MaterialSection,
    pub wire: WireSection,
    pub circuit: CircuitSection,
}

impl DesignConfig {
    pub fn to_design(&self) -> Result<ResonatorDesign> {
        let material = self.material.to_material()?;
        let wire = WireGeometry {
            width_m: self.wire.width_nm * 1e-9,
            length_m: self.wire.length_nm * 1e-9,
            thickness_m: self.material.thickness_nm * 1e-9,
        };
        let design = ResonatorDesign {
            material,
            wire,
            shunt_capacitance_f: self.circuit.shunt_capacitance_ff * 1e-15,
            pad_inductance_h: self.circuit.pad_inductance_nh * 1e-9,
            coupling_rate_hz: self.circuit.coupling_rate_khz.map(|k| k * 1e3),
        };
        design.validate()?;
        if let Some(alpha) = self.circuit.alpha_override {
            if !(alpha > 0.0 && alpha <= 1.0) {
                return Err(Error::input("circuit.alpha_override must lie in (0, 1]"));
            }
        }
        Ok(design)
    }
}

/// Which design parameter a sweep axis walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    WidthNm,
    LengthNm,
    CapacitanceFf,
    FrequencyGhz,
    Alpha,
}

impl SweepParameter {
    pub fn column_name(&self) -> &'static str {
        match self {
            SweepParameter::WidthNm => "width_nm",
            SweepParameter::LengthNm => "length_nm",
            SweepParameter::CapacitanceFf => "capacitance_ff",
            SweepParameter::FrequencyGhz => "frequency_ghz",
            SweepParameter::Alpha => "alpha",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisScale {
    Linear,
    Log,
}

impl Default for AxisScale {
    fn default() -> Self {
        AxisScale::Linear
    }
}

/// One sweep axis: an inclusive range with a point count.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub parameter: SweepParameter,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: AxisScale,
}

impl AxisSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.count < 1 {
            return Err(Error::input("axis count must be at least 1"));
        }
        if self.max < self.min {
            return Err(Error::input("axis max must be at least min"));
        }
        if self.count == 1 {
            return Ok(vec![self.min]);
        }
        match self.scale {
            AxisScale::Linear => Ok((0..self.count)
                .map(|i| {
                    self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
                })
                .collect()),
            AxisScale::Log => {
                if !(self.min > 0.0) {
                    return Err(Error::input("log axes need a positive minimum"));
                }
                let ratio = (self.max / self.min).ln();
                Ok((0..self.count)
                    .map(|i| self.min * (ratio * i as f64 / (self.count - 1) as f64).exp())
                    .collect())
            }
        }
    }
}

/// Rescales a measured Kerr value alongside the model columns.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnchorSpec {
    pub measured_kerr_khz: f64,
    /// Frequency the measured value belongs to; defaults to the base
    /// design's derived resonance.
    #[serde(default)]
    pub frequency_ghz: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub material: MaterialSection,
    pub wire: WireSection,
    pub circuit: CircuitSection,
    pub axis: Vec<AxisSpec>,
    #[serde(default)]
    pub anchor: Option<AnchorSpec>,
}

impl SweepConfig {
    pub fn base_design(&self) -> Result<ResonatorDesign> {
        DesignConfig {
            material: self.material.clone(),
            wire: self.wire.clone(),
            circuit: self.circuit.clone(),
        }
        .to_design()
    }
}

/// Driven-cavity parameters shared by the drive simulations.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavitySection {
    pub resonance_ghz: f64,
    pub kerr_khz: f64,
    pub internal_linewidth_khz: f64,
    pub coupling_rate_khz: f64,
}

impl CavitySection {
    pub fn to_cavity(&self) -> Result<crate::duffing::KerrCavity> {
        let cavity = crate::duffing::KerrCavity {
            resonance_hz: self.resonance_ghz * 1e9,
            kerr_hz: self.kerr_khz * 1e3,
            internal_linewidth_hz: self.internal_linewidth_khz * 1e3,
            coupling_rate_hz: self.coupling_rate_khz * 1e3,
        };
        cavity.validate()?;
        Ok(cavity)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DuffingDriveSection {
    pub frequency_start_ghz: f64,
    pub frequency_stop_ghz: f64,
    pub points: usize,
    /// Drive powers at the chip.
    pub powers_dbm: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DuffingConfig {
    pub cavity: CavitySection,
    pub drive: DuffingDriveSection,
}

impl DuffingConfig {
    pub fn frequencies_hz(&self) -> Result<Vec<f64>> {
        let d = &self.drive;
        if d.points < 2 {
            return Err(Error::input("drive.points must be at least 2"));
        }
        if !(d.frequency_stop_ghz > d.frequency_start_ghz) {
            return Err(Error::input("drive.frequency_stop_ghz must exceed start"));
        }
        Ok((0..d.points)
            .map(|i| {
                (d.frequency_start_ghz
                    + (d.frequency_stop_ghz - d.frequency_start_ghz) * i as f64
                        / (d.points - 1) as f64)
                    * 1e9
            })
            .collect())
    }

    pub fn powers_w(&self) -> Result<Vec<f64>> {
        if self.drive.powers_dbm.is_empty() {
            return Err(Error::input("drive.powers_dbm must not be empty"));
        }
        Ok(self.drive.powers_dbm.iter().map(|&p| dbm_to_watt(p)).collect())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpSection {
    /// Pump detuning from the bare resonance, MHz.
    pub detuning_mhz: f64,
    /// Pump powers; at the chip unless `attenuation_db` is given, in which
    /// case these are applied powers reduced by the input line.
    pub powers_dbm: Vec<f64>,
    pub probe_power_dbm: f64,
    #[serde(default)]
    pub attenuation_db: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSection {
    pub span_mhz: f64,
    pub points: usize,
}

fn default_shift_slope() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoToneConfig {
    pub cavity: CavitySection,
    pub pump: PumpSection,
    pub probe: ProbeSection,
    /// Probe-shift per pump photon in units of the Kerr coefficient.
    #[serde(default = "default_shift_slope")]
    pub shift_slope: f64,
    /// Input-line calibration uncertainty folded into the extracted Kerr.
    #[serde(default)]
    pub attenuation_sigma_db: f64,
}

impl TwoToneConfig {
    pub fn pump_powers_w(&self) -> Result<Vec<f64>> {
        if self.pump.powers_dbm.len() < 3 {
            return Err(Error::input("pump.powers_dbm needs at least three levels"));
        }
        let att = self.pump.attenuation_db.unwrap_or(0.0);
        Ok(self
            .pump
            .powers_dbm
            .iter()
            .map(|&p| dbm_to_watt(p - att))
            .collect())
    }

    pub fn probe_power_w(&self) -> f64 {
        let att = self.pump.attenuation_db.unwrap_or(0.0);
        dbm_to_watt(self.pump.probe_power_dbm - att)
    }

    pub fn probe_frequencies_hz(&self) -> Result<Vec<f64>> {
        if self.probe.points < 8 {
            return Err(Error::input("probe.points must be at least 8"));
        }
        let f0 = self.cavity.resonance_ghz * 1e9;
        let span = self.probe.span_mhz * 1e6;
        Ok((0..self.probe.points)
            .map(|i| f0 - span / 2.0 + span * i as f64 / (self.probe.points - 1) as f64)
            .collect())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MbSynthSection {
    pub tc_k: f64,
    pub base_resonance_ghz: f64,
    pub temperature_min_k: f64,
    pub temperature_max_k: f64,
    pub points: usize,
    #[serde(default)]
    pub noise_frac: f64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MbFitConfig {
    /// CSV with columns temperature_k, f0_hz. Mutually exclusive with
    /// `synth`.
    #[serde(default)]
    pub input_csv: Option<PathBuf>,
    #[serde(default)]
    pub synth: Option<MbSynthSection>,
    pub alpha: f64,
    #[serde(default)]
    pub gap_model: GapModel,
    /// Also emit the fitted model curve on a fine grid.
    #[serde(default)]
    pub emit_curve: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QpSection {
    pub tc_k: f64,
    pub qp_density_per_um3: f64,
    pub pair_dos_per_ev_um3: f64,
}

impl QpSection {
    pub fn environment(&self) -> QpEnvironment {
        QpEnvironment {
            qp_density_per_um3: self.qp_density_per_um3,
            pair_dos_per_ev_um3: self.pair_dos_per_ev_um3,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSection {
    pub lx_mm: f64,
    pub ly_mm: f64,
    pub lz_mm: f64,
    pub quality_factor: f64,
    #[serde(default = "default_box_kind")]
    pub kind: BoxModeKind,
}

fn default_box_kind() -> BoxModeKind {
    BoxModeKind::Te011
}

impl BoxSection {
    pub fn to_box(&self) -> Result<BoxMode> {
        let bx = BoxMode {
            lx_m: self.lx_mm * 1e-3,
            ly_m: self.ly_mm * 1e-3,
            lz_m: self.lz_mm * 1e-3,
            quality_factor: self.quality_factor,
            kind: self.kind,
        };
        bx.validate()?;
        Ok(bx)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PadSection {
    pub gap_um: f64,
    pub pad_width_um: f64,
    pub pad_length_um: f64,
}

impl PadSection {
    pub fn to_geometry(&self) -> Result<PadGeometry> {
        let geom = PadGeometry {
            gap_m: self.gap_um * 1e-6,
            pad_width_m: self.pad_width_um * 1e-6,
            pad_length_m: self.pad_length_um * 1e-6,
            pad_voltage_v: 1.0,
        };
        geom.validate()?;
        Ok(geom)
    }
}

fn default_substrate_permittivity() -> f64 {
    11.7
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiationSection {
    #[serde(rename = "box")]
    pub box_mode: BoxSection,
    pub pad: PadSection,
    #[serde(default = "default_substrate_permittivity")]
    pub substrate_permittivity: f64,
    /// Skips the overlap integral and uses this coupling rate directly.
    #[serde(default)]
    pub coupling_override_mhz: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossConfig {
    pub resonance_ghz: f64,
    pub alpha: f64,
    #[serde(default)]
    pub qp: Option<QpSection>,
    #[serde(default)]
    pub radiation: Option<RadiationSection>,
    /// Externally supplied saturable-loss estimate, kHz.
    #[serde(default)]
    pub tls_rate_khz: Option<f64>,
    /// Measured linewidth to compare the budget against, kHz.
    #[serde(default)]
    pub observed_linewidth_khz: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalSynthSection {
    pub gain_db: f64,
    pub hemt_temperature_k: f64,
    pub temperatures_k: Vec<f64>,
    #[serde(default)]
    pub noise_frac: f64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrateConfig {
    pub frequency_ghz: f64,
    pub bandwidth_mhz: f64,
    /// CSV with columns temperature_k, power_w. Mutually exclusive with
    /// `synth`.
    #[serde(default)]
    pub input_csv: Option<PathBuf>,
    #[serde(default)]
    pub synth: Option<CalSynthSection>,
    /// Net loop transmission, for the attenuation row of the report.
    #[serde(default)]
    pub s_io_db: Option<f64>,
    /// Forces the thermal weight (1.0 recovers the classical limit).
    #[serde(default)]
    pub eta_override: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitKind {
    Resonance,
    Tc,
    Tls,
    Sheet,
    Kerr,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitConfig {
    pub kind: FitKind,
    pub input_csv: PathBuf,
    /// Participation for `tc` fits.
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub gap_model: GapModel,
    /// Shunt capacitance for `sheet` fits, fF.
    #[serde(default)]
    pub capacitance_ff: Option<f64>,
    /// Wire width for `sheet` fits, um.
    #[serde(default)]
    pub width_um: Option<f64>,
    /// Fixed saturation exponent for `tls` fits; omit to fit it.
    #[serde(default)]
    pub exponent: Option<f64>,
    /// Attenuation uncertainty folded into `kerr` fits, dB.
    #[serde(default)]
    pub attenuation_sigma_db: f64,
    /// Whether `kerr` fits co-fit an offset. Defaults to true.
    #[serde(default = "default_true")]
    pub fit_intercept: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TelegraphSynthSection {
    pub decay_time_s: f64,
    pub dt_s: f64,
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TelegraphConfig {
    #[serde(default)]
    pub input_csv: Option<PathBuf>,
    #[serde(default)]
    pub synth: Option<TelegraphSynthSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingdownSynthSection {
    pub t1_us: f64,
    pub amplitude: f64,
    #[serde(default)]
    pub floor: f64,
    pub dt_ns: f64,
    pub samples: usize,
    #[serde(default)]
    pub noise_frac: f64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingdownConfig {
    #[serde(default)]
    pub input_csv: Option<PathBuf>,
    #[serde(default)]
    pub synth: Option<RingdownSynthSection>,
    /// Steady-state linewidth for the dephasing-residual report, kHz.
    #[serde(default)]
    pub steady_state_linewidth_khz: Option<f64>,
}

/// Enforces that exactly one of an input file or a synthesis section is
/// configured.
pub fn exactly_one_source<A, B>(
    input: &Option<A>,
    synth: &Option<B>,
    what: &str,
) -> Result<()> {
    match (input.is_some(), synth.is_some()) {
        (true, false) | (false, true) => Ok(()),
        (true, true) => Err(Error::input(format!(
            "{what}: provide either input_csv or [synth], not both"
        ))),
        (false, false) => Err(Error::input(format!(
            "{what}: provide input_csv or a [synth] section"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const DEVICE_TOML: &str = r#"
[material]
tc_k = 2.9
thickness_nm = 14.0
sheet_inductance_ph_per_sq = 40.0
scaling_current_density_ma_cm2 = 3.95

[wire]
width_nm = 18.0
length_nm = 460.0

[circuit]
shunt_capacitance_ff = 624.3294861
coupling_rate_khz = 580.0
alpha_override = 0.97
"#;

    #[test]
    fn device_config_converts_to_si() {
        let cfg: DesignConfig = toml::from_str(DEVICE_TOML).unwrap();
        let design = cfg.to_design().unwrap();
        assert_relative_eq!(design.wire.width_m, 18e-9);
        assert_relative_eq!(design.shunt_capacitance_f, 6.243294861e-13);
        assert_relative_eq!(
            design.material.sheet_inductance_h.unwrap(),
            40e-12
        );
        assert_relative_eq!(
            design.material.scaling_current_density_a_m2.unwrap(),
            3.95e10
        );
        assert_eq!(design.coupling_rate_hz, Some(580e3));
        assert_eq!(design.pad_inductance_h, 0.0);
    }

    #[test]
    fn missing_field_errors_name_the_field() {
        let broken = DEVICE_TOML.replace("tc_k = 2.9\n", "");
        let err = toml::from_str::<DesignConfig>(&broken).unwrap_err();
        assert!(err.to_string().contains("tc_k"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let extra = format!("{DEVICE_TOML}\n[circuit.typo]\nx = 1\n");
        assert!(toml::from_str::<DesignConfig>(&extra).is_err());
    }

    #[test]
    fn axis_generation() {
        let lin = AxisSpec {
            parameter: SweepParameter::WidthNm,
            min: 10.0,
            max: 50.0,
            count: 5,
            scale: AxisScale::Linear,
        };
        assert_eq!(lin.values().unwrap(), vec![10.0, 20.0, 30.0, 40.0, 50.0]);

        let log = AxisSpec {
            parameter: SweepParameter::CapacitanceFf,
            min: 1.0,
            max: 100.0,
            count: 3,
            scale: AxisScale::Log,
        };
        let v = log.values().unwrap();
        assert_relative_eq!(v[1], 10.0, max_relative = 1e-12);

        let single = AxisSpec {
            parameter: SweepParameter::Alpha,
            min: 0.97,
            max: 0.97,
            count: 1,
            scale: AxisScale::Linear,
        };
        assert_eq!(single.values().unwrap(), vec![0.97]);

        let bad = AxisSpec {
            parameter: SweepParameter::Alpha,
            min: 0.0,
            max: 1.0,
            count: 4,
            scale: AxisScale::Log,
        };
        assert!(bad.values().is_err());
    }

    #[test]
    fn source_exclusivity() {
        let file: Option<PathBuf> = Some(PathBuf::from("x.csv"));
        let synth: Option<u8> = Some(1);
        let neither: Option<PathBuf> = None;
        let no_synth: Option<u8> = None;
        assert!(exactly_one_source(&file, &no_synth, "t").is_ok());
        assert!(exactly_one_source(&neither, &synth, "t").is_ok());
        assert!(exactly_one_source(&file, &synth, "t").is_err());
        assert!(exactly_one_source(&neither, &no_synth, "t").is_err());
    }

    #[test]
    fn cavity_section_roundtrip() {
        let cav = CavitySection {
            resonance_ghz: 6.3,
            kerr_khz: 123.5,
            internal_linewidth_khz: 580.0,
            coupling_rate_khz: 580.0,
        }
        .to_cavity()
        .unwrap();
        assert_relative_eq!(cav.resonance_hz, 6.3e9);
        assert_relative_eq!(cav.kerr_hz, 123.5e3);
        assert_relative_eq!(cav.total_linewidth_hz(), 1.16e6);
    }
}
