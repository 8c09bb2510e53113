//! Dissipation budget: quasiparticle loss, radiative decay through the
//! sample enclosure, and aggregation into per-channel quality factors.
//!
//! The radiation estimate follows a three-step recipe. The capacitor pads
//! produce a dipole-like field computed from the conformal map of two
//! coplanar half-planes; the enclosure supports a rectangular-cavity mode;
//! their overlap integral gives a coupling rate `g`, and the far-detuned
//! Purcell expression `kappa (g/Delta)^2` converts it to a loss rate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{C_LIGHT, HBAR};
use crate::error::{Error, Result};
use crate::units::{per_ev_um3_to_per_j_m3, per_um3_to_per_m3};

const TWO_PI: f64 = std::f64::consts::TAU;

/// Quasiparticle environment of the film, in the units loss budgets are
/// quoted in.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QpEnvironment {
    /// Nonequilibrium quasiparticle density, per cubic micrometer.
    pub qp_density_per_um3: f64,
    /// Two-spin density of states at the Fermi level, per eV per cubic
    /// micrometer.
    pub pair_dos_per_ev_um3: f64,
}

impl QpEnvironment {
    pub fn validate(&self) -> Result<()> {
        if self.qp_density_per_um3 < 0.0 {
            return Err(Error::input("quasiparticle density must be non-negative"));
        }
        if !(self.pair_dos_per_ev_um3 > 0.0) {
            return Err(Error::input("density of states must be positive"));
        }
        Ok(())
    }
}

/// Quasiparticle-induced decay rate, Hz:
/// `(alpha w0 / pi) sqrt(2 gap / hbar w0) n_qp / (D(EF) gap) / 2pi`.
pub fn qp_loss(alpha: f64, f0_hz: f64, gap0_j: f64, env: &QpEnvironment) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::input("participation must be in (0, 1]"));
    }
    if !(f0_hz > 0.0) {
        return Err(Error::input("resonance frequency must be positive"));
    }
    if !(gap0_j > 0.0) {
        return Err(Error::input("gap must be positive"));
    }
    env.validate()?;
    let w0 = TWO_PI * f0_hz;
    let n_qp = per_um3_to_per_m3(env.qp_density_per_um3);
    let dos = per_ev_um3_to_per_j_m3(env.pair_dos_per_ev_um3);
    let rate_angular =
        alpha * w0 / std::f64::consts::PI * (2.0 * gap0_j / (HBAR * w0)).sqrt() * n_qp
            / (dos * gap0_j);
    Ok(rate_angular / TWO_PI)
}

/// Which rectangular-cavity eigenmode the enclosure field uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoxModeKind {
    /// E along x, varying in y and z. The lowest mode of a squat box and
    /// the one that couples to an in-plane pad dipole along x.
    Te011,
    /// E along y, varying in x and z. Orthogonal to the pad dipole.
    Te101,
}

/// Sample-enclosure mode: dimensions, quality factor and eigenmode kind.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoxMode {
    pub lx_m: f64,
    pub ly_m: f64,
    pub lz_m: f64,
    /// Loaded quality factor of the enclosure mode.
    pub quality_factor: f64,
    pub kind: BoxModeKind,
}

impl BoxMode {
    pub fn validate(&self) -> Result<()> {
        if !(self.lx_m > 0.0 && self.ly_m > 0.0 && self.lz_m > 0.0) {
            return Err(Error::input("box dimensions must be positive"));
        }
        if !(self.quality_factor > 0.0) {
            return Err(Error::input("box quality factor must be positive"));
        }
        Ok(())
    }

    /// Eigenfrequency from the rectangular-cavity dispersion, Hz.
    pub fn frequency_hz(&self) -> f64 {
        let (la, lb) = match self.kind {
            BoxModeKind::Te011 => (self.ly_m, self.lz_m),
            BoxModeKind::Te101 => (self.lx_m, self.lz_m),
        };
        0.5 * C_LIGHT * (1.0 / (la * la) + 1.0 / (lb * lb)).sqrt()
    }

    /// Energy decay rate `f / Q`, Hz.
    pub fn linewidth_hz(&self) -> f64 {
        self.frequency_hz() / self.quality_factor
    }

    /// Mode volume of the unit-peak eigenfield, `Lx Ly Lz / 4`.
    pub fn mode_volume_m3(&self) -> f64 {
        0.25 * self.lx_m * self.ly_m * self.lz_m
    }
}

impl Default for BoxMode {
    /// A squat copper box whose lowest mode sits near 17 GHz with a loaded
    /// Q of 500.
    fn default() -> Self {
        let side = C_LIGHT / (2.0_f64.sqrt() * 17e9);
        BoxMode {
            lx_m: 10e-3,
            ly_m: side,
            lz_m: side,
            quality_factor: 500.0,
            kind: BoxModeKind::Te011,
        }
    }
}

/// Dimensionless vector amplitude of a mode at one point.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ModeField {
    pub ex: f64,
    pub ey: f64,
    pub ez: f64,
}

impl ModeField {
    pub fn dot(&self, other: &ModeField) -> f64 {
        self.ex * other.ex + self.ey * other.ey + self.ez * other.ez
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

/// Normalized eigenfield of the enclosure at a point in box coordinates
/// (origin at a corner). Peak amplitude is 1 at the mode antinode;
/// tangential E vanishes on the walls.
pub fn box_mode_field(bx: &BoxMode, x_m: f64, y_m: f64, z_m: f64) -> Result<ModeField> {
    bx.validate()?;
    let inside = (0.0..=bx.lx_m).contains(&x_m)
        && (0.0..=bx.ly_m).contains(&y_m)
        && (0.0..=bx.lz_m).contains(&z_m);
    if !inside {
        return Err(Error::input(format!(
            "position ({x_m}, {y_m}, {z_m}) m lies outside the box"
        )));
    }
    let field = match bx.kind {
        BoxModeKind::Te011 => ModeField {
            ex: (std::f64::consts::PI * y_m / bx.ly_m).sin()
                * (std::f64::consts::PI * z_m / bx.lz_m).sin(),
            ey: 0.0,
            ez: 0.0,
        },
        BoxModeKind::Te101 => ModeField {
            ex: 0.0,
            ey: (std::f64::consts::PI * x_m / bx.lx_m).sin()
                * (std::f64::consts::PI * z_m / bx.lz_m).sin(),
            ez: 0.0,
        },
    };
    Ok(field)
}

/// Coplanar capacitor-pad geometry. The two pads are modeled as coplanar
/// plates separated by `gap_m` along x, extending `pad_width_m` to each
/// side and `pad_length_m` along the invariant direction.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PadGeometry {
    /// Full gap between the pads, m.
    pub gap_m: f64,
    /// Lateral extent of each pad beyond the gap edge, m. Bounds the
    /// sampled field domain; the conformal map itself assumes wide plates.
    pub pad_width_m: f64,
    /// Pad length along the invariant direction, m.
    pub pad_length_m: f64,
    /// Potential difference used to generate the physical field, V. Pure
    /// normalization; coupling rates do not depend on it.
    pub pad_voltage_v: f64,
}

impl PadGeometry {
    pub fn validate(&self) -> Result<()> {
        if !(self.gap_m > 0.0 && self.pad_width_m > 0.0 && self.pad_length_m > 0.0) {
            return Err(Error::input("pad dimensions must be positive"));
        }
        if !(self.pad_voltage_v > 0.0) {
            return Err(Error::input("pad voltage must be positive"));
        }
        Ok(())
    }

    fn half_gap(&self) -> f64 {
        0.5 * self.gap_m
    }

    /// Half-extent of the sampled domain in x and y.
    fn half_domain(&self) -> f64 {
        self.half_gap() + self.pad_width_m
    }

    /// Complex field `Ex - i Ey` of the conformal map at `z = x + i y`,
    /// V/m, for the configured pad voltage. The principal branch places the
    /// cuts on the conductors.
    fn complex_field(&self, x_m: f64, y_m: f64) -> Complex64 {
        let a = self.half_gap();
        let z = Complex64::new(x_m, y_m);
        let root = (Complex64::new(a * a, 0.0) - z * z).sqrt();
        -self.pad_voltage_v / std::f64::consts::PI / root
    }

    /// Whether the point lies on a conductor (limiting field applies).
    fn on_conductor(&self, x_m: f64, y_m: f64) -> bool {
        y_m == 0.0 && x_m.abs() >= self.half_gap()
    }
}

/// Sampled pad field with its normalization. The amplitude `a_r` is the
/// field divided by its gap-center magnitude; `mode_volume_m3` is the
/// integral of `|a_r|^2` over the sampled domain, so the zero-point field
/// scale is `sqrt(hbar w_r / (2 eps0 V_r))`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PadFieldMap {
    pub geometry: PadGeometry,
    /// Grid abscissae across the gap, m.
    pub xs_m: Vec<f64>,
    /// Grid ordinates out of plane, m.
    pub ys_m: Vec<f64>,
    /// Ex on the grid, row-major over (y, x), V/m.
    pub ex_v_per_m: Vec<f64>,
    /// Ey on the grid, row-major over (y, x), V/m.
    pub ey_v_per_m: Vec<f64>,
    /// Grid points that sit on a conductor and carry limiting values.
    pub on_conductor: Vec<bool>,
    /// Gap-center field magnitude used to normalize amplitudes, V/m.
    pub peak_field_v_per_m: f64,
    /// Integral of |a_r|^2 over the sampled domain, m^3.
    pub mode_volume_m3: f64,
}

/// Evaluates the pad field on a uniform grid over the sampled domain and
/// computes the amplitude normalization. Points on a conductor get the
/// limiting field from just above the plane and are flagged.
pub fn coplanar_pad_field(geometry: &PadGeometry, nx: usize, ny: usize) -> Result<PadFieldMap> {
    geometry.validate()?;
    if nx < 2 || ny < 2 {
        return Err(Error::input("field grid needs at least 2 points per axis"));
    }
    let half = geometry.half_domain();
    let xs: Vec<f64> = (0..nx)
        .map(|i| -half + 2.0 * half * i as f64 / (nx - 1) as f64)
        .collect();
    let ys: Vec<f64> = (0..ny)
        .map(|j| -half + 2.0 * half * j as f64 / (ny - 1) as f64)
        .collect();
    let mut ex = Vec::with_capacity(nx * ny);
    let mut ey = Vec::with_capacity(nx * ny);
    let mut flags = Vec::with_capacity(nx * ny);
    let lift = 1e-9 * geometry.half_gap();
    for &y in &ys {
        for &x in &xs {
            let flagged = geometry.on_conductor(x, y);
            let field = if flagged {
                geometry.complex_field(x, lift)
            } else {
                geometry.complex_field(x, y)
            };
            ex.push(field.re);
            ey.push(-field.im);
            flags.push(flagged);
        }
    }
    let peak = geometry.complex_field(0.0, 0.0).norm();
    let mode_volume = pad_mode_volume(geometry);
    Ok(PadFieldMap {
        geometry: *geometry,
        xs_m: xs,
        ys_m: ys,
        ex_v_per_m: ex,
        ey_v_per_m: ey,
        on_conductor: flags,
        peak_field_v_per_m: peak,
        mode_volume_m3: mode_volume,
    })
}

impl PadFieldMap {
    /// Dimensionless amplitude components at an arbitrary point of the
    /// cross-section, from the analytic map.
    pub fn amplitude_at(&self, x_m: f64, y_m: f64) -> ModeField {
        let field = self.geometry.complex_field(x_m, y_m);
        ModeField {
            ex: field.re / self.peak_field_v_per_m,
            ey: -field.im / self.peak_field_v_per_m,
            ez: 0.0,
        }
    }
}

/// Midpoint-rule integral of |a_r|^2 over the sampled box, refined until it
/// changes by less than 0.5%.
fn pad_mode_volume(geometry: &PadGeometry) -> f64 {
    let half = geometry.half_domain();
    let peak_sq = geometry.complex_field(0.0, 0.0).norm_sqr();
    let area_integral = |n: usize| -> f64 {
        let h = 2.0 * half / n as f64;
        let mut sum = 0.0;
        for j in 0..n {
            let y = -half + (j as f64 + 0.5) * h;
            for i in 0..n {
                let x = -half + (i as f64 + 0.5) * h;
                sum += geometry.complex_field(x, y).norm_sqr();
            }
        }
        sum * h * h / peak_sq
    };
    let mut n = 64;
    let mut prev = area_integral(n);
    for _ in 0..5 {
        n *= 2;
        let next = area_integral(n);
        let done = (next - prev).abs() <= 5e-3 * next.abs();
        prev = next;
        if done {
            break;
        }
    }
    prev * geometry.pad_length_m
}

/// Settings for the overlap-integral evaluation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OverlapConfig {
    /// Starting number of cells per axis of the uniform grid.
    pub initial_cells: usize,
    /// Relative change between successive grid doublings at which the
    /// integral is accepted.
    pub tolerance: f64,
    /// Maximum number of grid doublings.
    pub max_doublings: usize,
    /// Relative permittivity below the chip plane (substrate side). Set to
    /// 1.0 for a chip suspended in vacuum.
    pub substrate_permittivity: f64,
}

impl Default for OverlapConfig {
    fn default() -> Self {
        OverlapConfig {
            initial_cells: 16,
            tolerance: 0.01,
            max_doublings: 5,
            substrate_permittivity: 11.7,
        }
    }
}

/// Coupling rate between the pad field and the enclosure mode, Hz:
///
/// ```text
/// g = sqrt(f_r f_b) / (2 sqrt(V_r V_b)) | Int eps(p) a_r . a_b dV |
/// ```
///
/// The chip sits at the box center with the gap axis along the box E-field
/// direction of the TE011 mode and the substrate below the chip plane. The
/// integral runs over the pad field's sampled domain with a signed
/// integrand, so symmetry-forbidden pairings cancel to zero. A uniform
/// midpoint grid is doubled until the result is stable.
pub fn coupling_rate(
    pad: &PadFieldMap,
    bx: &BoxMode,
    resonator_hz: f64,
    config: &OverlapConfig,
) -> Result<f64> {
    bx.validate()?;
    if !(resonator_hz > 0.0) {
        return Err(Error::input("resonator frequency must be positive"));
    }
    if !(pad.mode_volume_m3 > 0.0) || !(pad.peak_field_v_per_m > 0.0) {
        return Err(Error::input("pad field map is not normalized"));
    }
    if !(config.tolerance > 0.0) || config.initial_cells < 2 {
        return Err(Error::input("overlap grid settings are invalid"));
    }
    let geom = &pad.geometry;
    let half = geom.half_gap() + geom.pad_width_m;
    let half_len = 0.5 * geom.pad_length_m;
    if 2.0 * half > bx.lx_m.min(bx.ly_m) || geom.pad_length_m > bx.lz_m {
        return Err(Error::input("pad domain does not fit inside the box"));
    }

    // Returns the signed overlap and the integral of its magnitude; the
    // latter sets the scale against which "converged to zero" is judged
    // for symmetry-forbidden pairings.
    let overlap = |cells: usize| -> (f64, f64) {
        let hx = 2.0 * half / cells as f64;
        let hy = hx;
        let hz = 2.0 * half_len / cells as f64;
        let mut sum = 0.0;
        let mut sum_abs = 0.0;
        for k in 0..cells {
            let zeta = -half_len + (k as f64 + 0.5) * hz;
            for j in 0..cells {
                let y = -half + (j as f64 + 0.5) * hy;
                let eps = if y < 0.0 {
                    config.substrate_permittivity
                } else {
                    1.0
                };
                for i in 0..cells {
                    let x = -half + (i as f64 + 0.5) * hx;
                    let a_r = pad.amplitude_at(x, y);
                    let a_b = box_mode_field(
                        bx,
                        0.5 * bx.lx_m + x,
                        0.5 * bx.ly_m + y,
                        0.5 * bx.lz_m + zeta,
                    )
                    .expect("pad domain checked to fit inside the box");
                    let term = eps * a_r.dot(&a_b);
                    sum += term;
                    sum_abs += term.abs();
                }
            }
        }
        (sum * hx * hy * hz, sum_abs * hx * hy * hz)
    };

    let mut cells = config.initial_cells;
    let (mut value, _) = overlap(cells);
    let mut converged = false;
    for _ in 0..config.max_doublings {
        cells *= 2;
        let (next, unsigned) = overlap(cells);
        let scale = next.abs().max(1e-9 * unsigned).max(1e-300);
        converged = (next - value).abs() <= config.tolerance * scale;
        value = next;
        if converged {
            break;
        }
    }
    if !converged {
        return Err(Error::input(format!(
            "overlap integral did not stabilize to {:.1}% within {} doublings",
            100.0 * config.tolerance,
            config.max_doublings
        )));
    }

    let g = (resonator_hz * bx.frequency_hz()).sqrt()
        / (2.0 * (pad.mode_volume_m3 * bx.mode_volume_m3()).sqrt())
        * value.abs();
    Ok(g)
}

/// Far-detuned Purcell decay rate `kappa (g / Delta)^2`, Hz.
///
/// The expression assumes the detuning dominates both rates; callers should
/// check [`far_detuned`] before trusting the number quantitatively.
pub fn purcell_loss(g_hz: f64, kappa_hz: f64, detuning_hz: f64) -> Result<f64> {
    if g_hz < 0.0 || kappa_hz < 0.0 {
        return Err(Error::input("rates must be non-negative"));
    }
    if detuning_hz == 0.0 {
        return Err(Error::input(
            "detuning must be nonzero for the far-detuned decay expression",
        ));
    }
    let ratio = g_hz / detuning_hz;
    Ok(kappa_hz * ratio * ratio)
}

/// Whether the far-detuned assumption behind [`purcell_loss`] holds
/// (detuning at least five times both rates).
pub fn far_detuned(g_hz: f64, kappa_hz: f64, detuning_hz: f64) -> bool {
    detuning_hz.abs() > 5.0 * g_hz.max(kappa_hz)
}

/// One named decay channel of the budget.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LossChannel {
    pub label: String,
    /// Energy decay rate, Hz.
    pub rate_hz: f64,
    /// Quality factor this channel alone would allow.
    pub quality_factor: f64,
}

/// Aggregated decay budget at one resonance frequency.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LossBudget {
    pub resonance_hz: f64,
    pub channels: Vec<LossChannel>,
    /// Sum of all channel rates, Hz.
    pub total_rate_hz: f64,
    /// Quality factor from the summed rates; infinite for an empty budget.
    pub total_quality_factor: f64,
}

impl LossBudget {
    /// How much of an observed linewidth the budget leaves unexplained, Hz.
    /// Large positive residuals flag a dominant channel missing from the
    /// budget (typically dielectric two-level systems).
    pub fn unexplained_rate_hz(&self, observed_linewidth_hz: f64) -> f64 {
        observed_linewidth_hz - self.total_rate_hz
    }

    /// Fraction of an observed linewidth the budget accounts for.
    pub fn fraction_explained(&self, observed_linewidth_hz: f64) -> f64 {
        self.total_rate_hz / observed_linewidth_hz
    }
}

/// Sums named decay rates into a budget with per-channel quality factors.
pub fn assemble_budget(resonance_hz: f64, rates: &[(&str, f64)]) -> Result<LossBudget> {
    if !(resonance_hz > 0.0) {
        return Err(Error::input("resonance frequency must be positive"));
    }
    let mut channels = Vec::with_capacity(rates.len());
    let mut total = 0.0;
    for (label, rate) in rates {
        if *rate < 0.0 {
            return Err(Error::input(format!(
                "channel '{label}' has a negative rate"
            )));
        }
        total += rate;
        channels.push(LossChannel {
            label: (*label).to_string(),
            rate_hz: *rate,
            quality_factor: if *rate > 0.0 {
                resonance_hz / rate
            } else {
                f64::INFINITY
            },
        });
    }
    Ok(LossBudget {
        resonance_hz,
        channels,
        total_rate_hz: total,
        total_quality_factor: if total > 0.0 {
            resonance_hz / total
        } else {
            f64::INFINITY
        },
    })
}
