//! Conversions between the lab units used at the API boundary and the SI
//! values used internally.
//!
//! Internally every quantity is a plain SI `f64`: hertz, henry, farad, ampere,
//! kelvin, metre, joule. Configuration files and constructors accept the units
//! the quantities are usually quoted in (pH/square, MA/cm^2, states per
//! eV*um^3, ...) and convert once at the boundary.

use crate::constants::E_CHARGE;

/// Sheet inductance quoted in pH per square -> H per square.
pub fn ph_per_square_to_h(ph: f64) -> f64 {
    ph * 1e-12
}

/// Current density quoted in MA/cm^2 -> A/m^2.
pub fn ma_per_cm2_to_a_per_m2(ma_cm2: f64) -> f64 {
    // 1 MA/cm^2 = 1e6 A / 1e-4 m^2
    ma_cm2 * 1e10
}

/// Density of states quoted per eV and cubic micron -> per joule and cubic metre.
pub fn per_ev_um3_to_per_j_m3(n: f64) -> f64 {
    n / (E_CHARGE * 1e-18)
}

/// Number density quoted per cubic micron -> per cubic metre.
pub fn per_um3_to_per_m3(n: f64) -> f64 {
    n * 1e18
}

/// Resistivity quoted in micro-ohm cm -> ohm m.
pub fn uohm_cm_to_ohm_m(r: f64) -> f64 {
    r * 1e-8
}

/// Power ratio -> decibel.
pub fn ratio_to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

/// Decibel -> power ratio.
pub fn db_to_ratio(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Power in dBm -> watt.
pub fn dbm_to_watt(dbm: f64) -> f64 {
    1e-3 * db_to_ratio(dbm)
}

/// Power in watt -> dBm.
pub fn watt_to_dbm(w: f64) -> f64 {
    ratio_to_db(w / 1e-3)
}
