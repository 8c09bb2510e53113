//! Physical constants (CODATA 2018, SI units).

/// Boltzmann constant, J/K (exact).
pub const K_B: f64 = 1.380_649e-23;

/// Planck constant, J*s (exact).
pub const H_PLANCK: f64 = 6.626_070_15e-34;

/// Reduced Planck constant, J*s.
pub const HBAR: f64 = H_PLANCK / (2.0 * std::f64::consts::PI);

/// Elementary charge, C (exact).
pub const E_CHARGE: f64 = 1.602_176_634e-19;

/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_8128e-12;

/// Speed of light in vacuum, m/s (exact).
pub const C_LIGHT: f64 = 299_792_458.0;

/// BCS weak-coupling gap ratio used throughout: Delta_0 = 1.76 k_B T_c.
pub const BCS_GAP_RATIO: f64 = 1.76;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hbar_matches_h_over_2pi() {
        assert!((HBAR - 1.054_571_817e-34).abs() < 1e-43);
    }
}
