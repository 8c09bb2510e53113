//! Shared numerical routines: cubic roots, adaptive quadrature, damped
//! least squares.

pub mod cubic;
pub mod lm;
pub mod quad;
