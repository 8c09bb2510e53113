//! Measurement-analysis procedures: resonance fitting, sheet-inductance
//! extraction, output-line calibration, Kerr-slope extraction, saturable
//! loss fits, and time-domain noise analysis.
//!
//! Every fit in this tree is a consistent estimator of its own generative
//! model: feeding it synthetic data drawn from the model recovers the
//! generating parameters, with error that vanishes with the noise.

pub mod kerr;
pub mod resonance;
pub mod ringdown;
pub mod sheet;
pub mod telegraph;
pub mod thermometry;
pub mod tls;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// What the trace axis means.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceKind {
    /// Axis in Hz, complex reflection values.
    FrequencySweep,
    /// Axis in seconds, real or complex samples.
    TimeSeries,
}

/// Sample values of a trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceValues {
    Complex(Vec<Complex64>),
    Real(Vec<f64>),
}

impl TraceValues {
    pub fn len(&self) -> usize {
        match self {
            TraceValues::Complex(v) => v.len(),
            TraceValues::Real(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A raw measured (or synthesized) trace: S11 versus frequency, or a
/// demodulated time record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasurementTrace {
    pub kind: TraceKind,
    /// Hz for sweeps, seconds for time series. Strictly increasing.
    pub axis: Vec<f64>,
    pub values: TraceValues,
}

impl MeasurementTrace {
    pub fn validate(&self) -> Result<()> {
        if self.axis.len() != self.values.len() {
            return Err(Error::input(format!(
                "axis has {} samples but values have {}",
                self.axis.len(),
                self.values.len()
            )));
        }
        if self.axis.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::input("trace axis must be strictly increasing"));
        }
        Ok(())
    }

    /// Validation plus the minimum sample count any fit requires.
    pub fn validate_for_fit(&self) -> Result<()> {
        self.validate()?;
        if self.axis.len() < 8 {
            return Err(Error::input(format!(
                "fits need at least 8 samples, got {}",
                self.axis.len()
            )));
        }
        Ok(())
    }

    pub fn complex_values(&self) -> Result<&[Complex64]> {
        match &self.values {
            TraceValues::Complex(v) => Ok(v),
            TraceValues::Real(_) => Err(Error::input("trace holds real values, expected complex")),
        }
    }

    pub fn real_values(&self) -> Result<&[f64]> {
        match &self.values {
            TraceValues::Real(v) => Ok(v),
            TraceValues::Complex(_) => {
                Err(Error::input("trace holds complex values, expected real"))
            }
        }
    }

    /// Sample spacing of a uniform time series; errors if the spacing
    /// wobbles by more than a part in 10^6.
    pub fn uniform_step(&self) -> Result<f64> {
        if self.axis.len() < 2 {
            return Err(Error::input("trace too short to have a step"));
        }
        let dt = self.axis[1] - self.axis[0];
        for w in self.axis.windows(2) {
            if ((w[1] - w[0]) - dt).abs() > 1e-6 * dt.abs() {
                return Err(Error::input("trace axis is not uniformly sampled"));
            }
        }
        Ok(dt)
    }
}

/// One fitted parameter with its one-sigma uncertainty.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitParam {
    pub name: String,
    pub value: f64,
    pub sigma: f64,
}

impl FitParam {
    pub fn new(name: &str, value: f64, sigma: f64) -> Self {
        FitParam {
            name: name.to_string(),
            value,
            sigma,
        }
    }
}

/// Uniform parameter/uncertainty view of any fit, for emission as JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitReport {
    pub parameters: Vec<FitParam>,
    pub residual_norm: f64,
    pub converged: bool,
}
