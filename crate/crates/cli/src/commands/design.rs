//! `design`: one config in, one JSON derivation report out.

use anyhow::Result;
use nanokerr::config::{self, DesignConfig};
use nanokerr::{design_report, kerr_shift, DesignReport};
use serde::Serialize;

use crate::run::Run;

#[derive(Serialize)]
struct DesignOutput {
    #[serde(flatten)]
    report: DesignReport,
    /// Participation used for the reported Kerr when the config overrides
    /// the derived value.
    alpha_override: Option<f64>,
    /// Kerr coefficient after any participation override, Hz. Equals the
    /// derived `circuit.kerr_hz` otherwise.
    kerr_reported_hz: f64,
}

pub fn run(run: &mut Run) -> Result<()> {
    let cfg: DesignConfig = config::load(run.config_path())?;
    let design = cfg.to_design()?;
    let report = design_report(&design)?;

    let kerr_reported_hz = match cfg.circuit.alpha_override {
        Some(alpha) => kerr_shift(
            report.circuit.resonance_hz,
            alpha,
            report.circuit.zero_point_current_a,
            report.circuit.scaling_current_a,
        ),
        None => report.circuit.kerr_hz,
    };
    run.write_json(
        "design.json",
        &DesignOutput {
            report,
            alpha_override: cfg.circuit.alpha_override,
            kerr_reported_hz,
        },
    )
}
