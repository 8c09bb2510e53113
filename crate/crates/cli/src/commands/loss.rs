//! `loss`: per-channel decay budget for one device in its environment.

use anyhow::Result;
use nanokerr::config::{self, LossConfig};
use nanokerr::{
    assemble_budget, coplanar_pad_field, coupling_rate, far_detuned, gap_from_tc, purcell_loss,
    qp_loss, LossBudget, OverlapConfig,
};
use serde::Serialize;

use crate::run::{cell, Run};

/// Grid density for the pad fringe-field map feeding the overlap integral.
const PAD_GRID: usize = 11;

#[derive(Serialize)]
struct RadiationDetail {
    box_frequency_hz: f64,
    box_linewidth_hz: f64,
    coupling_hz: f64,
    detuning_hz: f64,
    /// Whether the dispersive expression for the decay is trustworthy.
    far_detuned: bool,
    /// True when the coupling came from the config instead of the overlap
    /// integral.
    coupling_overridden: bool,
}

#[derive(Serialize)]
struct LossOutput {
    budget: LossBudget,
    radiation: Option<RadiationDetail>,
    observed_linewidth_hz: Option<f64>,
    unexplained_rate_hz: Option<f64>,
    fraction_explained: Option<f64>,
}

pub fn run(run: &mut Run) -> Result<()> {
    let cfg: LossConfig = config::load(run.config_path())?;
    let f0 = cfg.resonance_ghz * 1e9;

    let mut rates: Vec<(String, f64)> = Vec::new();
    if let Some(qp) = &cfg.qp {
        let rate = qp_loss(cfg.alpha, f0, gap_from_tc(qp.tc_k), &qp.environment())?;
        rates.push(("quasiparticle".into(), rate));
    }

    let mut radiation = None;
    if let Some(rad) = &cfg.radiation {
        let bx = rad.box_mode.to_box()?;
        let coupling_hz = match rad.coupling_override_mhz {
            Some(mhz) => mhz * 1e6,
            None => {
                let pads = rad.pad.to_geometry()?;
                let map = coplanar_pad_field(&pads, PAD_GRID, PAD_GRID)?;
                let mut overlap = OverlapConfig {
                    substrate_permittivity: rad.substrate_permittivity,
                    ..OverlapConfig::default()
                };
                if let Some(tol) = run.tolerance {
                    overlap.tolerance = tol;
                }
                coupling_rate(&map, &bx, f0, &overlap)?
            }
        };
        let box_linewidth_hz = bx.linewidth_hz();
        let detuning_hz = bx.frequency_hz() - f0;
        let rate = purcell_loss(coupling_hz, box_linewidth_hz, detuning_hz)?;
        radiation = Some(RadiationDetail {
            box_frequency_hz: bx.frequency_hz(),
            box_linewidth_hz,
            coupling_hz,
            detuning_hz,
            far_detuned: far_detuned(coupling_hz, box_linewidth_hz, detuning_hz),
            coupling_overridden: rad.coupling_override_mhz.is_some(),
        });
        rates.push(("radiation".into(), rate));
    }

    if let Some(khz) = cfg.tls_rate_khz {
        rates.push(("tls".into(), khz * 1e3));
    }

    let named: Vec<(&str, f64)> = rates.iter().map(|(n, r)| (n.as_str(), *r)).collect();
    let budget = assemble_budget(f0, &named)?;

    let header = ["channel", "rate_hz", "quality_factor"];
    let rows: Vec<Vec<String>> = budget
        .channels
        .iter()
        .map(|c| vec![c.label.clone(), cell(c.rate_hz), cell(c.quality_factor)])
        .collect();
    run.write_table("loss_channels.csv", &header, &rows)?;

    let observed_hz = cfg.observed_linewidth_khz.map(|k| k * 1e3);
    run.write_json(
        "loss.json",
        &LossOutput {
            unexplained_rate_hz: observed_hz.map(|o| budget.unexplained_rate_hz(o)),
            fraction_explained: observed_hz.map(|o| budget.fraction_explained(o)),
            budget,
            radiation,
            observed_linewidth_hz: observed_hz,
        },
    )
}
