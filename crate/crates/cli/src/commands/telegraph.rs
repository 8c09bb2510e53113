//! `telegraph`: switching-time extraction from a two-state record.

use anyhow::Result;
use nanokerr::config::{self, exactly_one_source, TelegraphConfig};
use nanokerr::io::read_trace;
use nanokerr::synth::telegraph_series;
use nanokerr::{telegraph_tau, TelegraphFit};
use serde::Serialize;

use crate::run::Run;

#[derive(Serialize)]
struct TelegraphOutput {
    fit: TelegraphFit,
    samples: usize,
    duration_s: f64,
}

pub fn run(run: &mut Run) -> Result<()> {
    let cfg: TelegraphConfig = config::load(run.config_path())?;
    exactly_one_source(&cfg.input_csv, &cfg.synth, "telegraph")?;

    let trace = if let Some(path) = &cfg.input_csv {
        read_trace(&run.resolve_input(path))?
    } else {
        let synth = cfg.synth.as_ref().unwrap();
        let trace = telegraph_series(synth.decay_time_s, synth.dt_s, synth.samples, synth.seed);
        let rows: Vec<Vec<f64>> = trace
            .axis
            .iter()
            .zip(trace.real_values()?)
            .map(|(&t, &v)| vec![t, v])
            .collect();
        run.write_csv("telegraph_data.csv", &["time_s", "value"], &rows)?;
        trace
    };

    let samples = trace.axis.len();
    let duration_s = trace.axis.last().copied().unwrap_or(0.0) - trace.axis.first().copied().unwrap_or(0.0);
    let fit = telegraph_tau(&trace)?;
    run.write_json(
        "telegraph.json",
        &TelegraphOutput {
            fit,
            samples,
            duration_s,
        },
    )
}
