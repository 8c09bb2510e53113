//! `ringdown`: energy decay time from a power relaxation record.

use anyhow::Result;
use nanokerr::config::{self, exactly_one_source, RingdownConfig};
use nanokerr::io::read_trace;
use nanokerr::synth::ringdown_series;
use nanokerr::{ringdown_t1, RingdownFit};
use serde::Serialize;

use crate::run::Run;

#[derive(Serialize)]
struct RingdownOutput {
    fit: RingdownFit,
    steady_state_linewidth_hz: Option<f64>,
    /// Steady-state linewidth minus the energy-decay part: an upper bound
    /// on pure dephasing, Hz.
    dephasing_residual_hz: Option<f64>,
}

pub fn run(run: &mut Run) -> Result<()> {
    let cfg: RingdownConfig = config::load(run.config_path())?;
    exactly_one_source(&cfg.input_csv, &cfg.synth, "ringdown")?;

    let trace = if let Some(path) = &cfg.input_csv {
        read_trace(&run.resolve_input(path))?
    } else {
        let synth = cfg.synth.as_ref().unwrap();
        let trace = ringdown_series(
            synth.t1_us * 1e-6,
            synth.amplitude,
            synth.floor,
            synth.dt_ns * 1e-9,
            synth.samples,
            synth.noise_frac,
            synth.seed,
        );
        let rows: Vec<Vec<f64>> = trace
            .axis
            .iter()
            .zip(trace.real_values()?)
            .map(|(&t, &v)| vec![t, v])
            .collect();
        run.write_csv("ringdown_data.csv", &["time_s", "value"], &rows)?;
        trace
    };

    let fit = ringdown_t1(&trace)?;

    let values = trace.real_values()?;
    let t_start = trace.axis[0];
    let rows: Vec<Vec<f64>> = trace
        .axis
        .iter()
        .zip(values)
        .map(|(&t, &v)| {
            let m = fit.amplitude * (-(t - t_start) / fit.t1_s).exp() + fit.floor;
            vec![t, v, m, v - m]
        })
        .collect();
    run.write_csv(
        "ringdown_residuals.csv",
        &["time_s", "value", "model", "residual"],
        &rows,
    )?;

    let steady = cfg.steady_state_linewidth_khz.map(|k| k * 1e3);
    run.write_json(
        "ringdown.json",
        &RingdownOutput {
            dephasing_residual_hz: steady.map(|s| fit.dephasing_residual_hz(s)),
            steady_state_linewidth_hz: steady,
            fit,
        },
    )
}
