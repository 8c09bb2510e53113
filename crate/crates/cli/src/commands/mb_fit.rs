//! `mb-fit`: critical temperature from the thermal pull of a resonance.

use anyhow::Result;
use nanokerr::config::{self, exactly_one_source, MbFitConfig};
use nanokerr::mb::GapModel;
use nanokerr::synth::tc_shift_curve;
use nanokerr::{fit_tc, frequency_shift, io, TcFit};
use serde::Serialize;

use crate::run::Run;

#[derive(Serialize)]
struct MbFitOutput {
    fit: TcFit,
    alpha: f64,
    gap_model: GapModel,
    points: usize,
}

pub fn run(run: &mut Run) -> Result<()> {
    let cfg: MbFitConfig = config::load(run.config_path())?;
    exactly_one_source(&cfg.input_csv, &cfg.synth, "mb-fit")?;

    let (temps, resonances) = if let Some(path) = &cfg.input_csv {
        let cols = io::read_columns(&run.resolve_input(path), &["temperature_k", "f0_hz"])?;
        (cols[0].clone(), cols[1].clone())
    } else {
        let synth = cfg.synth.as_ref().unwrap();
        if synth.points < 4 {
            return Err(nanokerr::Error::input("synth.points must be at least 4").into());
        }
        let temps: Vec<f64> = (0..synth.points)
            .map(|i| {
                synth.temperature_min_k
                    + (synth.temperature_max_k - synth.temperature_min_k) * i as f64
                        / (synth.points - 1) as f64
            })
            .collect();
        let resonances = tc_shift_curve(
            synth.base_resonance_ghz * 1e9,
            synth.tc_k,
            cfg.alpha,
            &temps,
            cfg.gap_model,
            synth.noise_frac,
            synth.seed,
        )?;
        let rows: Vec<Vec<f64>> = temps
            .iter()
            .zip(&resonances)
            .map(|(&t, &f)| vec![t, f])
            .collect();
        run.write_csv("mb_data.csv", &["temperature_k", "f0_hz"], &rows)?;
        (temps, resonances)
    };

    let fit = fit_tc(&temps, &resonances, cfg.alpha, cfg.gap_model)?;

    let model_curve = frequency_shift(
        fit.base_resonance_hz,
        &temps,
        fit.critical_temperature_k,
        cfg.alpha,
        cfg.gap_model,
    )?;
    let model = model_curve.resonances_hz(fit.base_resonance_hz);
    let residual_rows: Vec<Vec<f64>> = temps
        .iter()
        .zip(resonances.iter().zip(&model))
        .map(|(&t, (&f, &m))| vec![t, f, m, f - m])
        .collect();
    run.write_csv(
        "mb_fit_residuals.csv",
        &["temperature_k", "f0_hz", "model_hz", "residual_hz"],
        &residual_rows,
    )?;

    if cfg.emit_curve {
        let t_max = temps.iter().cloned().fold(0.0, f64::max);
        let fine: Vec<f64> = (0..=200).map(|i| t_max * i as f64 / 200.0).collect();
        let curve = frequency_shift(
            fit.base_resonance_hz,
            &fine,
            fit.critical_temperature_k,
            cfg.alpha,
            cfg.gap_model,
        )?;
        let values = curve.resonances_hz(fit.base_resonance_hz);
        let rows: Vec<Vec<f64>> = fine
            .iter()
            .zip(&values)
            .map(|(&t, &f)| vec![t, f])
            .collect();
        run.write_csv("mb_curve.csv", &["temperature_k", "f0_hz"], &rows)?;
    }

    run.write_json(
        "mb_fit.json",
        &MbFitOutput {
            fit,
            alpha: cfg.alpha,
            gap_model: cfg.gap_model,
            points: temps.len(),
        },
    )
}
