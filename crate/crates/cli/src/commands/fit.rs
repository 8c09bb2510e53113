//! `fit`: dispatch measured data to the matching analysis.
//!
//! Every kind writes `fit.json` with the fitted parameters and
//! `fit_residuals.csv` comparing the data against the fitted model point by
//! point.

use anyhow::Result;
use nanokerr::config::{self, FitConfig, FitKind};
use nanokerr::io::{has_column, read_columns, read_trace};
use nanokerr::{
    extract_kerr, fit_resonance, fit_sheet_inductance, fit_tc, fit_tls_saturation,
    frequency_shift, Error, ShiftPoint,
};
use serde::Serialize;

use crate::run::Run;

#[derive(Serialize)]
struct FitOutput<T: Serialize> {
    kind: &'static str,
    result: T,
}

pub fn run(run: &mut Run) -> Result<()> {
    let cfg: FitConfig = config::load(run.config_path())?;
    let input = run.resolve_input(&cfg.input_csv);
    match cfg.kind {
        FitKind::Resonance => resonance(run, &input),
        FitKind::Tc => tc(run, &cfg, &input),
        FitKind::Tls => tls(run, &cfg, &input),
        FitKind::Sheet => sheet(run, &cfg, &input),
        FitKind::Kerr => kerr(run, &cfg, &input),
    }
}

fn resonance(run: &mut Run, input: &std::path::Path) -> Result<()> {
    let trace = read_trace(input)?;
    let fit = fit_resonance(&trace)?;
    let model = fit.model();
    let values = trace.complex_values()?;
    let rows: Vec<Vec<f64>> = trace
        .axis
        .iter()
        .zip(values)
        .map(|(&f, v)| {
            let m = model.eval(f);
            vec![f, v.re, v.im, m.re, m.im, (v - m).norm()]
        })
        .collect();
    run.write_csv(
        "fit_residuals.csv",
        &["frequency_hz", "data_re", "data_im", "model_re", "model_im", "residual_abs"],
        &rows,
    )?;
    run.write_json("fit.json", &FitOutput { kind: "resonance", result: fit })
}

fn tc(run: &mut Run, cfg: &FitConfig, input: &std::path::Path) -> Result<()> {
    let alpha = cfg
        .alpha
        .ok_or_else(|| Error::input("tc fits need the participation: set alpha"))?;
    let cols = read_columns(input, &["temperature_k", "f0_hz"])?;
    let fit = fit_tc(&cols[0], &cols[1], alpha, cfg.gap_model)?;
    let curve = frequency_shift(
        fit.base_resonance_hz,
        &cols[0],
        fit.critical_temperature_k,
        alpha,
        cfg.gap_model,
    )?;
    let model = curve.resonances_hz(fit.base_resonance_hz);
    let rows: Vec<Vec<f64>> = cols[0]
        .iter()
        .zip(cols[1].iter().zip(&model))
        .map(|(&t, (&f, &m))| vec![t, f, m, f - m])
        .collect();
    run.write_csv(
        "fit_residuals.csv",
        &["temperature_k", "f0_hz", "model_hz", "residual_hz"],
        &rows,
    )?;
    run.write_json("fit.json", &FitOutput { kind: "tc", result: fit })
}

fn tls(run: &mut Run, cfg: &FitConfig, input: &std::path::Path) -> Result<()> {
    let cols = read_columns(input, &["photon_number", "internal_q"])?;
    let fit = fit_tls_saturation(&cols[0], &cols[1], cfg.exponent)?;
    let rows: Vec<Vec<f64>> = cols[0]
        .iter()
        .zip(&cols[1])
        .map(|(&n, &q)| {
            let m = fit.q_at(n);
            vec![n, q, m, q - m]
        })
        .collect();
    run.write_csv(
        "fit_residuals.csv",
        &["photon_number", "internal_q", "model_q", "residual_q"],
        &rows,
    )?;
    run.write_json("fit.json", &FitOutput { kind: "tls", result: fit })
}

fn sheet(run: &mut Run, cfg: &FitConfig, input: &std::path::Path) -> Result<()> {
    let capacitance_f = cfg
        .capacitance_ff
        .ok_or_else(|| Error::input("sheet fits need the shunt capacitance: set capacitance_ff"))?
        * 1e-15;
    let width_m = cfg
        .width_um
        .ok_or_else(|| Error::input("sheet fits need the wire width: set width_um"))?
        * 1e-6;
    let cols = read_columns(input, &["length_m", "f0_hz"])?;
    let points: Vec<(f64, f64)> = cols[0].iter().cloned().zip(cols[1].iter().cloned()).collect();
    let fit = fit_sheet_inductance(&points, capacitance_f, width_m)?;
    // The regression runs on 1/f0^2 versus length, so residuals are
    // reported in that plane.
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|&(l, f)| {
            let data = 1.0 / (f * f);
            let model = fit.slope_s2_per_m * l + fit.intercept_s2;
            vec![l, f, data, model, data - model]
        })
        .collect();
    run.write_csv(
        "fit_residuals.csv",
        &["length_m", "f0_hz", "inv_f2_s2", "model_inv_f2_s2", "residual_s2"],
        &rows,
    )?;
    run.write_json("fit.json", &FitOutput { kind: "sheet", result: fit })
}

fn kerr(run: &mut Run, cfg: &FitConfig, input: &std::path::Path) -> Result<()> {
    let with_sigma = has_column(input, "shift_sigma_hz")?;
    let points: Vec<ShiftPoint> = if with_sigma {
        let cols = read_columns(input, &["photon_number", "shift_hz", "shift_sigma_hz"])?;
        cols[0]
            .iter()
            .zip(cols[1].iter().zip(&cols[2]))
            .map(|(&n, (&s, &e))| ShiftPoint {
                photon_number: n,
                shift_hz: s,
                shift_sigma_hz: Some(e),
            })
            .collect()
    } else {
        let cols = read_columns(input, &["photon_number", "shift_hz"])?;
        cols[0]
            .iter()
            .zip(&cols[1])
            .map(|(&n, &s)| ShiftPoint {
                photon_number: n,
                shift_hz: s,
                shift_sigma_hz: None,
            })
            .collect()
    };
    let fit = extract_kerr(&points, cfg.attenuation_sigma_db, cfg.fit_intercept)?;

    // The fit reports the slope magnitude; recover its sign from the data
    // trend for the residual table.
    let n_mean = points.iter().map(|p| p.photon_number).sum::<f64>() / points.len() as f64;
    let s_mean = points.iter().map(|p| p.shift_hz).sum::<f64>() / points.len() as f64;
    let trend: f64 = points
        .iter()
        .map(|p| (p.photon_number - n_mean) * (p.shift_hz - s_mean))
        .sum();
    let slope = fit.kerr_hz * trend.signum();
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            let m = fit.intercept_hz + slope * p.photon_number;
            vec![p.photon_number, p.shift_hz, m, p.shift_hz - m]
        })
        .collect();
    run.write_csv(
        "fit_residuals.csv",
        &["photon_number", "shift_hz", "model_hz", "residual_hz"],
        &rows,
    )?;
    run.write_json("fit.json", &FitOutput { kind: "kerr", result: fit })
}
