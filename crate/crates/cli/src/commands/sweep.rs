//! `sweep`: evaluate a design over a cartesian grid of parameter axes.
//!
//! Geometry and participation axes hold the resonance at the base design's
//! value by re-solving the shunt capacitance; a frequency axis re-solves it
//! for the requested resonance instead; a capacitance axis sets it
//! directly and lets the resonance move. Rows appear in grid order (first
//! axis slowest) regardless of which worker finished first.

use anyhow::Result;
use nanokerr::config::{self, AnchorSpec, AxisSpec, SweepConfig, SweepParameter};
use nanokerr::material::wire_inductance;
use nanokerr::{derive_circuit, kerr_shift, scale_kerr_quadratic, Error, ResonatorDesign};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::run::{cell, Run};

#[derive(Serialize)]
struct SweepSummary<'a> {
    base_resonance_hz: f64,
    axes: &'a [AxisSpec],
    anchor: &'a Option<AnchorSpec>,
    rows: usize,
    rows_ok: usize,
}

struct Derived {
    resonance_hz: f64,
    kerr_hz: f64,
    participation: f64,
    zero_point_current_a: f64,
    scaling_current_a: f64,
    wire_volume_m3: f64,
}

pub fn run(run: &mut Run) -> Result<()> {
    let cfg: SweepConfig = config::load(run.config_path())?;
    validate_axes(&cfg.axis)?;
    let base = cfg.base_design()?;
    let base_f0 = derive_circuit(&base)?.resonance_hz;

    let axis_values: Vec<Vec<f64>> = cfg
        .axis
        .iter()
        .map(AxisSpec::values)
        .collect::<nanokerr::Result<_>>()?;
    let points = grid(&axis_values);

    let anchor_hz = cfg.anchor.as_ref().map(|a| {
        (
            a.measured_kerr_khz * 1e3,
            a.frequency_ghz.map_or(base_f0, |g| g * 1e9),
        )
    });

    let evaluate_point = |point: &Vec<f64>| -> Vec<String> {
        let mut row: Vec<String> = point.iter().map(|&v| cell(v)).collect();
        match evaluate(&base, base_f0, cfg.circuit.alpha_override, &cfg.axis, point) {
            Ok(d) => {
                let mut cells = vec![
                    d.resonance_hz,
                    d.kerr_hz,
                    d.participation,
                    d.zero_point_current_a,
                    d.scaling_current_a,
                    d.wire_volume_m3,
                ];
                if let Some((k_meas, f_anchor)) = anchor_hz {
                    cells.push(scale_kerr_quadratic(k_meas, f_anchor, d.resonance_hz));
                }
                let finite = cells.iter().all(|v| v.is_finite());
                row.extend(cells.iter().map(|&v| cell(v)));
                row.push(if finite { "ok".into() } else { "non-finite result".into() });
            }
            Err(err) => {
                let blank = 6 + usize::from(anchor_hz.is_some());
                row.extend(std::iter::repeat_with(|| "NaN".to_string()).take(blank));
                row.push(err.to_string());
            }
        }
        row
    };

    let rows: Vec<Vec<String>> = if run.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(run.workers)
            .build()?
            .install(|| points.par_iter().map(evaluate_point).collect())
    } else {
        points.par_iter().map(evaluate_point).collect()
    };

    let mut header: Vec<&str> = cfg.axis.iter().map(|a| a.parameter.column_name()).collect();
    header.extend([
        "resonance_hz",
        "kerr_hz",
        "participation",
        "zero_point_current_a",
        "scaling_current_a",
        "wire_volume_m3",
    ]);
    if anchor_hz.is_some() {
        header.push("kerr_anchored_hz");
    }
    header.push("status");

    let rows_ok = rows.iter().filter(|r| r.last().map(String::as_str) == Some("ok")).count();
    run.write_table("sweep.csv", &header, &rows)?;
    run.write_json(
        "sweep.json",
        &SweepSummary {
            base_resonance_hz: base_f0,
            axes: &cfg.axis,
            anchor: &cfg.anchor,
            rows: rows.len(),
            rows_ok,
        },
    )
}

fn validate_axes(axes: &[AxisSpec]) -> nanokerr::Result<()> {
    if axes.is_empty() {
        return Err(Error::input("sweep needs at least one [[axis]]"));
    }
    for (i, a) in axes.iter().enumerate() {
        if axes[..i].iter().any(|b| b.parameter == a.parameter) {
            return Err(Error::input(format!(
                "axis parameter {} appears twice",
                a.parameter.column_name()
            )));
        }
    }
    let has = |p| axes.iter().any(|a| a.parameter == p);
    if has(SweepParameter::FrequencyGhz) && has(SweepParameter::CapacitanceFf) {
        return Err(Error::input(
            "frequency_ghz and capacitance_ff axes are mutually exclusive: \
             the shunt capacitance cannot satisfy both",
        ));
    }
    Ok(())
}

/// Cartesian product of the axis value lists, first axis slowest.
fn grid(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut points: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in axes {
        let mut next = Vec::with_capacity(points.len() * axis.len());
        for p in &points {
            for &v in axis {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        points = next;
    }
    points
}

fn evaluate(
    base: &ResonatorDesign,
    base_f0: f64,
    alpha_override: Option<f64>,
    axes: &[AxisSpec],
    point: &[f64],
) -> nanokerr::Result<Derived> {
    let mut design = base.clone();
    let mut cap_ff = None;
    let mut freq_ghz = None;
    let mut alpha_axis = None;
    for (spec, &v) in axes.iter().zip(point) {
        match spec.parameter {
            SweepParameter::WidthNm => design.wire.width_m = v * 1e-9,
            SweepParameter::LengthNm => design.wire.length_m = v * 1e-9,
            SweepParameter::CapacitanceFf => cap_ff = Some(v),
            SweepParameter::FrequencyGhz => freq_ghz = Some(v),
            SweepParameter::Alpha => alpha_axis = Some(v),
        }
    }

    let lw = wire_inductance(&design.material, &design.wire)?.inductance_h;
    if let Some(alpha) = alpha_axis {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::input("alpha axis values must lie in (0, 1]"));
        }
        design.pad_inductance_h = lw * (1.0 / alpha - 1.0);
    }
    let l_total = lw + design.pad_inductance_h;
    design.shunt_capacitance_f = match (cap_ff, freq_ghz) {
        (Some(ff), _) => ff * 1e-15,
        (None, Some(ghz)) => 1.0 / ((TAU * ghz * 1e9).powi(2) * l_total),
        (None, None) => 1.0 / ((TAU * base_f0).powi(2) * l_total),
    };

    let circuit = derive_circuit(&design)?;
    // An explicit participation axis already dilutes the circuit; the
    // config-level override only applies when no axis controls alpha.
    let kerr_hz = match (alpha_axis, alpha_override) {
        (None, Some(alpha)) => kerr_shift(
            circuit.resonance_hz,
            alpha,
            circuit.zero_point_current_a,
            circuit.scaling_current_a,
        ),
        _ => circuit.kerr_hz,
    };
    Ok(Derived {
        resonance_hz: circuit.resonance_hz,
        kerr_hz,
        participation: circuit.participation,
        zero_point_current_a: circuit.zero_point_current_a,
        scaling_current_a: circuit.scaling_current_a,
        wire_volume_m3: design.wire.volume_m3(),
    })
}
