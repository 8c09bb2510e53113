//! `duffing`: steady-state response traces of a driven Kerr cavity.

use anyhow::Result;
use nanokerr::config::{self, DuffingConfig};
use nanokerr::{bifurcation_threshold, steady_state, DriveConfig, KerrCavity};
use serde::Serialize;

use crate::run::{cell, Run};

#[derive(Serialize)]
struct PowerSummary {
    power_dbm: f64,
    power_w: f64,
    bistable_points: usize,
    max_photon_number: f64,
}

#[derive(Serialize)]
struct DuffingSummary {
    cavity: KerrCavity,
    /// Photon number at the bifurcation threshold.
    critical_photon_number: f64,
    /// Detuning where bistability first opens, Hz (negative for a
    /// softening nonlinearity).
    onset_detuning_hz: f64,
    powers: Vec<PowerSummary>,
}

pub fn run(run: &mut Run) -> Result<()> {
    let cfg: DuffingConfig = config::load(run.config_path())?;
    let cavity = cfg.cavity.to_cavity()?;
    let freqs = cfg.frequencies_hz()?;
    let powers_w = cfg.powers_w()?;
    let kappa = cavity.total_linewidth_hz();

    let header = [
        "power_dbm",
        "frequency_hz",
        "root_count",
        "bistable",
        "photon_number_low",
        "s11_re_low",
        "s11_im_low",
        "photon_number_high",
        "s11_re_high",
        "s11_im_high",
        "status",
    ];
    let mut rows: Vec<Vec<String>> = Vec::with_capacity(freqs.len() * powers_w.len());
    let mut powers = Vec::with_capacity(powers_w.len());

    for (&dbm, &watt) in cfg.drive.powers_dbm.iter().zip(&powers_w) {
        let mut bistable_points = 0;
        let mut max_n: f64 = 0.0;
        for &f in &freqs {
            let drive = DriveConfig {
                drive_frequency_hz: f,
                drive_power_w: watt,
                probe_power_w: 0.0,
            };
            let mut row = vec![cell(dbm), cell(f)];
            match steady_state(&cavity, &drive) {
                Ok(state) => {
                    let low = state.lower_branch();
                    let high = state.roots.last().filter(|_| state.roots.len() > 1);
                    if state.is_bistable() {
                        bistable_points += 1;
                    }
                    max_n = max_n.max(state.roots.iter().fold(0.0, |m, r| m.max(r.photon_number)));
                    row.extend([
                        cell(state.roots.len() as f64),
                        cell(f64::from(u8::from(state.is_bistable()))),
                        cell(low.photon_number),
                        cell(low.s11.re),
                        cell(low.s11.im),
                        cell(high.map_or(f64::NAN, |r| r.photon_number)),
                        cell(high.map_or(f64::NAN, |r| r.s11.re)),
                        cell(high.map_or(f64::NAN, |r| r.s11.im)),
                    ]);
                    row.push("ok".into());
                }
                Err(err) => {
                    row.extend(std::iter::repeat_with(|| "NaN".to_string()).take(8));
                    row.push(err.to_string());
                }
            }
            rows.push(row);
        }
        powers.push(PowerSummary {
            power_dbm: dbm,
            power_w: watt,
            bistable_points,
            max_photon_number: max_n,
        });
    }

    run.write_table("duffing_traces.csv", &header, &rows)?;
    run.write_json(
        "duffing.json",
        &DuffingSummary {
            critical_photon_number: bifurcation_threshold(cavity.kerr_hz, kappa),
            onset_detuning_hz: -3f64.sqrt() / 2.0 * kappa,
            cavity,
            powers,
        },
    )
}
