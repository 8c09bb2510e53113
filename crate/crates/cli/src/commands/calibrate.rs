//! `calibrate`: output-chain gain and amplifier noise temperature from
//! stage-temperature noise sweeps, plus the attenuation bookkeeping row.

use anyhow::Result;
use nanokerr::config::{self, exactly_one_source, CalibrateConfig};
use nanokerr::synth::noise_power_points;
use nanokerr::{calibrate_output_gain, CalibrationRow, GainCalibration, NoisePowerPoint};
use serde::Serialize;

use crate::run::Run;

#[derive(Serialize)]
struct AttenuationRow {
    frequency_hz: f64,
    s_io_db: f64,
    gain_db: f64,
    gain_sigma_db: f64,
    attenuation_db: f64,
    /// Attenuation quoted to one decimal, the way calibration tables list
    /// it.
    quoted_attenuation_db: String,
    /// Whether the quoted values close the dB identity exactly.
    identity_holds: bool,
}

#[derive(Serialize)]
struct CalibrateOutput {
    frequency_hz: f64,
    bandwidth_hz: f64,
    calibration: GainCalibration,
    attenuation: Option<AttenuationRow>,
}

pub fn run(run: &mut Run) -> Result<()> {
    let cfg: CalibrateConfig = config::load(run.config_path())?;
    exactly_one_source(&cfg.input_csv, &cfg.synth, "calibrate")?;
    let frequency_hz = cfg.frequency_ghz * 1e9;
    let bandwidth_hz = cfg.bandwidth_mhz * 1e6;

    let points: Vec<NoisePowerPoint> = if let Some(path) = &cfg.input_csv {
        let cols =
            nanokerr::io::read_columns(&run.resolve_input(path), &["temperature_k", "power_w"])?;
        cols[0]
            .iter()
            .zip(&cols[1])
            .map(|(&t, &p)| NoisePowerPoint {
                stage_temperature_k: t,
                output_power_w: p,
            })
            .collect()
    } else {
        let synth = cfg.synth.as_ref().unwrap();
        let points = noise_power_points(
            synth.gain_db,
            synth.hemt_temperature_k,
            &synth.temperatures_k,
            bandwidth_hz,
            frequency_hz,
            synth.noise_frac,
            synth.seed,
        );
        let rows: Vec<Vec<f64>> = points
            .iter()
            .map(|p| vec![p.stage_temperature_k, p.output_power_w])
            .collect();
        run.write_csv("calibrate_data.csv", &["temperature_k", "power_w"], &rows)?;
        points
    };

    let calibration = calibrate_output_gain(&points, bandwidth_hz, frequency_hz, cfg.eta_override)?;

    let attenuation = cfg.s_io_db.map(|s_io| {
        let row = CalibrationRow::from_measurement(
            frequency_hz,
            s_io,
            calibration.gain_db,
            calibration.gain_sigma_db,
        );
        AttenuationRow {
            frequency_hz: row.frequency_hz,
            s_io_db: row.s_io_db,
            gain_db: row.gain_db,
            gain_sigma_db: row.gain_sigma_db,
            attenuation_db: row.attenuation_db,
            quoted_attenuation_db: row.quoted_attenuation_db(),
            identity_holds: row.identity_holds(),
        }
    });

    run.write_json(
        "calibrate.json",
        &CalibrateOutput {
            frequency_hz,
            bandwidth_hz,
            calibration,
            attenuation,
        },
    )
}
