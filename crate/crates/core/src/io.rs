//! CSV ingestion and emission.
//!
//! Dialect: comma-separated, '.' decimal point, mandatory header row.
//! Column lookup is by header name, so extra columns and reordering are
//! harmless. Floats are written with Rust's shortest round-trip formatting,
//! which keeps repeated runs byte-identical.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fitcal::{MeasurementTrace, TraceKind, TraceValues};

/// Reads the named columns from a CSV file, in the requested order.
pub fn read_columns(path: &Path, names: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let mut indices = Vec::with_capacity(names.len());
    for name in names {
        let idx = headers
            .iter()
            .position(|h| h.trim() == *name)
            .ok_or_else(|| {
                Error::input(format!(
                    "{}: missing column '{}' (found: {})",
                    path.display(),
                    name,
                    headers.iter().collect::<Vec<_>>().join(", ")
                ))
            })?;
        indices.push(idx);
    }
    let mut columns = vec![Vec::new(); names.len()];
    for (row_no, record) in reader.records().enumerate() {
        let record = record?;
        for (slot, &idx) in indices.iter().enumerate() {
            let cell = record.get(idx).unwrap_or("");
            let value: f64 = cell.trim().parse().map_err(|_| {
                Error::input(format!(
                    "{}: row {}: cannot parse '{}' in column '{}'",
                    path.display(),
                    row_no + 2,
                    cell,
                    names[slot]
                ))
            })?;
            columns[slot].push(value);
        }
    }
    Ok(columns)
}

/// Checks whether a CSV file has a column with the given header.
pub fn has_column(path: &Path, name: &str) -> Result<bool> {
    let mut reader = csv::Reader::from_path(path)?;
    Ok(reader.headers()?.iter().any(|h| h.trim() == name))
}

/// Reads a measurement trace. The axis column must be `frequency_hz` or
/// `time_s`; values are either complex (`re`, `im`) or real (`value`).
pub fn read_trace(path: &Path) -> Result<MeasurementTrace> {
    let (axis_name, kind) = if has_column(path, "frequency_hz")? {
        ("frequency_hz", TraceKind::FrequencySweep)
    } else if has_column(path, "time_s")? {
        ("time_s", TraceKind::TimeSeries)
    } else {
        return Err(Error::input(format!(
            "{}: expected a 'frequency_hz' or 'time_s' axis column",
            path.display()
        )));
    };
    let trace = if has_column(path, "re")? {
        let cols = read_columns(path, &[axis_name, "re", "im"])?;
        let values = cols[1]
            .iter()
            .zip(&cols[2])
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        MeasurementTrace {
            kind,
            axis: cols[0].clone(),
            values: TraceValues::Complex(values),
        }
    } else {
        let cols = read_columns(path, &[axis_name, "value"])?;
        MeasurementTrace {
            kind,
            axis: cols[0].clone(),
            values: TraceValues::Real(cols[1].clone()),
        }
    };
    trace.validate()?;
    Ok(trace)
}

/// Writes rows of floats under a header. Every row must match the header
/// width.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let file = File::create(path)?;
    let mut out = BufWriter::new(file);
    writeln!(out, "{}", header.join(","))?;
    for (i, row) in rows.iter().enumerate() {
        if row.len() != header.len() {
            return Err(Error::input(format!(
                "row {} has {} fields, header has {}",
                i,
                row.len(),
                header.len()
            )));
        }
        let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    out.flush()?;
    Ok(())
}

/// Writes a trace in the same layout [`read_trace`] ingests.
pub fn write_trace(path: &Path, trace: &MeasurementTrace) -> Result<()> {
    trace.validate()?;
    let axis_name = match trace.kind {
        TraceKind::FrequencySweep => "frequency_hz",
        TraceKind::TimeSeries => "time_s",
    };
    match &trace.values {
        TraceValues::Complex(values) => {
            let rows: Vec<Vec<f64>> = trace
                .axis
                .iter()
                .zip(values)
                .map(|(&a, v)| vec![a, v.re, v.im])
                .collect();
            write_csv(path, &[axis_name, "re", "im"], &rows)
        }
        TraceValues::Real(values) => {
            let rows: Vec<Vec<f64>> = trace
                .axis
                .iter()
                .zip(values)
                .map(|(&a, &v)| vec![a, v])
                .collect();
            write_csv(path, &[axis_name, "value"], &rows)
        }
    }
}
