//! File formats: pulse, trace and history CSVs, JSON documents and the
//! gate-error report.
//!
//! CSV values are written with 17 significant digits, so every file
//! re-parses to bit-identical numbers.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{FluxError, Result};
use crate::hamiltonian::PulseSequence;
use crate::krotov::IterationRecord;
use crate::propagation::{BasisState, PopulationTraces};

pub const PULSE_HEADER: [&str; 3] = ["t_ns", "fc1", "fc2"];
pub const TRACE_HEADER: [&str; 6] = ["t_ns", "P_gg", "P_ge", "P_eg", "P_ee", "P_leak"];
pub const HISTORY_HEADER: [&str; 3] = ["iteration", "eta", "J"];
pub const REPORT_HEADER: [&str; 5] = ["gate", "gate_time_ns", "eta", "eta_P", "eta_D"];

/// Relative tolerance on `t_j = j·dt` when reading a time grid back.
const GRID_TOLERANCE: f64 = 1e-9;

fn full(x: f64) -> String {
    format!("{x:.16e}")
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| FluxError::io(dir, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| FluxError::io(path, e))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    Ok(csv::Writer::from_writer(create(path)?))
}

fn csv_rows(path: &Path, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let file = File::open(path).map_err(|e| FluxError::io(path, e))?;
    let mut reader = csv::Reader::from_reader(BufReader::new(file));
    let found = reader.headers()?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(FluxError::param(
            "csv header",
            format!("{}: expected `{}`, found `{}`", path.display(), header.join(","), found.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    reader.records().map(|r| r.map_err(FluxError::from)).collect()
}

fn field(row: &csv::StringRecord, i: usize) -> Result<f64> {
    let raw = row.get(i).unwrap_or("");
    raw.trim()
        .parse()
        .map_err(|_| FluxError::param("csv value", format!("`{raw}` in column {i} is not a number")))
}

fn optional_field(row: &csv::StringRecord, i: usize) -> Result<Option<f64>> {
    match row.get(i).map(str::trim) {
        None | Some("") => Ok(None),
        Some(_) => field(row, i).map(Some),
    }
}

/// Check that `times[j] = j·dt` and return `dt` (from the second sample).
fn check_grid(times: &[f64]) -> Result<f64> {
    if times.len() < 2 {
        return Err(FluxError::TooFewSamples { min: 2, got: times.len() });
    }
    let dt = times[1] - times[0];
    if !(dt > 0.0) || times[0] != 0.0 {
        return Err(FluxError::GridMismatch(format!("grid must start at 0 and increase, got t0 = {}, t1 = {}", times[0], times[1])));
    }
    for (j, &t) in times.iter().enumerate() {
        let expected = j as f64 * dt;
        if (t - expected).abs() > GRID_TOLERANCE * expected.max(dt) {
            return Err(FluxError::GridMismatch(format!("sample {j} at t = {t} ns, expected {expected} ns")));
        }
    }
    Ok(dt)
}

pub fn write_pulses_csv(path: &Path, pulses: &PulseSequence) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(PULSE_HEADER)?;
    for j in 0..pulses.n_steps() {
        let [a, b] = pulses.sample(j);
        w.write_record([full(pulses.time(j)), full(a), full(b)])?;
    }
    w.flush().map_err(|e| FluxError::io(path, e))
}

/// Read a pulse CSV; `dt` is recovered from the time column.
pub fn read_pulses_csv(path: &Path) -> Result<PulseSequence> {
    let rows = csv_rows(path, &PULSE_HEADER)?;
    let mut times = Vec::with_capacity(rows.len());
    let (mut fc1, mut fc2) = (Vec::with_capacity(rows.len()), Vec::with_capacity(rows.len()));
    for row in &rows {
        times.push(field(row, 0)?);
        fc1.push(field(row, 1)?);
        fc2.push(field(row, 2)?);
    }
    let dt = check_grid(&times)?;
    PulseSequence::new(dt, fc1, fc2)
}

/// JSON form of a pulse sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseEnvelope {
    pub dt: f64,
    pub n_steps: usize,
    #[serde(default)]
    pub metadata: BTreeMap<String, serde_json::Value>,
    pub fc1: Vec<f64>,
    pub fc2: Vec<f64>,
}

impl PulseEnvelope {
    pub fn new(pulses: &PulseSequence, metadata: BTreeMap<String, serde_json::Value>) -> Self {
        Self {
            dt: pulses.dt,
            n_steps: pulses.n_steps(),
            metadata,
            fc1: pulses.channels[0].clone(),
            fc2: pulses.channels[1].clone(),
        }
    }

    pub fn pulses(&self) -> Result<PulseSequence> {
        if self.fc1.len() != self.n_steps {
            return Err(FluxError::GridMismatch(format!("n_steps = {} but {} samples", self.n_steps, self.fc1.len())));
        }
        PulseSequence::new(self.dt, self.fc1.clone(), self.fc2.clone())
    }
}

pub fn write_traces_csv(path: &Path, traces: &PopulationTraces) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(TRACE_HEADER)?;
    for (t, row) in traces.times.iter().zip(&traces.rows) {
        w.write_record(std::iter::once(*t).chain(row.iter().copied()).map(full))?;
    }
    w.flush().map_err(|e| FluxError::io(path, e))
}

/// Read a trace CSV. The file does not record the initial state.
pub fn read_traces_csv(path: &Path, initial: BasisState) -> Result<PopulationTraces> {
    let rows = csv_rows(path, &TRACE_HEADER)?;
    let mut traces = PopulationTraces {
        initial,
        times: Vec::with_capacity(rows.len()),
        rows: Vec::with_capacity(rows.len()),
    };
    for row in &rows {
        traces.times.push(field(row, 0)?);
        let mut p = [0.0; 5];
        for (k, v) in p.iter_mut().enumerate() {
            *v = field(row, k + 1)?;
        }
        traces.rows.push(p);
    }
    Ok(traces)
}

pub fn write_history_csv(path: &Path, history: &[IterationRecord]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(HISTORY_HEADER)?;
    for r in history {
        w.write_record([r.iteration.to_string(), full(r.eta), full(r.cost)])?;
    }
    w.flush().map_err(|e| FluxError::io(path, e))
}

pub fn read_history_csv(path: &Path) -> Result<Vec<IterationRecord>> {
    csv_rows(path, &HISTORY_HEADER)?
        .iter()
        .map(|row| {
            let raw = row.get(0).unwrap_or("");
            let iteration = raw
                .trim()
                .parse()
                .map_err(|_| FluxError::param("iteration", format!("`{raw}` is not an integer")))?;
            Ok(IterationRecord { iteration, eta: field(row, 1)?, cost: field(row, 2)? })
        })
        .collect()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| FluxError::io(path, e))
}

/// Parse a JSON document, reporting the offending field path on error.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| FluxError::Config {
        path: e.path().to_string(),
        message: e.into_inner().to_string(),
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| FluxError::io(path, e))?;
    parse_json(&text)
}

/// One row of the gate-error table. Missing metrics stay blank.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub gate: String,
    pub gate_time_ns: f64,
    pub eta: f64,
    #[serde(rename = "eta_P")]
    pub eta_p: Option<f64>,
    #[serde(rename = "eta_D")]
    pub eta_d: Option<f64>,
}

pub fn write_report_csv(path: &Path, rows: &[ReportRow]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(REPORT_HEADER)?;
    let opt = |x: Option<f64>| x.map(full).unwrap_or_default();
    for r in rows {
        w.write_record([r.gate.clone(), full(r.gate_time_ns), full(r.eta), opt(r.eta_p), opt(r.eta_d)])?;
    }
    w.flush().map_err(|e| FluxError::io(path, e))
}

pub fn read_report_csv(path: &Path) -> Result<Vec<ReportRow>> {
    csv_rows(path, &REPORT_HEADER)?
        .iter()
        .map(|row| {
            Ok(ReportRow {
                gate: row.get(0).unwrap_or("").to_string(),
                gate_time_ns: field(row, 1)?,
                eta: field(row, 2)?,
                eta_p: optional_field(row, 3)?,
                eta_d: optional_field(row, 4)?,
            })
        })
        .collect()
}
