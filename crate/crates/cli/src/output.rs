//! File writers for the CSV and JSON artifacts.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use frenet_ife::analysis::{LevelResult, StudyReport};
use frenet_ife::Error;
use serde::Serialize;

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Error> {
    let f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(f, value).map_err(|e| Error::Io(e.to_string()))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>, Error> {
    csv::Writer::from_path(path).map_err(|e| Error::Io(e.to_string()))
}

fn io<E: std::fmt::Display>(e: E) -> Error {
    Error::Io(e.to_string())
}

pub const ERRORS_HEADER: [&str; 6] = ["n", "h", "dofs", "l2", "norm_h", "energy"];

pub fn write_errors(path: &Path, rows: &[LevelResult]) -> Result<(), Error> {
    let mut w = csv_writer(path)?;
    w.write_record(ERRORS_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.h.to_string(),
            r.dofs.to_string(),
            r.errors.l2.to_string(),
            r.errors.norm_h.to_string(),
            r.errors.energy.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(io)
}

pub const STUDY_HEADER: [&str; 12] = [
    "n",
    "h",
    "dofs",
    "interface_elements",
    "l2",
    "h1",
    "norm_h",
    "energy",
    "rate_l2",
    "rate_h1",
    "rate_norm_h",
    "rate_energy",
];

/// One row per level; rate columns are empty on the first row.
pub fn write_study(path: &Path, report: &StudyReport) -> Result<(), Error> {
    let mut w = csv_writer(path)?;
    w.write_record(STUDY_HEADER).map_err(io)?;
    for (k, r) in report.levels.iter().enumerate() {
        let rates = match k.checked_sub(1).map(|i| report.rates[i]) {
            Some(q) => [q.l2, q.h1, q.norm_h, q.energy].map(|v| v.to_string()),
            None => Default::default(),
        };
        let mut rec = vec![
            r.n.to_string(),
            r.h.to_string(),
            r.dofs.to_string(),
            r.interface_elements.to_string(),
            r.errors.l2.to_string(),
            r.errors.h1.to_string(),
            r.errors.norm_h.to_string(),
            r.errors.energy.to_string(),
        ];
        rec.extend(rates);
        w.write_record(&rec).map_err(io)?;
    }
    w.flush().map_err(io)
}

pub const SOLUTION_HEADER: [&str; 6] = ["element", "x", "y", "side", "value", "exact"];

pub struct SolutionSample {
    pub element: usize,
    pub x: f64,
    pub y: f64,
    pub side: &'static str,
    pub value: f64,
    pub exact: f64,
}

/// Discrete and exact solution at sample points inside every element.
pub fn write_solution(path: &Path, rows: &[SolutionSample]) -> Result<(), Error> {
    let mut w = csv_writer(path)?;
    w.write_record(SOLUTION_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.element.to_string(),
            r.x.to_string(),
            r.y.to_string(),
            r.side.to_string(),
            r.value.to_string(),
            r.exact.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(io)
}
