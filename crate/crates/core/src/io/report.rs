use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::BenchmarkReport;

pub const REPORT_CSV_HEADER: &str =
    "nonlinearity,c_ave,t_ave_seconds,mean_iterations,convergence_rate";

pub fn format_report_csv(report: &BenchmarkReport) -> String {
    let mut out = String::from(REPORT_CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.nonlinearity, r.c_ave, r.t_ave_seconds, r.mean_iterations, r.convergence_rate
        );
    }
    out
}

pub fn write_report_csv(path: impl AsRef<Path>, report: &BenchmarkReport) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_report_csv(report)).map_err(|e| Error::io(path, e))
}

pub fn write_report_json(path: impl AsRef<Path>, report: &BenchmarkReport) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(report)?;
    std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

pub fn read_report_json(path: impl AsRef<Path>) -> Result<BenchmarkReport> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Picks CSV or JSON from the file extension.
pub fn write_report(path: impl AsRef<Path>, report: &BenchmarkReport) -> Result<()> {
    let path = path.as_ref();
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => write_report_csv(path, report),
        Some("json") => write_report_json(path, report),
        _ => Err(Error::argument(format!(
            "report path {} must end in .csv or .json",
            path.display()
        ))),
    }
}
