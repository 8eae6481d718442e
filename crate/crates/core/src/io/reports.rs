use std::io::{BufRead, Write};

use serde_json::Value;

use crate::error::{Error, Result};
use crate::experiments::ExperimentReport;

/// One JSON line. Numbers use the shortest round-trip form; `timestamp`
/// (seconds since the epoch) is added only when given.
pub fn report_line(report: &ExperimentReport, timestamp: Option<u64>) -> Result<String> {
    let mut value = serde_json::to_value(report).map_err(|e| Error::Io(e.to_string()))?;
    if let (Some(t), Value::Object(map)) = (timestamp, &mut value) {
        map.insert("timestamp".into(), t.into());
    }
    serde_json::to_string(&value).map_err(|e| Error::Io(e.to_string()))
}

pub fn write_reports<W: Write>(mut out: W, reports: &[ExperimentReport], timestamp: Option<u64>) -> Result<()> {
    for r in reports {
        writeln!(out, "{}", report_line(r, timestamp)?)?;
    }
    out.flush()?;
    Ok(())
}

/// Parses JSON lines, skipping blank ones; extra fields are ignored.
pub fn read_reports<R: BufRead>(input: R) -> Result<Vec<ExperimentReport>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Io(format!("line {}: {e}", i + 1)))?);
    }
    Ok(out)
}
