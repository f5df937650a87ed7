//! Deterministic CSV and JSON writers for the toolkit's artifacts, plus the
//! matching readers (every artifact re-parses with the toolkit itself).
//!
//! CSV values print with 6 decimal places and LF line endings; JSON keeps
//! full float precision.

use std::io::{Read, Write};

use serde_json::json;

use crate::breakdown::{SweepRow, SweepSeries};
use crate::correlation::CorrelationReport;
use crate::error::{Error, Result};
use crate::metrics::MetricValue;
use crate::model::MetricId;

fn csv_error(artifact: &str, e: impl ToString) -> Error {
    Error::data(artifact, e.to_string())
}

/// Fixed-width float formatting used in every CSV artifact.
pub fn format_value(value: f64) -> String {
    format!("{value:.6}")
}

fn parse_field<T: std::str::FromStr>(artifact: &str, line: usize, field: &str) -> Result<T> {
    field
        .parse()
        .map_err(|_| Error::data(format!("{artifact}:{line}"), format!("bad field '{field}'")))
}

/// Write the per-sample metric table: `qid,variant,metric,value`.
pub fn write_metrics_csv<W: Write>(writer: W, rows: &[MetricValue]) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(["qid", "variant", "metric", "value"])
        .map_err(|e| csv_error("metrics.csv", e))?;
    for row in rows {
        out.write_record([
            row.qid.as_str(),
            row.variant.as_str(),
            &row.metric.to_string(),
            &format_value(row.value),
        ])
        .map_err(|e| csv_error("metrics.csv", e))?;
    }
    out.flush().map_err(|e| csv_error("metrics.csv", e))
}

pub fn read_metrics_csv<R: Read>(reader: R) -> Result<Vec<MetricValue>> {
    let mut input = csv::Reader::from_reader(reader);
    let mut rows = Vec::new();
    for (idx, record) in input.records().enumerate() {
        let record = record.map_err(|e| csv_error("metrics.csv", e))?;
        if record.len() != 4 {
            return Err(Error::data(
                format!("metrics.csv:{}", idx + 2),
                format!("expected 4 fields, found {}", record.len()),
            ));
        }
        rows.push(MetricValue {
            qid: record[0].to_string(),
            variant: parse_field("metrics.csv", idx + 2, &record[1])?,
            metric: parse_field::<MetricId>("metrics.csv", idx + 2, &record[2])?,
            value: parse_field("metrics.csv", idx + 2, &record[3])?,
        });
    }
    Ok(rows)
}

const SWEEP_HEADER: [&str; 5] = [
    "threshold",
    "qa_error",
    "qr_error",
    "correct_with_rewriting",
    "correct_without_rewriting",
];

/// Write the threshold sweep, one row per grid point.
pub fn write_sweep_csv<W: Write>(writer: W, series: &SweepSeries) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(SWEEP_HEADER)
        .map_err(|e| csv_error("sweep.csv", e))?;
    for row in &series.rows {
        out.write_record([
            format_value(row.threshold),
            format_value(row.qa_error),
            format_value(row.qr_error),
            format_value(row.correct_with_rewriting),
            format_value(row.correct_without_rewriting),
        ])
        .map_err(|e| csv_error("sweep.csv", e))?;
    }
    out.flush().map_err(|e| csv_error("sweep.csv", e))
}

pub fn read_sweep_csv<R: Read>(reader: R) -> Result<Vec<SweepRow>> {
    let mut input = csv::Reader::from_reader(reader);
    let mut rows = Vec::new();
    for (idx, record) in input.records().enumerate() {
        let record = record.map_err(|e| csv_error("sweep.csv", e))?;
        if record.len() != 5 {
            return Err(Error::data(
                format!("sweep.csv:{}", idx + 2),
                format!("expected 5 fields, found {}", record.len()),
            ));
        }
        rows.push(SweepRow {
            threshold: parse_field("sweep.csv", idx + 2, &record[0])?,
            qa_error: parse_field("sweep.csv", idx + 2, &record[1])?,
            qr_error: parse_field("sweep.csv", idx + 2, &record[2])?,
            correct_with_rewriting: parse_field("sweep.csv", idx + 2, &record[3])?,
            correct_without_rewriting: parse_field("sweep.csv", idx + 2, &record[4])?,
        });
    }
    Ok(rows)
}

/// One scatter point as exported/reimported.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterRow {
    pub qid: String,
    pub qr_metric: String,
    pub qr_value: f64,
    pub qa_metric: String,
    pub qa_value: f64,
}

/// Write the correlation scatter: `qid,qr_metric,qr_value,qa_metric,qa_value`.
pub fn write_scatter_csv<W: Write>(writer: W, report: &CorrelationReport) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(["qid", "qr_metric", "qr_value", "qa_metric", "qa_value"])
        .map_err(|e| csv_error("scatter.csv", e))?;
    for point in &report.series {
        out.write_record([
            point.qid.as_str(),
            &report.qr_metric,
            &format_value(point.qr_value),
            &report.qa_metric,
            &format_value(point.qa_value),
        ])
        .map_err(|e| csv_error("scatter.csv", e))?;
    }
    out.flush().map_err(|e| csv_error("scatter.csv", e))
}

pub fn read_scatter_csv<R: Read>(reader: R) -> Result<Vec<ScatterRow>> {
    let mut input = csv::Reader::from_reader(reader);
    let mut rows = Vec::new();
    for (idx, record) in input.records().enumerate() {
        let record = record.map_err(|e| csv_error("scatter.csv", e))?;
        if record.len() != 5 {
            return Err(Error::data(
                format!("scatter.csv:{}", idx + 2),
                format!("expected 5 fields, found {}", record.len()),
            ));
        }
        rows.push(ScatterRow {
            qid: record[0].to_string(),
            qr_metric: record[1].to_string(),
            qr_value: parse_field("scatter.csv", idx + 2, &record[2])?,
            qa_metric: record[3].to_string(),
            qa_value: parse_field("scatter.csv", idx + 2, &record[4])?,
        });
    }
    Ok(rows)
}

/// Correlation report JSON: `{n, pearson_r, qr_metric, qa_metric}`.
pub fn correlation_report_json(report: &CorrelationReport) -> serde_json::Value {
    json!({
        "n": report.n,
        "pearson_r": report.pearson_r,
        "qr_metric": report.qr_metric,
        "qa_metric": report.qa_metric,
    })
}
