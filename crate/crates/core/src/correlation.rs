//! Correlation between question-similarity scores and answer-quality
//! scores, after discarding questions whose human rewrite fails.

use crate::breakdown::CorrectnessRule;
use crate::error::{Error, Result};

/// Raw material for one correlation point: the human-variant metric value
/// used by the filter rule, plus the (QR similarity, QA quality) pair.
#[derive(Debug, Clone)]
pub struct CorrelationInput {
    pub qid: String,
    pub human_metric_value: f64,
    pub qr_value: f64,
    pub qa_value: f64,
}

/// One retained scatter point.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSample {
    pub qid: String,
    pub qr_value: f64,
    pub qa_value: f64,
}

/// Correlation result with the full point series for plotting.
#[derive(Debug, Clone)]
pub struct CorrelationReport {
    pub n: usize,
    pub pearson_r: f64,
    pub qr_metric: String,
    pub qa_metric: String,
    pub series: Vec<CorrelationSample>,
}

/// Keep only inputs whose human-variant value satisfies `rule`.
pub fn filter_human_correct(
    inputs: &[CorrelationInput],
    rule: &CorrectnessRule,
) -> Vec<CorrelationInput> {
    inputs
        .iter()
        .filter(|input| rule.satisfied(input.human_metric_value))
        .cloned()
        .collect()
}

/// Product-moment correlation coefficient, computed in two passes (means
/// first, then centered products). A constant sequence is an error, not 0.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "pearson: length mismatch ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::UndefinedCorrelation(format!(
            "need at least 2 samples, got {}",
            x.len()
        )));
    }
    let constant = |s: &[f64]| s.iter().all(|v| *v == s[0]);
    if constant(x) {
        return Err(Error::UndefinedCorrelation(
            "constant series: x".to_string(),
        ));
    }
    if constant(y) {
        return Err(Error::UndefinedCorrelation(
            "constant series: y".to_string(),
        ));
    }
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        let dx = a - mean_x;
        let dy = b - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation(
            "constant series after centering".to_string(),
        ));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Filter by human correctness (when a rule is given), order points by qid,
/// and compute the Pearson coefficient over the retained pairs.
pub fn correlate(
    inputs: &[CorrelationInput],
    filter: Option<&CorrectnessRule>,
    qr_metric: &str,
    qa_metric: &str,
) -> Result<CorrelationReport> {
    let kept = match filter {
        Some(rule) => filter_human_correct(inputs, rule),
        None => inputs.to_vec(),
    };
    let mut series: Vec<CorrelationSample> = kept
        .into_iter()
        .map(|input| CorrelationSample {
            qid: input.qid,
            qr_value: input.qr_value,
            qa_value: input.qa_value,
        })
        .collect();
    series.sort_by(|a, b| a.qid.cmp(&b.qid));
    for point in &series {
        for (name, value) in [("qr", point.qr_value), ("qa", point.qa_value)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidInput(format!(
                    "question '{}': {name} value {value} is outside [0, 1]",
                    point.qid
                )));
            }
        }
    }
    if series.len() < 2 {
        return Err(Error::UndefinedCorrelation(format!(
            "{} samples remain after filtering; need at least 2",
            series.len()
        )));
    }
    let x: Vec<f64> = series.iter().map(|s| s.qr_value).collect();
    let y: Vec<f64> = series.iter().map(|s| s.qa_value).collect();
    let pearson_r = pearson(&x, &y)?;
    Ok(CorrelationReport {
        n: series.len(),
        pearson_r,
        qr_metric: qr_metric.to_string(),
        qa_metric: qa_metric.to_string(),
        series,
    })
}
