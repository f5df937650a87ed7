//! Answer-quality metrics: graded NDCG@k, P@1 under a binarization grade,
//! answer-set recall between two runs, and SQuAD-style span F1.

use crate::error::{Error, Result};
use crate::model::{JudgmentSet, MetricId, RankedRun, Variant};
use crate::similarity::{token_counts, tokenize, TokenizationPolicy};

/// Cutoffs and grades applied across an evaluation.
#[derive(Debug, Clone, Copy)]
pub struct CutoffConfig {
    pub ndcg_k: usize,
    pub recall_k: usize,
    /// Minimum grade for a document to count as relevant in binary metrics.
    pub binarization_grade: u32,
}

impl Default for CutoffConfig {
    fn default() -> Self {
        CutoffConfig {
            ndcg_k: 3,
            recall_k: 1000,
            binarization_grade: 2,
        }
    }
}

impl CutoffConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ndcg_k == 0 || self.recall_k == 0 {
            return Err(Error::InvalidInput("cutoffs must be >= 1".to_string()));
        }
        Ok(())
    }
}

/// One metric value for one (question, variant) pair; always in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct MetricValue {
    pub qid: String,
    pub variant: Variant,
    pub metric: MetricId,
    pub value: f64,
}

fn discount(position: usize) -> f64 {
    // position is 1-based
    ((position + 1) as f64).log2()
}

/// NDCG@k with linear graded gains and log2(rank + 1) discounts.
///
/// The ideal DCG ranks the judged documents of the question by grade
/// descending; unjudged documents contribute no ideal gain. A question
/// without any positive-grade judged document scores 0.
pub fn ndcg_at_k(run: &RankedRun, judgments: &JudgmentSet, k: usize) -> f64 {
    let dcg: f64 = run
        .entries
        .iter()
        .take(k)
        .enumerate()
        .map(|(i, e)| judgments.grade(&run.qid, &e.docid) as f64 / discount(i + 1))
        .sum();
    let mut ideal: Vec<u32> = judgments
        .judged(&run.qid)
        .map(|m| m.values().copied().collect())
        .unwrap_or_default();
    ideal.sort_unstable_by(|a, b| b.cmp(a));
    let idcg: f64 = ideal
        .iter()
        .take(k)
        .enumerate()
        .map(|(i, &g)| g as f64 / discount(i + 1))
        .sum();
    if idcg > 0.0 {
        dcg / idcg
    } else {
        0.0
    }
}

/// 1.0 if the top-ranked document's grade is at least `grade`, else 0.0.
/// Unjudged top documents score 0.
pub fn precision_at_1(run: &RankedRun, judgments: &JudgmentSet, grade: u32) -> f64 {
    match run.entries.first() {
        Some(top) if judgments.grade(&run.qid, &top.docid) >= grade => 1.0,
        _ => 0.0,
    }
}

/// Fraction of the reference run's top-k docids that also appear in the
/// candidate run's top-k.
pub fn answer_set_recall(reference: &RankedRun, candidate: &RankedRun, k: usize) -> Result<f64> {
    let reference_set = reference.top_k_docids(k);
    if reference_set.is_empty() {
        return Err(Error::UndefinedMetric(format!(
            "recall@{k}: reference run for question '{}' is empty",
            reference.qid
        )));
    }
    let candidate_set = candidate.top_k_docids(k);
    Ok(reference_set.intersection(&candidate_set).count() as f64 / reference_set.len() as f64)
}

fn f1_single(prediction: &[String], gold: &[String]) -> f64 {
    if prediction.is_empty() && gold.is_empty() {
        return 1.0;
    }
    if prediction.is_empty() || gold.is_empty() {
        return 0.0;
    }
    let pred_counts = token_counts(prediction);
    let overlap: usize = token_counts(gold)
        .iter()
        .map(|(token, &count)| count.min(pred_counts.get(token).copied().unwrap_or(0)))
        .sum();
    if overlap == 0 {
        return 0.0;
    }
    let precision = overlap as f64 / prediction.len() as f64;
    let recall = overlap as f64 / gold.len() as f64;
    2.0 * precision * recall / (precision + recall)
}

/// Token-overlap F1 of the predicted span against each gold answer
/// (multiset overlap), returning the maximum over golds.
pub fn span_f1(prediction: &str, golds: &[String], policy: &TokenizationPolicy) -> Result<f64> {
    if golds.is_empty() {
        return Err(Error::InvalidInput(
            "span_f1 requires at least one gold answer".to_string(),
        ));
    }
    let pred_tokens = tokenize(prediction, policy);
    Ok(golds
        .iter()
        .map(|g| f1_single(&pred_tokens, &tokenize(g, policy)))
        .fold(0.0, f64::max))
}
