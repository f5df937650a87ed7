//! End-to-end assembly: validated corpora for the two tasks, per-question
//! metric values, and correlation inputs.
//!
//! Metric computation is pure per question; results are assembled into
//! qid-ordered structures so downstream artifacts are deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::breakdown::{BreakdownSample, CorrectnessRule};
use crate::correlation::CorrelationInput;
use crate::error::{Error, Result};
use crate::ingest::{validate_corpus, Coverage, ValidationMode, ValidationReport};
use crate::metrics::{
    answer_set_recall, ndcg_at_k, precision_at_1, span_f1, CutoffConfig, MetricValue,
};
use crate::model::{
    EmbeddingStore, GoldAnswerSet, JudgmentSet, MetricId, QuestionTriple, RankedRun,
    SpanPredictionSet, Variant, VariantMap,
};
use crate::similarity::{
    cosine_score, jaccard_tokens, rouge1_recall, SimilarityMetric, TokenizationPolicy,
};

/// Answer-quality pairing for correlation analyses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QaMetric {
    /// P@1 of the model-rewrite run.
    PrecisionAt1,
    /// NDCG@k of the model-rewrite run.
    Ndcg { k: usize },
    /// Overlap of the model-rewrite run's top-k with the human-rewrite
    /// run's top-k (recall against the human answer set).
    RecallOverlap { k: usize },
    /// Span F1 of the model-rewrite prediction against the gold answers.
    SpanF1,
    /// Token Jaccard between the model-rewrite and human-rewrite predictions.
    SpanJaccard,
}

impl fmt::Display for QaMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QaMetric::PrecisionAt1 => write!(f, "p@1"),
            QaMetric::Ndcg { k } => write!(f, "ndcg@{k}"),
            QaMetric::RecallOverlap { k } => write!(f, "recall@{k}"),
            QaMetric::SpanF1 => write!(f, "span_f1"),
            QaMetric::SpanJaccard => write!(f, "span_jaccard"),
        }
    }
}

impl FromStr for QaMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "span_jaccard" {
            return Ok(QaMetric::SpanJaccard);
        }
        match s.parse::<MetricId>()? {
            MetricId::PrecisionAt1 => Ok(QaMetric::PrecisionAt1),
            MetricId::Ndcg { k } => Ok(QaMetric::Ndcg { k }),
            MetricId::RecallAt { k } => Ok(QaMetric::RecallOverlap { k }),
            MetricId::SpanF1 => Ok(QaMetric::SpanF1),
        }
    }
}

/// What to pair in a correlation analysis: the human-correctness filter
/// metric (None keeps every question) and the QR/QA metric pair.
#[derive(Debug, Clone, Copy)]
pub struct CorrelationSpec {
    pub filter_metric: Option<MetricId>,
    pub qr: SimilarityMetric,
    pub qa: QaMetric,
}

/// A validated passage-retrieval corpus: triples, one run per variant, and
/// graded judgments.
#[derive(Debug)]
pub struct RetrievalCorpus {
    pub triples: Vec<QuestionTriple>,
    pub runs: VariantMap<BTreeMap<String, RankedRun>>,
    pub judgments: JudgmentSet,
}

impl RetrievalCorpus {
    /// Cross-check run coverage (required) and judgment coverage (advisory).
    pub fn validate(&self, mode: ValidationMode) -> Result<ValidationReport> {
        let required: Vec<Coverage> = Variant::ALL
            .iter()
            .map(|&v| {
                Coverage::new(
                    format!("run({v})"),
                    self.runs.get(v).keys().cloned().collect(),
                )
            })
            .collect();
        let judged: BTreeSet<String> = self.judgments.qids().cloned().collect();
        let advisory = [Coverage::new("the judgment file", judged)];
        validate_corpus(&self.triples, &required, &advisory, mode)
    }

    /// Triples retained by a validation report, in input order.
    pub fn retained_triples(&self, report: &ValidationReport) -> Vec<&QuestionTriple> {
        self.triples
            .iter()
            .filter(|t| report.retained.contains(&t.qid))
            .collect()
    }

    fn run(&self, qid: &str, variant: Variant) -> Result<&RankedRun> {
        self.runs.get(variant).get(qid).ok_or_else(|| {
            Error::data(
                format!("question '{qid}'"),
                format!("no run entries for variant '{variant}'"),
            )
        })
    }

    /// Per-question values of the requested metrics for all three variants.
    pub fn samples(
        &self,
        retained: &[&QuestionTriple],
        metrics: &[MetricId],
        cfg: &CutoffConfig,
    ) -> Result<Vec<BreakdownSample>> {
        cfg.validate()?;
        retained
            .iter()
            .map(|triple| {
                let mut values = BTreeMap::new();
                for &metric in metrics {
                    let map = VariantMap::try_from_fn(|v| {
                        let run = self.run(&triple.qid, v)?;
                        match metric {
                            MetricId::Ndcg { k } => Ok(ndcg_at_k(run, &self.judgments, k)),
                            MetricId::PrecisionAt1 => {
                                Ok(precision_at_1(run, &self.judgments, cfg.binarization_grade))
                            }
                            MetricId::RecallAt { .. } | MetricId::SpanF1 => {
                                Err(Error::InvalidInput(format!(
                                    "metric '{metric}' is not a per-variant retrieval metric"
                                )))
                            }
                        }
                    })?;
                    values.insert(metric, map);
                }
                Ok(BreakdownSample::from_triple(triple, values))
            })
            .collect()
    }

    /// Correlation points: QR similarity of (model rewrite, human rewrite)
    /// against a QA metric, plus the human-variant value for the filter rule.
    pub fn correlation_inputs(
        &self,
        retained: &[&QuestionTriple],
        spec: &CorrelationSpec,
        cfg: &CutoffConfig,
        policy: &TokenizationPolicy,
        embeddings: Option<&EmbeddingStore>,
    ) -> Result<Vec<CorrelationInput>> {
        cfg.validate()?;
        retained
            .iter()
            .map(|triple| {
                let qid = &triple.qid;
                let human_metric_value = match spec.filter_metric {
                    Some(MetricId::PrecisionAt1) => precision_at_1(
                        self.run(qid, Variant::HumanRewrite)?,
                        &self.judgments,
                        cfg.binarization_grade,
                    ),
                    Some(MetricId::Ndcg { k }) => {
                        ndcg_at_k(self.run(qid, Variant::HumanRewrite)?, &self.judgments, k)
                    }
                    Some(other) => {
                        return Err(Error::InvalidInput(format!(
                            "filter metric '{other}' is not a per-variant retrieval metric"
                        )))
                    }
                    None => 1.0,
                };
                let qr_value = question_similarity(triple, spec.qr, policy, embeddings)?;
                let qa_value = match spec.qa {
                    QaMetric::PrecisionAt1 => precision_at_1(
                        self.run(qid, Variant::ModelRewrite)?,
                        &self.judgments,
                        cfg.binarization_grade,
                    ),
                    QaMetric::Ndcg { k } => {
                        ndcg_at_k(self.run(qid, Variant::ModelRewrite)?, &self.judgments, k)
                    }
                    QaMetric::RecallOverlap { k } => answer_set_recall(
                        self.run(qid, Variant::HumanRewrite)?,
                        self.run(qid, Variant::ModelRewrite)?,
                        k,
                    )
                    .map_err(|e| Error::data(format!("question '{qid}'"), e.to_string()))?,
                    QaMetric::SpanF1 | QaMetric::SpanJaccard => {
                        return Err(Error::InvalidInput(format!(
                            "QA metric '{}' requires the reading task",
                            spec.qa
                        )))
                    }
                };
                Ok(CorrelationInput {
                    qid: qid.clone(),
                    human_metric_value,
                    qr_value,
                    qa_value,
                })
            })
            .collect()
    }
}

/// A validated reading-comprehension corpus: triples, one span-prediction
/// file per variant, and gold answers.
#[derive(Debug)]
pub struct ReadingCorpus {
    pub triples: Vec<QuestionTriple>,
    pub spans: SpanPredictionSet,
    pub gold: GoldAnswerSet,
}

impl ReadingCorpus {
    pub fn validate(&self, mode: ValidationMode) -> Result<ValidationReport> {
        let mut required: Vec<Coverage> = Variant::ALL
            .iter()
            .map(|&v| Coverage::new(format!("spans({v})"), self.spans.qids(v)))
            .collect();
        required.push(Coverage::new("the gold-answer file", self.gold.qids()));
        validate_corpus(&self.triples, &required, &[], mode)
    }

    pub fn retained_triples(&self, report: &ValidationReport) -> Vec<&QuestionTriple> {
        self.triples
            .iter()
            .filter(|t| report.retained.contains(&t.qid))
            .collect()
    }

    fn span(&self, qid: &str, variant: Variant) -> Result<&str> {
        self.spans.get(qid, variant).ok_or_else(|| {
            Error::data(
                format!("question '{qid}'"),
                format!("no predicted span for variant '{variant}'"),
            )
        })
    }

    fn golds(&self, qid: &str) -> Result<&[String]> {
        self.gold
            .get(qid)
            .ok_or_else(|| Error::data(format!("question '{qid}'"), "no gold answers".to_string()))
    }

    pub fn samples(
        &self,
        retained: &[&QuestionTriple],
        metrics: &[MetricId],
        policy: &TokenizationPolicy,
    ) -> Result<Vec<BreakdownSample>> {
        retained
            .iter()
            .map(|triple| {
                let mut values = BTreeMap::new();
                for &metric in metrics {
                    if metric != MetricId::SpanF1 {
                        return Err(Error::InvalidInput(format!(
                            "metric '{metric}' is not a reading-comprehension metric"
                        )));
                    }
                    let map = VariantMap::try_from_fn(|v| {
                        span_f1(self.span(&triple.qid, v)?, self.golds(&triple.qid)?, policy)
                    })?;
                    values.insert(metric, map);
                }
                Ok(BreakdownSample::from_triple(triple, values))
            })
            .collect()
    }

    pub fn correlation_inputs(
        &self,
        retained: &[&QuestionTriple],
        spec: &CorrelationSpec,
        policy: &TokenizationPolicy,
        embeddings: Option<&EmbeddingStore>,
    ) -> Result<Vec<CorrelationInput>> {
        retained
            .iter()
            .map(|triple| {
                let qid = &triple.qid;
                let human_metric_value = match spec.filter_metric {
                    Some(MetricId::SpanF1) => span_f1(
                        self.span(qid, Variant::HumanRewrite)?,
                        self.golds(qid)?,
                        policy,
                    )?,
                    Some(other) => {
                        return Err(Error::InvalidInput(format!(
                            "filter metric '{other}' is not a reading-comprehension metric"
                        )))
                    }
                    None => 1.0,
                };
                let qr_value = question_similarity(triple, spec.qr, policy, embeddings)?;
                let qa_value = match spec.qa {
                    QaMetric::SpanF1 => span_f1(
                        self.span(qid, Variant::ModelRewrite)?,
                        self.golds(qid)?,
                        policy,
                    )?,
                    QaMetric::SpanJaccard => {
                        jaccard_tokens(
                            self.span(qid, Variant::ModelRewrite)?,
                            self.span(qid, Variant::HumanRewrite)?,
                            policy,
                        )
                        .value
                    }
                    other => {
                        return Err(Error::InvalidInput(format!(
                            "QA metric '{other}' requires the retrieval task"
                        )))
                    }
                };
                Ok(CorrelationInput {
                    qid: qid.clone(),
                    human_metric_value,
                    qr_value,
                    qa_value,
                })
            })
            .collect()
    }
}

/// Similarity of the model rewrite to the human rewrite (the rewrite ground
/// truth): ROUGE-1 recall with the model rewrite as candidate, token
/// Jaccard, or embedding cosine mapped to [0, 1].
pub fn question_similarity(
    triple: &QuestionTriple,
    metric: SimilarityMetric,
    policy: &TokenizationPolicy,
    embeddings: Option<&EmbeddingStore>,
) -> Result<f64> {
    let qid = &triple.qid;
    match metric {
        SimilarityMetric::Rouge1Recall => {
            rouge1_recall(&triple.model_rewrite, &triple.human_rewrite, policy)
                .map(|s| s.value)
                .map_err(|e| Error::data(format!("question '{qid}'"), e.to_string()))
        }
        SimilarityMetric::Jaccard => {
            Ok(jaccard_tokens(&triple.model_rewrite, &triple.human_rewrite, policy).value)
        }
        SimilarityMetric::Cosine => {
            let store = embeddings.ok_or_else(|| {
                Error::InvalidInput("cosine similarity requires embedding files".to_string())
            })?;
            let fetch = |variant: Variant| {
                store.get(qid, variant).ok_or_else(|| {
                    Error::data(
                        format!("question '{qid}'"),
                        format!("no embedding for variant '{variant}'"),
                    )
                })
            };
            let model = fetch(Variant::ModelRewrite)?;
            let human = fetch(Variant::HumanRewrite)?;
            cosine_score(model, human)
                .map(|s| s.value)
                .map_err(|e| Error::data(format!("question '{qid}'"), e.to_string()))
        }
    }
}

/// Flatten breakdown samples into qid-sorted metric rows for CSV export.
pub fn metric_rows(samples: &[BreakdownSample]) -> Vec<MetricValue> {
    let mut rows = Vec::new();
    for sample in samples {
        for (&metric, map) in &sample.values {
            for (variant, &value) in map.iter() {
                rows.push(MetricValue {
                    qid: sample.qid.clone(),
                    variant,
                    metric,
                    value,
                });
            }
        }
    }
    rows.sort_by(|a, b| {
        a.qid
            .cmp(&b.qid)
            .then(a.variant.cmp(&b.variant))
            .then_with(|| a.metric.to_string().cmp(&b.metric.to_string()))
    });
    rows
}

/// The continuous per-variant values of one metric, for threshold sweeps.
pub fn sweep_values(samples: &[BreakdownSample], metric: MetricId) -> Result<Vec<VariantMap<f64>>> {
    samples
        .iter()
        .map(|s| {
            s.values.get(&metric).copied().ok_or_else(|| {
                Error::data(
                    format!("question '{}'", s.qid),
                    format!("no values for metric '{metric}'"),
                )
            })
        })
        .collect()
}

/// Default breakdown rules per task, mirroring the standard table columns.
pub fn default_retrieval_rules(ndcg_k: usize) -> Vec<CorrectnessRule> {
    CorrectnessRule::parse_list(&format!(
        "p@1=1,ndcg@{ndcg_k}>0,ndcg@{ndcg_k}>=0.5,ndcg@{ndcg_k}=1"
    ))
    .expect("default rules parse")
}

pub fn default_reading_rules() -> Vec<CorrectnessRule> {
    CorrectnessRule::parse_list("span_f1>0,span_f1>=0.5,span_f1=1").expect("default rules parse")
}
