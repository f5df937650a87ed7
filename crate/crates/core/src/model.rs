//! Shared data model: question variants, triples, ranked runs, judgments,
//! span predictions, gold answers, embeddings, and metric identifiers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The three formulations of one conversational turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Original,
    ModelRewrite,
    HumanRewrite,
}

impl Variant {
    pub const ALL: [Variant; 3] = [
        Variant::Original,
        Variant::ModelRewrite,
        Variant::HumanRewrite,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Original => "original",
            Variant::ModelRewrite => "model_rewrite",
            Variant::HumanRewrite => "human_rewrite",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "original" => Ok(Variant::Original),
            "model_rewrite" => Ok(Variant::ModelRewrite),
            "human_rewrite" => Ok(Variant::HumanRewrite),
            other => Err(Error::InvalidInput(format!(
                "unknown variant '{other}' (expected original, model_rewrite, or human_rewrite)"
            ))),
        }
    }
}

/// A total map with exactly one value per question variant.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct VariantMap<T> {
    pub original: T,
    pub model_rewrite: T,
    pub human_rewrite: T,
}

impl<T> VariantMap<T> {
    pub fn new(original: T, model_rewrite: T, human_rewrite: T) -> Self {
        VariantMap {
            original,
            model_rewrite,
            human_rewrite,
        }
    }

    pub fn get(&self, variant: Variant) -> &T {
        match variant {
            Variant::Original => &self.original,
            Variant::ModelRewrite => &self.model_rewrite,
            Variant::HumanRewrite => &self.human_rewrite,
        }
    }

    pub fn get_mut(&mut self, variant: Variant) -> &mut T {
        match variant {
            Variant::Original => &mut self.original,
            Variant::ModelRewrite => &mut self.model_rewrite,
            Variant::HumanRewrite => &mut self.human_rewrite,
        }
    }

    pub fn from_fn(mut f: impl FnMut(Variant) -> T) -> Self {
        VariantMap {
            original: f(Variant::Original),
            model_rewrite: f(Variant::ModelRewrite),
            human_rewrite: f(Variant::HumanRewrite),
        }
    }

    pub fn try_from_fn(mut f: impl FnMut(Variant) -> Result<T>) -> Result<Self> {
        Ok(VariantMap {
            original: f(Variant::Original)?,
            model_rewrite: f(Variant::ModelRewrite)?,
            human_rewrite: f(Variant::HumanRewrite)?,
        })
    }

    /// Iterate in the fixed variant order (original, model, human).
    pub fn iter(&self) -> impl Iterator<Item = (Variant, &T)> {
        Variant::ALL.iter().map(move |&v| (v, self.get(v)))
    }
}

/// One conversational turn with its three question formulations.
///
/// `human_equals_original` marks questions the annotator left unchanged;
/// when absent from the input it is derived by [`normalized_text_equal`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionTriple {
    pub qid: String,
    pub original: String,
    pub model_rewrite: String,
    pub human_rewrite: String,
    pub human_equals_original: bool,
}

impl QuestionTriple {
    pub fn text(&self, variant: Variant) -> &str {
        match variant {
            Variant::Original => &self.original,
            Variant::ModelRewrite => &self.model_rewrite,
            Variant::HumanRewrite => &self.human_rewrite,
        }
    }
}

/// Case-folded, whitespace-collapsed string equality.
pub fn normalized_text_equal(a: &str, b: &str) -> bool {
    let norm = |s: &str| {
        s.split_whitespace()
            .map(str::to_lowercase)
            .collect::<Vec<_>>()
            .join(" ")
    };
    norm(a) == norm(b)
}

/// One entry of a ranked document list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunEntry {
    pub docid: String,
    pub rank: usize,
    pub score: f64,
}

/// A system's ranked document list for one (question, variant) pair.
///
/// Entries are sorted by ascending rank and ranks are `1..=n` after
/// normalization; docids are unique within the list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedRun {
    pub qid: String,
    pub variant: Variant,
    pub entries: Vec<RunEntry>,
}

impl RankedRun {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Docids of the top `k` entries.
    pub fn top_k_docids(&self, k: usize) -> BTreeSet<&str> {
        self.entries
            .iter()
            .take(k)
            .map(|e| e.docid.as_str())
            .collect()
    }
}

/// Graded relevance judgments keyed by question id and document id.
///
/// Unjudged (qid, docid) pairs score grade 0.
#[derive(Debug, Clone)]
pub struct JudgmentSet {
    grades: BTreeMap<String, BTreeMap<String, u32>>,
    pub binarization_threshold: u32,
}

impl Default for JudgmentSet {
    fn default() -> Self {
        JudgmentSet {
            grades: BTreeMap::new(),
            binarization_threshold: 2,
        }
    }
}

impl JudgmentSet {
    pub fn new() -> Self {
        JudgmentSet::default()
    }

    /// Insert a judgment, keeping the maximum grade on duplicates.
    /// Returns the previously stored grade when the pair was already present.
    pub fn insert_max(&mut self, qid: &str, docid: &str, grade: u32) -> Option<u32> {
        let by_doc = self.grades.entry(qid.to_string()).or_default();
        match by_doc.get_mut(docid) {
            Some(existing) => {
                let old = *existing;
                *existing = old.max(grade);
                Some(old)
            }
            None => {
                by_doc.insert(docid.to_string(), grade);
                None
            }
        }
    }

    pub fn grade(&self, qid: &str, docid: &str) -> u32 {
        self.grades
            .get(qid)
            .and_then(|m| m.get(docid))
            .copied()
            .unwrap_or(0)
    }

    /// Binary relevance under the set's binarization threshold.
    pub fn is_relevant(&self, qid: &str, docid: &str) -> bool {
        self.grade(qid, docid) >= self.binarization_threshold
    }

    /// All judged documents of one question, if any.
    pub fn judged(&self, qid: &str) -> Option<&BTreeMap<String, u32>> {
        self.grades.get(qid)
    }

    /// True when the question has at least one judged document with grade > 0.
    pub fn has_relevant(&self, qid: &str) -> bool {
        self.grades
            .get(qid)
            .map(|m| m.values().any(|&g| g > 0))
            .unwrap_or(false)
    }

    pub fn qids(&self) -> impl Iterator<Item = &String> {
        self.grades.keys()
    }

    pub fn num_judgments(&self) -> usize {
        self.grades.values().map(BTreeMap::len).sum()
    }
}

/// Predicted answer spans per (question, variant). Predictions may be empty
/// strings (systems may abstain).
#[derive(Debug, Clone, Default)]
pub struct SpanPredictionSet {
    spans: VariantMap<BTreeMap<String, String>>,
}

impl SpanPredictionSet {
    pub fn insert_file(&mut self, variant: Variant, spans: BTreeMap<String, String>) {
        *self.spans.get_mut(variant) = spans;
    }

    pub fn get(&self, qid: &str, variant: Variant) -> Option<&str> {
        self.spans.get(variant).get(qid).map(String::as_str)
    }

    pub fn qids(&self, variant: Variant) -> BTreeSet<String> {
        self.spans.get(variant).keys().cloned().collect()
    }
}

/// Gold answer texts per question; every question has at least one.
#[derive(Debug, Clone, Default)]
pub struct GoldAnswerSet {
    answers: BTreeMap<String, Vec<String>>,
}

impl GoldAnswerSet {
    pub fn insert(&mut self, qid: String, answers: Vec<String>) -> Result<()> {
        if answers.is_empty() {
            return Err(Error::data(
                format!("question '{qid}'"),
                "at least one gold answer is required",
            ));
        }
        self.answers.insert(qid, answers);
        Ok(())
    }

    pub fn get(&self, qid: &str) -> Option<&[String]> {
        self.answers.get(qid).map(Vec::as_slice)
    }

    pub fn qids(&self) -> BTreeSet<String> {
        self.answers.keys().cloned().collect()
    }

    pub fn contains(&self, qid: &str) -> bool {
        self.answers.contains_key(qid)
    }
}

/// Precomputed sentence-embedding vectors per (question, variant).
///
/// All vectors share one dimension and none is all-zero.
#[derive(Debug, Clone, Default)]
pub struct EmbeddingStore {
    vectors: VariantMap<BTreeMap<String, Vec<f64>>>,
    dimension: Option<usize>,
}

impl EmbeddingStore {
    pub fn insert(&mut self, qid: &str, variant: Variant, vector: Vec<f64>) -> Result<()> {
        let location = format!("embedding for question '{qid}' ({variant})");
        if vector.is_empty() {
            return Err(Error::data(location, "vector is empty"));
        }
        if vector.iter().any(|v| !v.is_finite()) {
            return Err(Error::data(location, "vector has a non-finite component"));
        }
        if vector.iter().all(|&v| v == 0.0) {
            return Err(Error::data(location, "vector is all-zero"));
        }
        match self.dimension {
            Some(dim) if dim != vector.len() => {
                return Err(Error::data(
                    location,
                    format!(
                        "dimension {} does not match store dimension {dim}",
                        vector.len()
                    ),
                ));
            }
            Some(_) => {}
            None => self.dimension = Some(vector.len()),
        }
        self.vectors
            .get_mut(variant)
            .insert(qid.to_string(), vector);
        Ok(())
    }

    pub fn get(&self, qid: &str, variant: Variant) -> Option<&[f64]> {
        self.vectors.get(variant).get(qid).map(Vec::as_slice)
    }

    pub fn dimension(&self) -> Option<usize> {
        self.dimension
    }
}

/// Identifier of an answer-quality metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MetricId {
    Ndcg { k: usize },
    PrecisionAt1,
    RecallAt { k: usize },
    SpanF1,
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricId::Ndcg { k } => write!(f, "ndcg@{k}"),
            MetricId::PrecisionAt1 => write!(f, "p@1"),
            MetricId::RecallAt { k } => write!(f, "recall@{k}"),
            MetricId::SpanF1 => write!(f, "span_f1"),
        }
    }
}

impl FromStr for MetricId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unknown metric '{s}'"));
        if s == "p@1" {
            return Ok(MetricId::PrecisionAt1);
        }
        if s == "span_f1" || s == "f1" {
            return Ok(MetricId::SpanF1);
        }
        if let Some(k) = s.strip_prefix("ndcg@") {
            let k: usize = k.parse().map_err(|_| bad())?;
            if k == 0 {
                return Err(Error::InvalidInput(format!("cutoff must be >= 1 in '{s}'")));
            }
            return Ok(MetricId::Ndcg { k });
        }
        if let Some(k) = s.strip_prefix("recall@") {
            let k: usize = k.parse().map_err(|_| bad())?;
            if k == 0 {
                return Err(Error::InvalidInput(format!("cutoff must be >= 1 in '{s}'")));
            }
            return Ok(MetricId::RecallAt { k });
        }
        Err(bad())
    }
}

impl Serialize for MetricId {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MetricId {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Non-fatal observations recorded while parsing or validating inputs.
#[derive(Debug, Default, Clone)]
pub struct Warnings(Vec<String>);

impl Warnings {
    pub fn new() -> Self {
        Warnings::default()
    }

    pub fn push(&mut self, message: impl Into<String>) {
        self.0.push(message.into());
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    /// Sorted, deduplicated messages; stable across input line orderings.
    pub fn sorted(&self) -> Vec<String> {
        let mut v = self.0.clone();
        v.sort();
        v.dedup();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variant_roundtrip() {
        for v in Variant::ALL {
            assert_eq!(v.as_str().parse::<Variant>().unwrap(), v);
        }
        assert!("human".parse::<Variant>().is_err());
    }

    #[test]
    fn normalized_equality_folds_case_and_whitespace() {
        assert!(normalized_text_equal(
            "When was  DNA discovered?",
            "when was dna discovered?"
        ));
        assert!(!normalized_text_equal("When?", "When was DNA discovered?"));
    }

    #[test]
    fn judgment_set_keeps_max_grade() {
        let mut j = JudgmentSet::new();
        assert_eq!(j.insert_max("q1", "d1", 1), None);
        assert_eq!(j.insert_max("q1", "d1", 3), Some(1));
        assert_eq!(j.insert_max("q1", "d1", 2), Some(3));
        assert_eq!(j.grade("q1", "d1"), 3);
        assert_eq!(j.grade("q1", "dx"), 0);
        assert!(j.is_relevant("q1", "d1")); // default threshold 2
        assert!(!j.is_relevant("q1", "dx"));
    }

    #[test]
    fn embedding_store_enforces_dimension_and_nonzero() {
        let mut store = EmbeddingStore::default();
        store
            .insert("q1", Variant::Original, vec![1.0, 0.0, 0.0])
            .unwrap();
        assert_eq!(store.dimension(), Some(3));
        assert!(store
            .insert("q2", Variant::Original, vec![1.0, 2.0])
            .is_err());
        assert!(store
            .insert("q3", Variant::Original, vec![0.0, 0.0, 0.0])
            .is_err());
    }

    #[test]
    fn metric_id_parse_and_display() {
        assert_eq!(
            "ndcg@3".parse::<MetricId>().unwrap(),
            MetricId::Ndcg { k: 3 }
        );
        assert_eq!("p@1".parse::<MetricId>().unwrap(), MetricId::PrecisionAt1);
        assert_eq!(
            "recall@1000".parse::<MetricId>().unwrap(),
            MetricId::RecallAt { k: 1000 }
        );
        assert_eq!("f1".parse::<MetricId>().unwrap(), MetricId::SpanF1);
        assert_eq!(MetricId::Ndcg { k: 3 }.to_string(), "ndcg@3");
        assert!("ndcg@0".parse::<MetricId>().is_err());
        assert!("map".parse::<MetricId>().is_err());
    }
}
