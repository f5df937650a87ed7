//! Parsers for the external file formats: TREC-style run files, qrels, and
//! the JSON-lines carriers for question triples, answer spans, gold answers,
//! embeddings, and precomputed outcome records.
//!
//! Parsing is deterministic: shuffling the lines of any input file yields
//! the same normalized structures.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;

use serde::Deserialize;

use crate::breakdown::BreakdownSample;
use crate::error::{Error, Result};
use crate::model::{
    normalized_text_equal, EmbeddingStore, GoldAnswerSet, JudgmentSet, MetricId, QuestionTriple,
    RankedRun, RunEntry, Variant, VariantMap, Warnings,
};

fn loc(source: &str, line: usize) -> String {
    format!("{source}:{line}")
}

fn read_line(item: std::io::Result<String>, source: &str) -> Result<String> {
    item.map_err(|e| Error::io(source, e))
}

/// Parse a run file: `<qid> Q0 <docid> <rank> <score> <tag>` per line.
///
/// Entries are grouped by qid. When the rank fields of a question disagree
/// with the score ordering (or are not exactly `1..=n`), the entries are
/// re-sorted by (score descending, docid ascending), ranks are rewritten,
/// and a warning is recorded.
pub fn parse_run_file<R: BufRead>(
    reader: R,
    variant: Variant,
    source: &str,
    warnings: &mut Warnings,
) -> Result<BTreeMap<String, RankedRun>> {
    let mut groups: BTreeMap<String, Vec<RunEntry>> = BTreeMap::new();
    let mut seen: BTreeSet<(String, String)> = BTreeSet::new();

    for (idx, item) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = read_line(item, source)?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(Error::data(
                loc(source, lineno),
                format!(
                    "expected 6 whitespace-separated fields, found {}",
                    fields.len()
                ),
            ));
        }
        let (qid, docid) = (fields[0], fields[2]);
        let rank: usize = fields[3].parse().map_err(|_| {
            Error::data(
                loc(source, lineno),
                format!("rank '{}' is not a positive integer", fields[3]),
            )
        })?;
        if rank == 0 {
            return Err(Error::data(loc(source, lineno), "rank must be >= 1"));
        }
        let score: f64 = fields[4].parse().map_err(|_| {
            Error::data(
                loc(source, lineno),
                format!("score '{}' is not a number", fields[4]),
            )
        })?;
        if !score.is_finite() {
            return Err(Error::data(loc(source, lineno), "score must be finite"));
        }
        if !seen.insert((qid.to_string(), docid.to_string())) {
            return Err(Error::data(
                loc(source, lineno),
                format!("duplicate document '{docid}' for question '{qid}'"),
            ));
        }
        groups.entry(qid.to_string()).or_default().push(RunEntry {
            docid: docid.to_string(),
            rank,
            score,
        });
    }

    let mut runs = BTreeMap::new();
    for (qid, mut entries) in groups {
        entries.sort_by(|a, b| a.rank.cmp(&b.rank).then_with(|| a.docid.cmp(&b.docid)));
        let ranks_ok = entries.iter().enumerate().all(|(i, e)| e.rank == i + 1);
        let scores_ok = entries.windows(2).all(|w| w[0].score >= w[1].score);
        if !ranks_ok || !scores_ok {
            entries.sort_by(|a, b| {
                b.score
                    .partial_cmp(&a.score)
                    .unwrap_or(Ordering::Equal)
                    .then_with(|| a.docid.cmp(&b.docid))
            });
            for (i, e) in entries.iter_mut().enumerate() {
                e.rank = i + 1;
            }
            warnings.push(format!(
                "{source}: ranks for question '{qid}' disagree with score order; \
                 re-sorted by (score desc, docid asc)"
            ));
        }
        runs.insert(
            qid.clone(),
            RankedRun {
                qid,
                variant,
                entries,
            },
        );
    }
    Ok(runs)
}

/// Serialize runs back to the run-file format. Re-parsing the output yields
/// identical structures (scores print in round-trip precision).
pub fn serialize_runs(runs: &BTreeMap<String, RankedRun>, tag: &str) -> String {
    let mut out = String::new();
    for run in runs.values() {
        for e in &run.entries {
            out.push_str(&format!(
                "{} Q0 {} {} {} {}\n",
                run.qid, e.docid, e.rank, e.score, tag
            ));
        }
    }
    out
}

/// Parse qrels: `<qid> 0 <docid> <grade>` per line. Duplicate pairs keep the
/// maximum grade and record a warning.
pub fn parse_qrels<R: BufRead>(
    reader: R,
    source: &str,
    warnings: &mut Warnings,
) -> Result<JudgmentSet> {
    let mut judgments = JudgmentSet::new();
    for (idx, item) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = read_line(item, source)?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::data(
                loc(source, lineno),
                format!(
                    "expected 4 whitespace-separated fields, found {}",
                    fields.len()
                ),
            ));
        }
        let (qid, docid) = (fields[0], fields[2]);
        let grade: i64 = fields[3].parse().map_err(|_| {
            Error::data(
                loc(source, lineno),
                format!("grade '{}' is not an integer", fields[3]),
            )
        })?;
        if grade < 0 {
            return Err(Error::data(loc(source, lineno), "grade must be >= 0"));
        }
        if judgments.insert_max(qid, docid, grade as u32).is_some() {
            warnings.push(format!(
                "{source}: duplicate judgment for question '{qid}' document '{docid}'; \
                 keeping the maximum grade"
            ));
        }
    }
    Ok(judgments)
}

#[derive(Deserialize)]
struct TripleRecord {
    qid: String,
    original: String,
    model_rewrite: String,
    human_rewrite: String,
    #[serde(default)]
    human_equals_original: Option<bool>,
}

/// Parse question triples from JSON lines. The `human_equals_original` flag
/// is computed from normalized text equality when absent.
pub fn parse_triples<R: BufRead>(reader: R, source: &str) -> Result<Vec<QuestionTriple>> {
    let mut triples = Vec::new();
    let mut seen = BTreeSet::new();
    for (idx, item) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = read_line(item, source)?;
        if line.trim().is_empty() {
            continue;
        }
        let record: TripleRecord = serde_json::from_str(&line)
            .map_err(|e| Error::data(loc(source, lineno), e.to_string()))?;
        if record.qid.trim().is_empty() {
            return Err(Error::data(loc(source, lineno), "qid must be non-empty"));
        }
        for (field, text) in [
            ("original", &record.original),
            ("model_rewrite", &record.model_rewrite),
            ("human_rewrite", &record.human_rewrite),
        ] {
            if text.trim().is_empty() {
                return Err(Error::data(
                    loc(source, lineno),
                    format!(
                        "question '{}': field '{field}' must be non-empty",
                        record.qid
                    ),
                ));
            }
        }
        if !seen.insert(record.qid.clone()) {
            return Err(Error::data(
                loc(source, lineno),
                format!("duplicate question id '{}'", record.qid),
            ));
        }
        let flag = record
            .human_equals_original
            .unwrap_or_else(|| normalized_text_equal(&record.original, &record.human_rewrite));
        triples.push(QuestionTriple {
            qid: record.qid,
            original: record.original,
            model_rewrite: record.model_rewrite,
            human_rewrite: record.human_rewrite,
            human_equals_original: flag,
        });
    }
    Ok(triples)
}

#[derive(Deserialize)]
struct SpanRecord {
    qid: String,
    answer: String,
}

/// Parse one variant's predicted answer spans from JSON lines
/// (`{"qid": ..., "answer": ...}`). Empty answers are legal (abstentions).
pub fn parse_spans<R: BufRead>(reader: R, source: &str) -> Result<BTreeMap<String, String>> {
    let mut spans = BTreeMap::new();
    for (idx, item) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = read_line(item, source)?;
        if line.trim().is_empty() {
            continue;
        }
        let record: SpanRecord = serde_json::from_str(&line)
            .map_err(|e| Error::data(loc(source, lineno), e.to_string()))?;
        if spans.insert(record.qid.clone(), record.answer).is_some() {
            return Err(Error::data(
                loc(source, lineno),
                format!("duplicate question id '{}'", record.qid),
            ));
        }
    }
    Ok(spans)
}

#[derive(Deserialize)]
struct GoldRecord {
    qid: String,
    answers: Vec<String>,
}

/// Parse gold answers from JSON lines (`{"qid": ..., "answers": [...]}`).
pub fn parse_gold<R: BufRead>(reader: R, source: &str) -> Result<GoldAnswerSet> {
    let mut gold = GoldAnswerSet::default();
    let mut seen = BTreeSet::new();
    for (idx, item) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = read_line(item, source)?;
        if line.trim().is_empty() {
            continue;
        }
        let record: GoldRecord = serde_json::from_str(&line)
            .map_err(|e| Error::data(loc(source, lineno), e.to_string()))?;
        if record.answers.is_empty() {
            return Err(Error::data(
                loc(source, lineno),
                format!("question '{}': answer list must be non-empty", record.qid),
            ));
        }
        if !seen.insert(record.qid.clone()) {
            return Err(Error::data(
                loc(source, lineno),
                format!("duplicate question id '{}'", record.qid),
            ));
        }
        gold.insert(record.qid, record.answers)?;
    }
    Ok(gold)
}

#[derive(Deserialize)]
struct EmbeddingRecord {
    qid: String,
    vector: Vec<f64>,
}

/// Parse one variant's embedding vectors from JSON lines into `store`,
/// enforcing a consistent dimension across everything already loaded.
pub fn parse_embeddings<R: BufRead>(
    reader: R,
    variant: Variant,
    source: &str,
    store: &mut EmbeddingStore,
) -> Result<()> {
    let mut seen = BTreeSet::new();
    for (idx, item) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = read_line(item, source)?;
        if line.trim().is_empty() {
            continue;
        }
        let record: EmbeddingRecord = serde_json::from_str(&line)
            .map_err(|e| Error::data(loc(source, lineno), e.to_string()))?;
        if !seen.insert(record.qid.clone()) {
            return Err(Error::data(
                loc(source, lineno),
                format!("duplicate question id '{}'", record.qid),
            ));
        }
        store
            .insert(&record.qid, variant, record.vector)
            .map_err(|e| Error::data(loc(source, lineno), e.to_string()))?;
    }
    Ok(())
}

#[derive(Deserialize)]
struct OutcomeRecord {
    qid: String,
    human_equals_original: bool,
    metrics: BTreeMap<String, BTreeMap<String, f64>>,
}

/// Parse precomputed outcome records from JSON lines: per question, a flag
/// and one metric value per (metric, variant). All three variants must be
/// present for every metric and values must lie in [0, 1].
pub fn parse_outcome_records<R: BufRead>(reader: R, source: &str) -> Result<Vec<BreakdownSample>> {
    let mut samples = Vec::new();
    let mut seen = BTreeSet::new();
    for (idx, item) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = read_line(item, source)?;
        if line.trim().is_empty() {
            continue;
        }
        let record: OutcomeRecord = serde_json::from_str(&line)
            .map_err(|e| Error::data(loc(source, lineno), e.to_string()))?;
        if !seen.insert(record.qid.clone()) {
            return Err(Error::data(
                loc(source, lineno),
                format!("duplicate question id '{}'", record.qid),
            ));
        }
        let mut values = BTreeMap::new();
        for (metric_name, by_variant) in &record.metrics {
            let metric: MetricId = metric_name
                .parse()
                .map_err(|e: Error| Error::data(loc(source, lineno), e.to_string()))?;
            let map = VariantMap::try_from_fn(|v| {
                let value = *by_variant.get(v.as_str()).ok_or_else(|| {
                    Error::data(
                        loc(source, lineno),
                        format!(
                            "question '{}': missing value for variant '{v}' of metric '{metric}'",
                            record.qid
                        ),
                    )
                })?;
                if !(0.0..=1.0).contains(&value) {
                    return Err(Error::data(
                        loc(source, lineno),
                        format!(
                            "question '{}': value {value} for '{metric}' ({v}) is outside [0, 1]",
                            record.qid
                        ),
                    ));
                }
                Ok(value)
            })?;
            values.insert(metric, map);
        }
        samples.push(BreakdownSample {
            qid: record.qid,
            human_equals_original: record.human_equals_original,
            values,
        });
    }
    Ok(samples)
}

/// Parse a stop-word list: one token per line, blank lines ignored.
pub fn parse_stopwords<R: BufRead>(reader: R, source: &str) -> Result<Vec<String>> {
    let mut words = Vec::new();
    for item in reader.lines() {
        let line = read_line(item, source)?;
        let word = line.trim();
        if !word.is_empty() {
            words.push(word.to_string());
        }
    }
    Ok(words)
}

/// Coverage of question ids by one input artifact.
#[derive(Debug, Clone)]
pub struct Coverage {
    pub label: String,
    pub qids: BTreeSet<String>,
}

impl Coverage {
    pub fn new(label: impl Into<String>, qids: BTreeSet<String>) -> Self {
        Coverage {
            label: label.into(),
            qids,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationMode {
    /// Fail on any coverage gap.
    Strict,
    /// Drop questions with incomplete coverage and report them.
    Lenient,
}

/// Outcome of corpus validation.
#[derive(Debug, Default)]
pub struct ValidationReport {
    /// (artifact label, qid): qid appears in the triples but not in the artifact.
    pub missing: Vec<(String, String)>,
    /// (artifact label, qid): qid appears in the artifact but not in the triples.
    pub unknown: Vec<(String, String)>,
    /// Non-blocking observations (e.g. questions without judged documents).
    pub advisory: Vec<String>,
    pub retained: BTreeSet<String>,
    pub dropped: BTreeSet<String>,
}

impl ValidationReport {
    pub fn issue_count(&self) -> usize {
        self.missing.len() + self.unknown.len()
    }

    pub fn is_clean(&self) -> bool {
        self.issue_count() == 0
    }
}

/// Cross-check question coverage between the triples and every artifact.
///
/// `required` artifacts must cover every question; in lenient mode questions
/// with gaps are dropped, in strict mode any gap is an error. `advisory`
/// artifacts only produce report notes (e.g. qrels, where an unjudged
/// question legitimately scores zero).
pub fn validate_corpus(
    triples: &[QuestionTriple],
    required: &[Coverage],
    advisory: &[Coverage],
    mode: ValidationMode,
) -> Result<ValidationReport> {
    let triple_qids: BTreeSet<String> = triples.iter().map(|t| t.qid.clone()).collect();
    let mut report = ValidationReport::default();

    for cov in required {
        for qid in &triple_qids {
            if !cov.qids.contains(qid) {
                report.missing.push((cov.label.clone(), qid.clone()));
            }
        }
        for qid in &cov.qids {
            if !triple_qids.contains(qid) {
                report.unknown.push((cov.label.clone(), qid.clone()));
            }
        }
    }
    for cov in advisory {
        for qid in &triple_qids {
            if !cov.qids.contains(qid) {
                report
                    .advisory
                    .push(format!("question '{qid}' is not covered by {}", cov.label));
            }
        }
    }

    let mut retained = triple_qids.clone();
    for (_, qid) in &report.missing {
        retained.remove(qid);
    }
    report.dropped = triple_qids.difference(&retained).cloned().collect();
    report.retained = retained;

    if mode == ValidationMode::Strict && !report.is_clean() {
        let mut gaps: Vec<String> = report
            .missing
            .iter()
            .map(|(label, qid)| format!("'{qid}' missing from {label}"))
            .chain(
                report
                    .unknown
                    .iter()
                    .map(|(label, qid)| format!("'{qid}' in {label} but not in triples")),
            )
            .collect();
        gaps.sort();
        return Err(Error::Validation(gaps.join("; ")));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn runs_from(text: &str, warnings: &mut Warnings) -> BTreeMap<String, RankedRun> {
        parse_run_file(Cursor::new(text), Variant::Original, "test", warnings).unwrap()
    }

    #[test]
    fn parses_single_run_line() {
        let mut w = Warnings::new();
        let runs = runs_from("31_1 Q0 MARCO_955948 1 10.58 bert\n", &mut w);
        let run = &runs["31_1"];
        assert_eq!(run.qid, "31_1");
        assert_eq!(run.entries.len(), 1);
        assert_eq!(run.entries[0].docid, "MARCO_955948");
        assert_eq!(run.entries[0].rank, 1);
        assert_eq!(run.entries[0].score, 10.58);
        assert!(w.is_empty());
    }

    #[test]
    fn resorts_when_ranks_disagree_with_scores() {
        let mut w = Warnings::new();
        let runs = runs_from("q1 Q0 d1 1 5.0 t\nq1 Q0 d2 2 7.0 t\n", &mut w);
        let run = &runs["q1"];
        assert_eq!(run.entries[0].docid, "d2");
        assert_eq!(run.entries[0].rank, 1);
        assert_eq!(run.entries[1].docid, "d1");
        assert_eq!(run.entries[1].rank, 2);
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn rejects_malformed_run_line() {
        let mut w = Warnings::new();
        let err = parse_run_file(
            Cursor::new("q1 Q0 d1 1 5.0\n"),
            Variant::Original,
            "runs.txt",
            &mut w,
        )
        .unwrap_err();
        assert!(err.to_string().contains("runs.txt:1"), "{err}");
    }

    #[test]
    fn rejects_duplicate_docid() {
        let mut w = Warnings::new();
        let err = parse_run_file(
            Cursor::new("q1 Q0 d1 1 5.0 t\nq1 Q0 d1 2 4.0 t\n"),
            Variant::Original,
            "runs.txt",
            &mut w,
        )
        .unwrap_err();
        assert!(err.to_string().contains("duplicate document"), "{err}");
    }

    #[test]
    fn run_roundtrip_and_shuffle_invariance() {
        let text = "q1 Q0 d1 1 5.0 t\nq1 Q0 d2 2 4.5 t\nq2 Q0 d3 1 9.0 t\n";
        let shuffled = "q2 Q0 d3 1 9.0 t\nq1 Q0 d2 2 4.5 t\nq1 Q0 d1 1 5.0 t\n";
        let mut w = Warnings::new();
        let a = runs_from(text, &mut w);
        let b = runs_from(shuffled, &mut w);
        assert_eq!(a, b);
        let serialized = serialize_runs(&a, "t");
        let c = runs_from(&serialized, &mut w);
        assert_eq!(a, c);
        assert!(w.is_empty());
    }

    #[test]
    fn qrels_keeps_max_grade_with_warning() {
        let mut w = Warnings::new();
        let j = parse_qrels(Cursor::new("31_1 0 D1 1\n31_1 0 D1 3\n"), "qrels", &mut w).unwrap();
        assert_eq!(j.grade("31_1", "D1"), 3);
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn qrels_rejects_non_integer_grade() {
        let mut w = Warnings::new();
        let err = parse_qrels(Cursor::new("31_1 0 D1 two\n"), "qrels", &mut w).unwrap_err();
        assert!(err.to_string().contains("not an integer"), "{err}");
        let err = parse_qrels(Cursor::new("31_1 0 D1 -1\n"), "qrels", &mut w).unwrap_err();
        assert!(err.to_string().contains(">= 0"), "{err}");
    }

    #[test]
    fn triples_flag_computed_when_absent() {
        let lines = concat!(
            r#"{"qid":"q1","original":"When?","model_rewrite":"When was DNA discovered?","human_rewrite":"When was DNA discovered?"}"#,
            "\n",
            r#"{"qid":"q2","original":"Who won?","model_rewrite":"Who won the cup?","human_rewrite":"who  won?"}"#,
            "\n",
            r#"{"qid":"q3","original":"A?","model_rewrite":"B?","human_rewrite":"C?","human_equals_original":true}"#,
            "\n"
        );
        let triples = parse_triples(Cursor::new(lines), "triples").unwrap();
        assert!(!triples[0].human_equals_original);
        assert!(triples[1].human_equals_original); // whitespace + case folded
        assert!(triples[2].human_equals_original); // explicit flag wins
    }

    #[test]
    fn triples_reject_missing_key_and_duplicates() {
        let err = parse_triples(
            Cursor::new(r#"{"qid":"q1","original":"a","model_rewrite":"b"}"#),
            "triples",
        )
        .unwrap_err();
        assert!(err.to_string().contains("human_rewrite"), "{err}");

        let two = concat!(
            r#"{"qid":"q1","original":"a","model_rewrite":"b","human_rewrite":"c"}"#,
            "\n",
            r#"{"qid":"q1","original":"a","model_rewrite":"b","human_rewrite":"c"}"#,
            "\n"
        );
        let err = parse_triples(Cursor::new(two), "triples").unwrap_err();
        assert!(
            err.to_string().contains("duplicate question id 'q1'"),
            "{err}"
        );

        let err = parse_triples(
            Cursor::new(r#"{"qid":"q1","original":" ","model_rewrite":"b","human_rewrite":"c"}"#),
            "triples",
        )
        .unwrap_err();
        assert!(err.to_string().contains("non-empty"), "{err}");
    }

    #[test]
    fn spans_and_gold_parse() {
        let spans = parse_spans(
            Cursor::new(r#"{"qid":"q1","answer":"Friedrich Miescher"}"#),
            "spans",
        )
        .unwrap();
        assert_eq!(spans["q1"], "Friedrich Miescher");

        let err = parse_gold(Cursor::new(r#"{"qid":"q1","answers":[]}"#), "gold").unwrap_err();
        assert!(err.to_string().contains("non-empty"), "{err}");

        let gold = parse_gold(Cursor::new(r#"{"qid":"q1","answers":["1869"]}"#), "gold").unwrap();
        assert_eq!(gold.get("q1").unwrap(), &["1869".to_string()]);
    }

    #[test]
    fn embeddings_dimension_mismatch_is_an_error() {
        let mut store = EmbeddingStore::default();
        let lines = concat!(
            r#"{"qid":"q1","vector":[1.0,2.0,3.0]}"#,
            "\n",
            r#"{"qid":"q2","vector":[1.0,2.0,3.0,4.0]}"#,
            "\n"
        );
        let err =
            parse_embeddings(Cursor::new(lines), Variant::Original, "emb", &mut store).unwrap_err();
        assert!(err.to_string().contains("dimension"), "{err}");
    }

    #[test]
    fn outcome_records_require_all_variants() {
        let ok = r#"{"qid":"q1","human_equals_original":false,"metrics":{"p@1":{"original":0.0,"model_rewrite":1.0,"human_rewrite":1.0}}}"#;
        let samples = parse_outcome_records(Cursor::new(ok), "outcomes").unwrap();
        assert_eq!(samples.len(), 1);
        assert_eq!(
            *samples[0].values[&MetricId::PrecisionAt1].get(Variant::HumanRewrite),
            1.0
        );

        let missing = r#"{"qid":"q1","human_equals_original":false,"metrics":{"p@1":{"original":0.0,"human_rewrite":1.0}}}"#;
        let err = parse_outcome_records(Cursor::new(missing), "outcomes").unwrap_err();
        assert!(err.to_string().contains("model_rewrite"), "{err}");
        assert!(err.to_string().contains("q1"), "{err}");
    }

    fn triple(qid: &str) -> QuestionTriple {
        QuestionTriple {
            qid: qid.to_string(),
            original: "o".into(),
            model_rewrite: "m".into(),
            human_rewrite: "h".into(),
            human_equals_original: false,
        }
    }

    #[test]
    fn lenient_validation_drops_uncovered_questions() {
        let triples = vec![triple("q1"), triple("q2")];
        let cov = Coverage::new("run(original)", ["q1".to_string()].into_iter().collect());
        let report = validate_corpus(&triples, &[cov], &[], ValidationMode::Lenient).unwrap();
        assert_eq!(report.retained, ["q1".to_string()].into_iter().collect());
        assert_eq!(report.dropped, ["q2".to_string()].into_iter().collect());
        assert_eq!(report.issue_count(), 1);
    }

    #[test]
    fn lenient_retained_is_intersection() {
        let triples = vec![triple("q1"), triple("q2"), triple("q3")];
        let a = Coverage::new("a", ["q1".into(), "q2".into()].into_iter().collect());
        let b = Coverage::new("b", ["q2".into(), "q3".into()].into_iter().collect());
        let report = validate_corpus(&triples, &[a, b], &[], ValidationMode::Lenient).unwrap();
        assert_eq!(report.retained, ["q2".to_string()].into_iter().collect());
    }

    #[test]
    fn strict_validation_fails_listing_qids() {
        let triples = vec![triple("q1"), triple("q2")];
        let cov = Coverage::new("run(original)", ["q1".to_string()].into_iter().collect());
        let err = validate_corpus(&triples, &[cov], &[], ValidationMode::Strict).unwrap_err();
        assert!(err.to_string().contains("q2"), "{err}");
    }

    #[test]
    fn aligned_corpus_yields_empty_report() {
        let triples = vec![triple("q1")];
        let cov = Coverage::new("run(original)", ["q1".to_string()].into_iter().collect());
        let report = validate_corpus(&triples, &[cov], &[], ValidationMode::Strict).unwrap();
        assert!(report.is_clean());
        assert!(report.dropped.is_empty());
    }
}
