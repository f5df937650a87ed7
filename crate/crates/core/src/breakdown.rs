//! Outcome classification: correctness rules, the eight-bin pattern over
//! (original, model rewrite, human rewrite), breakdown tables with
//! Human=Original subcounts, rewriting-impact fractions, and threshold
//! sweeps.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::json;

use crate::error::{Error, Result};
use crate::model::{MetricId, QuestionTriple, VariantMap};

/// Tolerance for `=` comparisons on metric values (floating-point F1 values
/// like 2/3 must compare reliably).
pub const EQ_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparator {
    StrictlyGreater,
    AtLeast,
    Equals,
}

impl fmt::Display for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparator::StrictlyGreater => ">",
            Comparator::AtLeast => ">=",
            Comparator::Equals => "=",
        })
    }
}

/// A binary correctness criterion over one metric, e.g. `p@1 = 1` or
/// `ndcg@3 >= 0.5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectnessRule {
    pub metric: MetricId,
    pub comparator: Comparator,
    pub threshold: f64,
}

impl CorrectnessRule {
    pub fn new(metric: MetricId, comparator: Comparator, threshold: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(Error::InvalidInput(format!(
                "rule threshold {threshold} is outside [0, 1]"
            )));
        }
        Ok(CorrectnessRule {
            metric,
            comparator,
            threshold,
        })
    }

    pub fn satisfied(&self, value: f64) -> bool {
        match self.comparator {
            Comparator::StrictlyGreater => value > self.threshold,
            Comparator::AtLeast => value >= self.threshold,
            Comparator::Equals => (value - self.threshold).abs() <= EQ_TOLERANCE,
        }
    }

    /// Parse a comma-separated rule list, e.g. `"p@1=1,ndcg@3>=0.5"`.
    pub fn parse_list(s: &str) -> Result<Vec<CorrectnessRule>> {
        let rules: Vec<CorrectnessRule> = s
            .split(',')
            .filter(|part| !part.trim().is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?;
        if rules.is_empty() {
            return Err(Error::InvalidInput("no rules given".to_string()));
        }
        Ok(rules)
    }
}

impl fmt::Display for CorrectnessRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.metric, self.comparator, self.threshold)
    }
}

impl FromStr for CorrectnessRule {
    type Err = Error;

    /// Mini-grammar: `<metric><cmp><value>` with cmp one of `>`, `>=`, `=`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (cmp_idx, cmp_len, comparator) = if let Some(i) = s.find(">=") {
            (i, 2, Comparator::AtLeast)
        } else if let Some(i) = s.find('>') {
            (i, 1, Comparator::StrictlyGreater)
        } else if let Some(i) = s.find('=') {
            (i, 1, Comparator::Equals)
        } else {
            return Err(Error::InvalidInput(format!(
                "rule '{s}' has no comparator (expected >, >=, or =)"
            )));
        };
        let metric: MetricId = s[..cmp_idx].trim().parse()?;
        let value_text = s[cmp_idx + cmp_len..].trim();
        let threshold: f64 = value_text.parse().map_err(|_| {
            Error::InvalidInput(format!("rule '{s}': bad threshold '{value_text}'"))
        })?;
        CorrectnessRule::new(metric, comparator, threshold)
    }
}

/// Correctness triple for one question: which of the three formulations led
/// to a correct answer under some rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutcomePattern {
    pub original: bool,
    pub model: bool,
    pub human: bool,
}

impl OutcomePattern {
    /// Bin index 0..=7: original contributes 1, model 2, human 4.
    /// Index order matches the table's visual order: the four human-incorrect
    /// rows first, then the four human-correct rows.
    pub fn bin(&self) -> usize {
        usize::from(self.original) + 2 * usize::from(self.model) + 4 * usize::from(self.human)
    }

    pub fn from_bin(bin: usize) -> Self {
        assert!(bin < 8, "bin index out of range");
        OutcomePattern {
            original: bin & 1 != 0,
            model: bin & 2 != 0,
            human: bin & 4 != 0,
        }
    }

    /// Three-character label using the table glyphs, e.g. `××✓`.
    pub fn label(&self) -> String {
        let glyph = |b: bool| if b { '✓' } else { '×' };
        [self.original, self.model, self.human]
            .into_iter()
            .map(glyph)
            .collect()
    }
}

/// Apply a rule to the three variant values of one metric.
pub fn evaluate_correctness(values: &VariantMap<f64>, rule: &CorrectnessRule) -> OutcomePattern {
    OutcomePattern {
        original: rule.satisfied(values.original),
        model: rule.satisfied(values.model_rewrite),
        human: rule.satisfied(values.human_rewrite),
    }
}

/// One question's classification input: its id, the Human=Original flag,
/// and per-metric values for all three variants.
#[derive(Debug, Clone)]
pub struct BreakdownSample {
    pub qid: String,
    pub human_equals_original: bool,
    pub values: BTreeMap<MetricId, VariantMap<f64>>,
}

impl BreakdownSample {
    pub fn from_triple(
        triple: &QuestionTriple,
        values: BTreeMap<MetricId, VariantMap<f64>>,
    ) -> Self {
        BreakdownSample {
            qid: triple.qid.clone(),
            human_equals_original: triple.human_equals_original,
            values,
        }
    }

    /// The sample's outcome pattern under `rule`; errors when the sample has
    /// no values for the rule's metric.
    pub fn pattern(&self, rule: &CorrectnessRule) -> Result<OutcomePattern> {
        let values = self.values.get(&rule.metric).ok_or_else(|| {
            Error::data(
                format!("question '{}'", self.qid),
                format!("no values for metric '{}'", rule.metric),
            )
        })?;
        Ok(evaluate_correctness(values, rule))
    }
}

/// Count and Human=Original subcount of one (bin, rule) cell.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BinCell {
    pub count: usize,
    pub human_equals_original: usize,
}

/// The eight-bin breakdown: one column of cells per correctness rule.
#[derive(Debug, Clone)]
pub struct BreakdownTable {
    pub rules: Vec<CorrectnessRule>,
    /// One `[BinCell; 8]` column per rule, indexed by bin.
    pub columns: Vec<[BinCell; 8]>,
    pub total: usize,
    pub total_human_equals_original: usize,
    /// Samples flagged Human=Original whose human and original correctness
    /// nonetheless differ. Identical question text should lead to identical
    /// answers under a deterministic backend, so these point at upstream
    /// nondeterminism; they are reported, not rejected.
    pub diagnostics: Vec<String>,
}

/// Classify every sample under every rule and tally counts per bin.
pub fn build_breakdown(
    samples: &[BreakdownSample],
    rules: &[CorrectnessRule],
) -> Result<BreakdownTable> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("no samples to classify".to_string()));
    }
    if rules.is_empty() {
        return Err(Error::InvalidInput(
            "no correctness rules given".to_string(),
        ));
    }
    let mut columns = vec![[BinCell::default(); 8]; rules.len()];
    let mut total_flagged = 0usize;
    let mut diagnostics = Vec::new();
    for sample in samples {
        if sample.human_equals_original {
            total_flagged += 1;
        }
        for (rule, column) in rules.iter().zip(columns.iter_mut()) {
            let pattern = sample.pattern(rule)?;
            let bin = pattern.bin();
            column[bin].count += 1;
            if sample.human_equals_original {
                column[bin].human_equals_original += 1;
                if pattern.human != pattern.original {
                    diagnostics.push(format!(
                        "question '{}': human = original but correctness differs under '{rule}'",
                        sample.qid
                    ));
                }
            }
        }
    }
    diagnostics.sort();
    Ok(BreakdownTable {
        rules: rules.to_vec(),
        columns,
        total: samples.len(),
        total_human_equals_original: total_flagged,
        diagnostics,
    })
}

impl BreakdownTable {
    pub fn column(&self, rule_index: usize) -> &[BinCell; 8] {
        &self.columns[rule_index]
    }

    fn cell_text(cell: &BinCell) -> String {
        if cell.human_equals_original > 0 {
            format!("{} ({})", cell.count, cell.human_equals_original)
        } else {
            cell.count.to_string()
        }
    }

    /// Markdown table mirroring the breakdown layout: one row per bin in
    /// visual order (human-incorrect bins first), parenthetical
    /// Human=Original subcounts, and a final totals line.
    pub fn render_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str("| Original | QR | Human |");
        for rule in &self.rules {
            out.push_str(&format!(" {rule} |"));
        }
        out.push('\n');
        out.push_str("|---|---|---|");
        for _ in &self.rules {
            out.push_str("---|");
        }
        out.push('\n');
        for bin in 0..8 {
            let pattern = OutcomePattern::from_bin(bin);
            let glyph = |b: bool| if b { "✓" } else { "×" };
            out.push_str(&format!(
                "| {} | {} | {} |",
                glyph(pattern.original),
                glyph(pattern.model),
                glyph(pattern.human)
            ));
            for column in &self.columns {
                out.push_str(&format!(" {} |", Self::cell_text(&column[bin])));
            }
            out.push('\n');
        }
        out.push('\n');
        out.push_str(&format!(
            "Total {} ({})\n",
            self.total, self.total_human_equals_original
        ));
        out
    }

    /// JSON export: rules, per-bin counts and subcounts, totals, and the
    /// rewriting-impact fractions per rule (null where undefined).
    pub fn to_json(&self) -> serde_json::Value {
        let bins: Vec<serde_json::Value> = (0..8)
            .map(|bin| {
                let pattern = OutcomePattern::from_bin(bin);
                json!({
                    "pattern": pattern.label(),
                    "original": pattern.original,
                    "model": pattern.model,
                    "human": pattern.human,
                    "counts": self.columns.iter().map(|c| c[bin].count).collect::<Vec<_>>(),
                    "subcounts": self.columns.iter().map(|c| c[bin].human_equals_original).collect::<Vec<_>>(),
                })
            })
            .collect();
        let impact: Vec<serde_json::Value> = self
            .rules
            .iter()
            .zip(&self.columns)
            .map(|(rule, column)| {
                let value = |scope| match rewriting_impact_fraction(column, scope) {
                    Ok(v) => json!(v),
                    Err(_) => serde_json::Value::Null,
                };
                json!({
                    "rule": rule.to_string(),
                    "all": value(ImpactScope::All),
                    "human_differs": value(ImpactScope::HumanDiffers),
                })
            })
            .collect();
        json!({
            "rules": self.rules.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "bins": bins,
            "totals": {
                "count": self.total,
                "human_equals_original": self.total_human_equals_original,
            },
            "impact": impact,
        })
    }
}

/// Which questions enter the rewriting-impact fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImpactScope {
    /// All human-correct questions.
    All,
    /// Only human-correct questions whose human rewrite differs from the
    /// original (the parenthetical subcounts are subtracted from every
    /// human-correct bin).
    HumanDiffers,
}

/// Fraction of human-correct questions already answered correctly by the
/// original formulation: bins where original and human are both correct
/// (5 and 7) over all human-correct bins (4..=7).
pub fn rewriting_impact_fraction(column: &[BinCell; 8], scope: ImpactScope) -> Result<f64> {
    let human_correct_total: usize = (4..8).map(|b| column[b].count).sum();
    if human_correct_total == 0 {
        return Err(Error::UndefinedFraction(
            "no human-correct samples in this column".to_string(),
        ));
    }
    let effective = |bin: usize| -> f64 {
        let cell = &column[bin];
        match scope {
            ImpactScope::All => cell.count as f64,
            ImpactScope::HumanDiffers => (cell.count - cell.human_equals_original) as f64,
        }
    };
    let numerator = effective(5) + effective(7);
    let denominator = effective(4) + effective(5) + effective(6) + effective(7);
    if denominator == 0.0 {
        return Err(Error::UndefinedFraction(
            "all human-correct samples have human = original".to_string(),
        ));
    }
    Ok(numerator / denominator)
}

/// Error-attribution region of one outcome pattern. The human rewrite is
/// treated as ground truth: a failing human rewrite is an answering error,
/// a failing model rewrite with a succeeding human one is a rewriting error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepRegion {
    QaError,
    QrError,
    CorrectWithRewriting,
    CorrectWithoutRewriting,
}

pub fn region_of(pattern: OutcomePattern) -> SweepRegion {
    if !pattern.human {
        SweepRegion::QaError
    } else if !pattern.model {
        SweepRegion::QrError
    } else if pattern.original {
        SweepRegion::CorrectWithoutRewriting
    } else {
        SweepRegion::CorrectWithRewriting
    }
}

/// Region proportions at one threshold; the four proportions sum to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub threshold: f64,
    pub qa_error: f64,
    pub qr_error: f64,
    pub correct_with_rewriting: f64,
    pub correct_without_rewriting: f64,
}

/// Region proportions over a threshold grid.
#[derive(Debug, Clone)]
pub struct SweepSeries {
    pub step: f64,
    pub rows: Vec<SweepRow>,
}

/// The threshold grid for `step`: 0, step, 2*step, ... capped at 1.0 (the
/// endpoint is included when the grid lands on it).
pub fn sweep_thresholds(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "sweep step {step} is outside (0, 1]"
        )));
    }
    let n = (1.0 / step + 1e-9).floor() as usize;
    Ok((0..=n)
        .map(|i| {
            let t = i as f64 * step;
            if (t - 1.0).abs() < 1e-9 {
                1.0
            } else {
                t
            }
        })
        .collect())
}

/// Correctness of a metric value at a sweep threshold: strictly greater at
/// t = 0 (any positive value counts), at-least elsewhere.
pub fn correct_at(value: f64, threshold: f64) -> bool {
    if threshold == 0.0 {
        value > 0.0
    } else {
        value >= threshold
    }
}

/// Classify every sample at every grid threshold and report region
/// proportions.
pub fn threshold_sweep(samples: &[VariantMap<f64>], step: f64) -> Result<SweepSeries> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("no samples to sweep".to_string()));
    }
    let thresholds = sweep_thresholds(step)?;
    let n = samples.len() as f64;
    let rows = thresholds
        .into_iter()
        .map(|t| {
            let mut tally = [0usize; 4];
            for values in samples {
                let pattern = OutcomePattern {
                    original: correct_at(values.original, t),
                    model: correct_at(values.model_rewrite, t),
                    human: correct_at(values.human_rewrite, t),
                };
                let idx = match region_of(pattern) {
                    SweepRegion::QaError => 0,
                    SweepRegion::QrError => 1,
                    SweepRegion::CorrectWithRewriting => 2,
                    SweepRegion::CorrectWithoutRewriting => 3,
                };
                tally[idx] += 1;
            }
            SweepRow {
                threshold: t,
                qa_error: tally[0] as f64 / n,
                qr_error: tally[1] as f64 / n,
                correct_with_rewriting: tally[2] as f64 / n,
                correct_without_rewriting: tally[3] as f64 / n,
            }
        })
        .collect();
    Ok(SweepSeries { step, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vm(o: f64, m: f64, h: f64) -> VariantMap<f64> {
        VariantMap::new(o, m, h)
    }

    fn rule(s: &str) -> CorrectnessRule {
        s.parse().unwrap()
    }

    #[test]
    fn rule_parsing_roundtrip() {
        let r = rule("p@1=1");
        assert_eq!(r.metric, MetricId::PrecisionAt1);
        assert_eq!(r.comparator, Comparator::Equals);
        assert_eq!(r.threshold, 1.0);
        let r = rule("ndcg@3>=0.5");
        assert_eq!(r.comparator, Comparator::AtLeast);
        let r = rule("f1>0");
        assert_eq!(r.metric, MetricId::SpanF1);
        assert_eq!(r.comparator, Comparator::StrictlyGreater);
        // display form re-parses
        for s in ["p@1=1", "ndcg@3>0", "ndcg@3>=0.5", "span_f1=1"] {
            let r = rule(s);
            assert_eq!(rule(&r.to_string()), r);
        }
        assert!("p@1".parse::<CorrectnessRule>().is_err());
        assert!("p@1=1.5".parse::<CorrectnessRule>().is_err());
        assert!("mrr>0".parse::<CorrectnessRule>().is_err());
        let list = CorrectnessRule::parse_list("p@1=1,ndcg@3>=0.5").unwrap();
        assert_eq!(list.len(), 2);
    }

    #[test]
    fn correctness_patterns_and_bins() {
        let p = evaluate_correctness(&vm(0.0, 0.2, 0.6), &rule("ndcg@3>=0.5"));
        assert_eq!((p.original, p.model, p.human), (false, false, true));
        assert_eq!(p.bin(), 4);

        let p = evaluate_correctness(&vm(1.0, 1.0, 1.0), &rule("p@1=1"));
        assert_eq!(p.bin(), 7);

        // boundary is inclusive for >=
        let p = evaluate_correctness(&vm(0.5, 0.5, 0.5), &rule("ndcg@3>=0.5"));
        assert!(p.original && p.model && p.human);

        // equals uses the tolerance: 2/3 computed two ways still matches
        let r = CorrectnessRule::new(MetricId::SpanF1, Comparator::Equals, 2.0 / 3.0).unwrap();
        assert!(r.satisfied(2.0 * (1.0 * 0.5) / 1.5));
    }

    #[test]
    fn pattern_bin_roundtrip_and_labels() {
        for bin in 0..8 {
            assert_eq!(OutcomePattern::from_bin(bin).bin(), bin);
        }
        assert_eq!(OutcomePattern::from_bin(4).label(), "××✓");
        assert_eq!(OutcomePattern::from_bin(7).label(), "✓✓✓");
    }

    fn sample(qid: &str, flagged: bool, p1: (f64, f64, f64)) -> BreakdownSample {
        let mut values = BTreeMap::new();
        values.insert(MetricId::PrecisionAt1, vm(p1.0, p1.1, p1.2));
        BreakdownSample {
            qid: qid.to_string(),
            human_equals_original: flagged,
            values,
        }
    }

    #[test]
    fn single_sample_breakdown() {
        let table =
            build_breakdown(&[sample("q", false, (1.0, 1.0, 1.0))], &[rule("p@1=1")]).unwrap();
        assert_eq!(
            table.column(0)[7],
            BinCell {
                count: 1,
                human_equals_original: 0
            }
        );
        assert_eq!(table.total, 1);
        assert_eq!(table.total_human_equals_original, 0);
    }

    #[test]
    fn flag_inconsistency_is_reported_not_rejected() {
        // consistent corpus: flagged samples have equal original/human values
        let consistent = vec![
            sample("q1", true, (1.0, 0.0, 1.0)),
            sample("q2", false, (0.0, 1.0, 1.0)),
        ];
        let table = build_breakdown(&consistent, &[rule("p@1=1")]).unwrap();
        assert!(table.diagnostics.is_empty());

        // flagged sample where the human run succeeded but the original failed
        let inconsistent = vec![sample("q3", true, (0.0, 1.0, 1.0))];
        let table = build_breakdown(&inconsistent, &[rule("p@1=1")]).unwrap();
        assert_eq!(table.diagnostics.len(), 1);
        assert!(
            table.diagnostics[0].contains("q3"),
            "{:?}",
            table.diagnostics
        );
    }

    #[test]
    fn breakdown_errors_on_missing_metric() {
        let err = build_breakdown(&[sample("q7", false, (1.0, 1.0, 1.0))], &[rule("ndcg@3>0")])
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("q7") && msg.contains("ndcg@3"), "{msg}");
    }

    #[test]
    fn impact_fraction_requires_human_correct_samples() {
        let column = {
            let mut c = [BinCell::default(); 8];
            c[0] = BinCell {
                count: 5,
                human_equals_original: 1,
            };
            c
        };
        assert!(matches!(
            rewriting_impact_fraction(&column, ImpactScope::All),
            Err(Error::UndefinedFraction(_))
        ));
    }

    #[test]
    fn impact_fraction_equal_scopes_without_flags() {
        let mut column = [BinCell::default(); 8];
        column[4] = BinCell {
            count: 3,
            human_equals_original: 0,
        };
        column[7] = BinCell {
            count: 7,
            human_equals_original: 0,
        };
        let all = rewriting_impact_fraction(&column, ImpactScope::All).unwrap();
        let differs = rewriting_impact_fraction(&column, ImpactScope::HumanDiffers).unwrap();
        assert_eq!(all, differs);
        assert!((all - 0.7).abs() < 1e-12);
    }

    #[test]
    fn impact_fraction_zero_denominator_after_subtraction() {
        let mut column = [BinCell::default(); 8];
        column[7] = BinCell {
            count: 4,
            human_equals_original: 4,
        };
        assert!(rewriting_impact_fraction(&column, ImpactScope::All).is_ok());
        assert!(matches!(
            rewriting_impact_fraction(&column, ImpactScope::HumanDiffers),
            Err(Error::UndefinedFraction(_))
        ));
    }

    #[test]
    fn sweep_degenerate_cases() {
        // all human values zero: everything is an answering error at every threshold
        let series = threshold_sweep(&[vm(0.3, 0.9, 0.0), vm(0.0, 0.0, 0.0)], 0.02).unwrap();
        assert_eq!(series.rows.len(), 51);
        assert!(series.rows.iter().all(|r| r.qa_error == 1.0));

        // single sample (0, 1, 1): rewriting fixes it at every threshold
        let series = threshold_sweep(&[vm(0.0, 1.0, 1.0)], 0.02).unwrap();
        assert!(series.rows.iter().all(|r| r.correct_with_rewriting == 1.0));
    }

    #[test]
    fn sweep_grid_snaps_to_unit_interval() {
        let grid = sweep_thresholds(0.02).unwrap();
        assert_eq!(grid.len(), 51);
        assert_eq!(grid[0], 0.0);
        assert_eq!(*grid.last().unwrap(), 1.0);
        assert!(sweep_thresholds(0.0).is_err());
        assert!(sweep_thresholds(1.5).is_err());
    }

    #[test]
    fn markdown_rendering_shape() {
        let samples = vec![
            sample("q1", true, (1.0, 1.0, 1.0)),
            sample("q2", false, (0.0, 1.0, 1.0)),
        ];
        let md = build_breakdown(&samples, &[rule("p@1=1")])
            .unwrap()
            .render_markdown();
        assert!(md.contains("| ✓ | ✓ | ✓ | 1 (1) |"), "{md}");
        assert!(md.contains("| × | ✓ | ✓ | 1 |"), "{md}");
        assert!(md.lines().last().unwrap().contains("Total 2 (1)"), "{md}");
    }

    fn value_strategy() -> impl Strategy<Value = f64> {
        prop_oneof![Just(0.0), Just(1.0), 0.0f64..=1.0]
    }

    proptest! {
        #[test]
        fn bins_partition_the_sample_set(
            flags in proptest::collection::vec(any::<bool>(), 1..40),
            values in proptest::collection::vec((value_strategy(), value_strategy(), value_strategy()), 1..40),
        ) {
            let n = flags.len().min(values.len());
            let samples: Vec<BreakdownSample> = (0..n)
                .map(|i| sample(&format!("q{i}"), flags[i], values[i]))
                .collect();
            let rules = [rule("p@1=1"), rule("p@1>0")];
            let table = build_breakdown(&samples, &rules).unwrap();
            let flagged = flags[..n].iter().filter(|&&f| f).count();
            for column in &table.columns {
                prop_assert_eq!(column.iter().map(|c| c.count).sum::<usize>(), n);
                prop_assert_eq!(
                    column.iter().map(|c| c.human_equals_original).sum::<usize>(),
                    flagged
                );
                for cell in column {
                    prop_assert!(cell.human_equals_original <= cell.count);
                }
            }
        }

        #[test]
        fn sweep_partitions_and_is_monotone(
            values in proptest::collection::vec((value_strategy(), value_strategy(), value_strategy()), 1..60),
        ) {
            let samples: Vec<VariantMap<f64>> =
                values.iter().map(|&(o, m, h)| vm(o, m, h)).collect();
            let series = threshold_sweep(&samples, 0.02).unwrap();
            let mut prev_qa = 0.0;
            let mut prev_without = 1.0;
            for row in &series.rows {
                let sum = row.qa_error + row.qr_error + row.correct_with_rewriting + row.correct_without_rewriting;
                prop_assert!((sum - 1.0).abs() < 1e-9);
                prop_assert!(row.qa_error >= prev_qa - 1e-12);
                prop_assert!(row.correct_without_rewriting <= prev_without + 1e-12);
                prev_qa = row.qa_error;
                prev_without = row.correct_without_rewriting;
            }
        }

        #[test]
        fn sweep_matches_direct_classification(
            values in proptest::collection::vec((value_strategy(), value_strategy(), value_strategy()), 1..30),
        ) {
            let samples: Vec<VariantMap<f64>> =
                values.iter().map(|&(o, m, h)| vm(o, m, h)).collect();
            let series = threshold_sweep(&samples, 0.1).unwrap();
            for row in &series.rows {
                let mut tally = [0usize; 4];
                for v in &samples {
                    let pattern = OutcomePattern {
                        original: correct_at(v.original, row.threshold),
                        model: correct_at(v.model_rewrite, row.threshold),
                        human: correct_at(v.human_rewrite, row.threshold),
                    };
                    tally[match region_of(pattern) {
                        SweepRegion::QaError => 0,
                        SweepRegion::QrError => 1,
                        SweepRegion::CorrectWithRewriting => 2,
                        SweepRegion::CorrectWithoutRewriting => 3,
                    }] += 1;
                }
                let n = samples.len() as f64;
                prop_assert_eq!(row.qa_error, tally[0] as f64 / n);
                prop_assert_eq!(row.qr_error, tally[1] as f64 / n);
                prop_assert_eq!(row.correct_with_rewriting, tally[2] as f64 / n);
                prop_assert_eq!(row.correct_without_rewriting, tally[3] as f64 / n);
            }
        }
    }
}
