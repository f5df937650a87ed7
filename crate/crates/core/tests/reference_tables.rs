//! Reproduces the reference breakdown tables and rewriting-impact fractions
//! from the outcome-record fixtures shipped in `fixtures/`: a CAsT 2019
//! passage-retrieval system (173 questions) and a CANARD reading
//! comprehension system (5571 questions).

use std::fs::File;
use std::io::BufReader;

use rewrite_probe_core::breakdown::{
    build_breakdown, rewriting_impact_fraction, BreakdownTable, CorrectnessRule, ImpactScope,
};
use rewrite_probe_core::ingest::parse_outcome_records;

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn load_table(file: &str, rules: &str) -> BreakdownTable {
    let path = fixture(file);
    let reader = BufReader::new(File::open(&path).unwrap_or_else(|e| panic!("{path}: {e}")));
    let samples = parse_outcome_records(reader, file).expect("fixture parses");
    let rules = CorrectnessRule::parse_list(rules).expect("rules parse");
    build_breakdown(&samples, &rules).expect("classification succeeds")
}

fn retrieval_table() -> BreakdownTable {
    load_table(
        "cast_retrieval_outcomes.jsonl",
        "p@1=1,ndcg@3>0,ndcg@3>=0.5,ndcg@3=1",
    )
}

fn reading_table() -> BreakdownTable {
    load_table(
        "canard_reading_outcomes.jsonl",
        "span_f1>0,span_f1>=0.5,span_f1=1",
    )
}

fn assert_column(table: &BreakdownTable, rule_index: usize, expected: [(usize, usize); 8]) {
    let column = table.column(rule_index);
    for (bin, &(count, subcount)) in expected.iter().enumerate() {
        assert_eq!(
            (column[bin].count, column[bin].human_equals_original),
            (count, subcount),
            "rule {} bin {bin}",
            table.rules[rule_index]
        );
    }
}

#[test]
fn retrieval_breakdown_counts() {
    let table = retrieval_table();
    assert_eq!(table.total, 173);
    assert_eq!(table.total_human_equals_original, 53);
    assert_column(
        &table,
        0,
        [
            (49, 14),
            (0, 0),
            (2, 2),
            (0, 0),
            (19, 0),
            (0, 0),
            (48, 0),
            (55, 37),
        ],
    );
    assert_column(
        &table,
        1,
        [
            (10, 1),
            (0, 0),
            (0, 0),
            (1, 0),
            (10, 0),
            (1, 0),
            (63, 0),
            (88, 52),
        ],
    );
    assert_column(
        &table,
        2,
        [
            (55, 20),
            (0, 0),
            (1, 0),
            (1, 0),
            (25, 0),
            (0, 0),
            (47, 0),
            (44, 33),
        ],
    );
    assert_column(
        &table,
        3,
        [
            (154, 49),
            (0, 0),
            (0, 0),
            (0, 0),
            (4, 0),
            (0, 0),
            (11, 0),
            (4, 4),
        ],
    );
}

#[test]
fn reading_breakdown_counts() {
    let table = reading_table();
    assert_eq!(table.total, 5571);
    assert_eq!(table.total_human_equals_original, 666);
    assert_column(
        &table,
        0,
        [
            (847, 136),
            (174, 0),
            (19, 0),
            (135, 0),
            (141, 0),
            (65, 1),
            (226, 0),
            (3964, 529),
        ],
    );
    assert_column(
        &table,
        1,
        [
            (1855, 235),
            (193, 0),
            (35, 2),
            (153, 0),
            (288, 0),
            (57, 1),
            (324, 0),
            (2666, 428),
        ],
    );
    assert_column(
        &table,
        2,
        [
            (2701, 332),
            (181, 0),
            (40, 1),
            (120, 0),
            (232, 0),
            (40, 0),
            (269, 0),
            (1988, 333),
        ],
    );
}

fn rounded_impacts(table: &BreakdownTable, scope: ImpactScope) -> Vec<f64> {
    table
        .columns
        .iter()
        .map(|column| {
            let v = rewriting_impact_fraction(column, scope).expect("fraction defined");
            (v * 100.0).round() / 100.0
        })
        .collect()
}

#[test]
fn retrieval_impact_fractions() {
    let table = retrieval_table();
    assert_eq!(
        rounded_impacts(&table, ImpactScope::All),
        vec![0.45, 0.55, 0.38, 0.21]
    );
    assert_eq!(
        rounded_impacts(&table, ImpactScope::HumanDiffers),
        vec![0.21, 0.34, 0.13, 0.00]
    );
}

#[test]
fn reading_impact_fractions() {
    let table = reading_table();
    assert_eq!(
        rounded_impacts(&table, ImpactScope::All),
        vec![0.92, 0.82, 0.80]
    );
    assert_eq!(
        rounded_impacts(&table, ImpactScope::HumanDiffers),
        vec![0.91, 0.79, 0.77]
    );
    // the exact-match column restricted to genuinely rewritten questions:
    // (40 + 1988 - 333) / (232 + 40 + 269 + 1988 - 333)
    let exact = rewriting_impact_fraction(table.column(2), ImpactScope::HumanDiffers).unwrap();
    assert!((exact - 1695.0 / 2196.0).abs() < 1e-12);
}

#[test]
fn rendered_totals_and_partition_invariants() {
    for (table, total, flagged) in [(retrieval_table(), 173, 53), (reading_table(), 5571, 666)] {
        let markdown = table.render_markdown();
        assert!(
            markdown
                .lines()
                .last()
                .unwrap()
                .contains(&format!("Total {total} ({flagged})")),
            "{markdown}"
        );
        for column in &table.columns {
            assert_eq!(column.iter().map(|c| c.count).sum::<usize>(), total);
            assert_eq!(
                column
                    .iter()
                    .map(|c| c.human_equals_original)
                    .sum::<usize>(),
                flagged
            );
            for cell in column {
                assert!(cell.human_equals_original <= cell.count);
            }
        }
    }
}

#[test]
fn breakdown_json_is_consistent() {
    let table = retrieval_table();
    let value = table.to_json();
    assert_eq!(value["totals"]["count"], 173);
    assert_eq!(value["totals"]["human_equals_original"], 53);
    assert_eq!(value["rules"].as_array().unwrap().len(), 4);
    assert_eq!(value["bins"].as_array().unwrap().len(), 8);
    assert_eq!(value["bins"][7]["pattern"], "✓✓✓");
    assert_eq!(value["bins"][7]["counts"][0], 55);
    assert_eq!(value["bins"][7]["subcounts"][0], 37);
    let impact = value["impact"].as_array().unwrap();
    assert_eq!(impact.len(), 4);
    assert!((impact[0]["all"].as_f64().unwrap() - 55.0 / 122.0).abs() < 1e-12);
}
