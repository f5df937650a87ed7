//! rewrite-probe: robustness analysis of conversational QA systems from
//! run/prediction files for three question formulations (original, model
//! rewrite, human rewrite).
//!
//! Exit codes: 0 success, 1 usage error, 2 data error.

mod svg;

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rewrite_probe_core::breakdown::{build_breakdown, threshold_sweep, CorrectnessRule};
use rewrite_probe_core::correlation::correlate;
use rewrite_probe_core::error::Error;
use rewrite_probe_core::export::{
    correlation_report_json, write_metrics_csv, write_scatter_csv, write_sweep_csv,
};
use rewrite_probe_core::ingest::{
    parse_embeddings, parse_gold, parse_qrels, parse_run_file, parse_spans, parse_stopwords,
    parse_triples, ValidationMode, ValidationReport,
};
use rewrite_probe_core::metrics::CutoffConfig;
use rewrite_probe_core::model::{
    EmbeddingStore, GoldAnswerSet, MetricId, SpanPredictionSet, Variant, VariantMap, Warnings,
};
use rewrite_probe_core::pipeline::{
    default_reading_rules, default_retrieval_rules, metric_rows, sweep_values, CorrelationSpec,
    QaMetric, ReadingCorpus, RetrievalCorpus,
};
use rewrite_probe_core::similarity::{SimilarityMetric, TokenizationPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Task {
    Retrieval,
    Reading,
}

impl std::fmt::Display for Task {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Task::Retrieval => "retrieval",
            Task::Reading => "reading",
        })
    }
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Which QA task the inputs belong to.
    #[arg(long, value_enum)]
    task: Task,

    /// Question triples (JSON lines).
    #[arg(long)]
    triples: PathBuf,

    /// Relevance judgments (retrieval task).
    #[arg(long)]
    qrels: Option<PathBuf>,

    /// Run file for the original questions (retrieval task).
    #[arg(long)]
    run_original: Option<PathBuf>,
    /// Run file for the model rewrites (retrieval task).
    #[arg(long)]
    run_model: Option<PathBuf>,
    /// Run file for the human rewrites (retrieval task).
    #[arg(long)]
    run_human: Option<PathBuf>,

    /// Gold answers (reading task, JSON lines).
    #[arg(long)]
    gold: Option<PathBuf>,
    /// Predicted spans for the original questions (reading task).
    #[arg(long)]
    spans_original: Option<PathBuf>,
    /// Predicted spans for the model rewrites (reading task).
    #[arg(long)]
    spans_model: Option<PathBuf>,
    /// Predicted spans for the human rewrites (reading task).
    #[arg(long)]
    spans_human: Option<PathBuf>,

    /// Question embeddings for the original questions (JSON lines).
    #[arg(long)]
    embeddings_original: Option<PathBuf>,
    /// Question embeddings for the model rewrites.
    #[arg(long)]
    embeddings_model: Option<PathBuf>,
    /// Question embeddings for the human rewrites.
    #[arg(long)]
    embeddings_human: Option<PathBuf>,

    /// Stop-word list, one token per line.
    #[arg(long)]
    stopwords: Option<PathBuf>,

    /// Also drop English articles (a/an/the) when tokenizing answer spans.
    #[arg(long)]
    strip_articles: bool,

    /// Fail on any coverage gap instead of dropping incomplete questions.
    #[arg(long)]
    strict: bool,

    /// Output directory for artifacts.
    #[arg(long)]
    out: Option<PathBuf>,

    /// NDCG cutoff.
    #[arg(long, default_value_t = 3)]
    ndcg_k: usize,

    /// Answer-set recall cutoff.
    #[arg(long, default_value_t = 1000)]
    recall_k: usize,

    /// Minimum grade for a document to count as relevant in binary metrics.
    #[arg(long, default_value_t = 2)]
    relevance_threshold: u32,
}

#[derive(Debug, Args)]
struct BreakdownArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Comma-separated correctness rules, e.g. "p@1=1,ndcg@3>=0.5".
    #[arg(long)]
    rules: Option<String>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Continuous metric to sweep (ndcg@K or span_f1).
    #[arg(long)]
    metric: Option<String>,

    /// Threshold grid step in (0, 1].
    #[arg(long, default_value_t = 0.02)]
    step: f64,
}

#[derive(Debug, Args)]
struct CorrelateArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Question-similarity metric: rouge1_recall, jaccard, or cosine.
    #[arg(long)]
    qr_metric: Option<String>,

    /// Answer-quality metric: p@1, ndcg@K, recall@K, span_f1, or span_jaccard.
    #[arg(long)]
    qa_metric: Option<String>,

    /// Human-correctness filter rule (e.g. "p@1=1"), or "none" to keep all
    /// questions.
    #[arg(long)]
    filter_rule: Option<String>,
}

#[derive(Debug, Parser)]
#[command(
    name = "rewrite-probe",
    version,
    about = "Analyze conversational QA robustness across question formulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute per-question metric values and write metrics.csv.
    Metrics(CommonArgs),
    /// Classify outcomes under correctness rules; write breakdown.json/.md.
    Breakdown(BreakdownArgs),
    /// Sweep correctness thresholds; write sweep.csv and sweep.svg.
    Sweep(SweepArgs),
    /// Correlate question similarity with answer quality; write report.json,
    /// scatter.csv, and scatter.svg.
    Correlate(CorrelateArgs),
    /// Report coverage gaps, duplicates, and input warnings.
    Validate(CommonArgs),
}

enum CliError {
    Usage(String),
    Data(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Data(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) => {
            eprintln!("usage error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Data(error)) => {
            eprintln!("error: {error}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Metrics(args) => cmd_metrics(args),
        Command::Breakdown(args) => cmd_breakdown(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Correlate(args) => cmd_correlate(args),
        Command::Validate(args) => cmd_validate(args),
    }
}

// ---------------------------------------------------------------- loading

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Data(Error::io(path.display().to_string(), e)))
}

fn require<'a>(path: &'a Option<PathBuf>, flag: &str, task: Task) -> CliResult<&'a PathBuf> {
    path.as_ref()
        .ok_or_else(|| CliError::Usage(format!("--{flag} is required for task {task}")))
}

fn name_of(path: &Path) -> String {
    path.display().to_string()
}

struct Inputs {
    retrieval: Option<RetrievalCorpus>,
    reading: Option<ReadingCorpus>,
    embeddings: Option<EmbeddingStore>,
    warnings: Warnings,
}

fn load_inputs(args: &CommonArgs) -> CliResult<Inputs> {
    let mut warnings = Warnings::new();
    let triples = parse_triples(open(&args.triples)?, &name_of(&args.triples))?;

    let mut inputs = Inputs {
        retrieval: None,
        reading: None,
        embeddings: load_embeddings(args)?,
        warnings: Warnings::new(),
    };

    match args.task {
        Task::Retrieval => {
            let qrels_path = require(&args.qrels, "qrels", args.task)?;
            let run_paths = VariantMap::new(
                require(&args.run_original, "run-original", args.task)?,
                require(&args.run_model, "run-model", args.task)?,
                require(&args.run_human, "run-human", args.task)?,
            );
            let runs = VariantMap::try_from_fn(|v| {
                let path = *run_paths.get(v);
                parse_run_file(
                    open(path).map_err(unwrap_cli)?,
                    v,
                    &name_of(path),
                    &mut warnings,
                )
            })
            .map_err(CliError::Data)?;
            let mut judgments =
                parse_qrels(open(qrels_path)?, &name_of(qrels_path), &mut warnings)?;
            judgments.binarization_threshold = args.relevance_threshold;
            inputs.retrieval = Some(RetrievalCorpus {
                triples,
                runs,
                judgments,
            });
        }
        Task::Reading => {
            let gold_path = require(&args.gold, "gold", args.task)?;
            let span_paths = VariantMap::new(
                require(&args.spans_original, "spans-original", args.task)?,
                require(&args.spans_model, "spans-model", args.task)?,
                require(&args.spans_human, "spans-human", args.task)?,
            );
            let mut spans = SpanPredictionSet::default();
            for v in Variant::ALL {
                let path = *span_paths.get(v);
                spans.insert_file(v, parse_spans(open(path)?, &name_of(path))?);
            }
            let gold: GoldAnswerSet = parse_gold(open(gold_path)?, &name_of(gold_path))?;
            inputs.reading = Some(ReadingCorpus {
                triples,
                spans,
                gold,
            });
        }
    }
    inputs.warnings = warnings;
    Ok(inputs)
}

// `VariantMap::try_from_fn` works over core errors; smuggle I/O failures
// through and re-raise them as data errors (unreadable input file).
fn unwrap_cli(e: CliError) -> Error {
    match e {
        CliError::Data(error) => error,
        CliError::Usage(message) => Error::InvalidInput(message),
    }
}

fn load_embeddings(args: &CommonArgs) -> CliResult<Option<EmbeddingStore>> {
    let paths = [
        (Variant::Original, &args.embeddings_original),
        (Variant::ModelRewrite, &args.embeddings_model),
        (Variant::HumanRewrite, &args.embeddings_human),
    ];
    if paths.iter().all(|(_, p)| p.is_none()) {
        return Ok(None);
    }
    let mut store = EmbeddingStore::default();
    for (variant, path) in paths {
        if let Some(path) = path {
            parse_embeddings(open(path)?, variant, &name_of(path), &mut store)?;
        }
    }
    Ok(Some(store))
}

fn policy_for(args: &CommonArgs) -> CliResult<TokenizationPolicy> {
    let mut policy = TokenizationPolicy::new();
    if let Some(path) = &args.stopwords {
        let words = parse_stopwords(open(path)?, &name_of(path))?;
        policy = policy.with_stopwords(words);
    }
    if args.strip_articles {
        policy = policy.with_articles_removed();
    }
    Ok(policy)
}

fn cutoffs(args: &CommonArgs) -> CliResult<CutoffConfig> {
    let cfg = CutoffConfig {
        ndcg_k: args.ndcg_k,
        recall_k: args.recall_k,
        binarization_grade: args.relevance_threshold,
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn mode_for(args: &CommonArgs) -> ValidationMode {
    if args.strict {
        ValidationMode::Strict
    } else {
        ValidationMode::Lenient
    }
}

fn out_dir(args: &CommonArgs) -> CliResult<&PathBuf> {
    let dir = args
        .out
        .as_ref()
        .ok_or_else(|| CliError::Usage("--out is required".to_string()))?;
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Data(Error::io(dir.display().to_string(), e)))?;
    Ok(dir)
}

fn write_artifact(dir: &Path, file: &str, contents: &[u8]) -> CliResult<PathBuf> {
    let path = dir.join(file);
    let mut out = File::create(&path)
        .map_err(|e| CliError::Data(Error::io(path.display().to_string(), e)))?;
    out.write_all(contents)
        .map_err(|e| CliError::Data(Error::io(path.display().to_string(), e)))?;
    Ok(path)
}

fn print_warnings(warnings: &Warnings) {
    for message in warnings.sorted() {
        eprintln!("warning: {message}");
    }
}

fn print_drop_note(report: &ValidationReport) {
    if !report.dropped.is_empty() {
        let qids: Vec<&str> = report.dropped.iter().map(String::as_str).collect();
        println!(
            "dropped {} question(s) with incomplete coverage: {}",
            report.dropped.len(),
            qids.join(", ")
        );
    }
}

/// Validated per-question metric samples for the requested metrics.
fn classified_samples(
    inputs: &Inputs,
    args: &CommonArgs,
    metrics: &[MetricId],
) -> CliResult<(
    Vec<rewrite_probe_core::breakdown::BreakdownSample>,
    ValidationReport,
)> {
    let cfg = cutoffs(args)?;
    let policy = policy_for(args)?;
    match args.task {
        Task::Retrieval => {
            let corpus = inputs.retrieval.as_ref().expect("retrieval corpus loaded");
            let report = corpus.validate(mode_for(args))?;
            let retained = corpus.retained_triples(&report);
            let samples = corpus.samples(&retained, metrics, &cfg)?;
            Ok((samples, report))
        }
        Task::Reading => {
            let corpus = inputs.reading.as_ref().expect("reading corpus loaded");
            let report = corpus.validate(mode_for(args))?;
            let retained = corpus.retained_triples(&report);
            let samples = corpus.samples(&retained, metrics, &policy)?;
            Ok((samples, report))
        }
    }
}

fn task_metrics(args: &CommonArgs) -> Vec<MetricId> {
    match args.task {
        Task::Retrieval => vec![MetricId::Ndcg { k: args.ndcg_k }, MetricId::PrecisionAt1],
        Task::Reading => vec![MetricId::SpanF1],
    }
}

fn check_metric_supported(task: Task, metric: MetricId) -> CliResult<()> {
    let supported = match task {
        Task::Retrieval => matches!(metric, MetricId::Ndcg { .. } | MetricId::PrecisionAt1),
        Task::Reading => metric == MetricId::SpanF1,
    };
    if supported {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "metric '{metric}' is not available for task {task}"
        )))
    }
}

// --------------------------------------------------------------- commands

fn cmd_metrics(args: CommonArgs) -> CliResult<()> {
    let inputs = load_inputs(&args)?;
    print_warnings(&inputs.warnings);
    let (samples, report) = classified_samples(&inputs, &args, &task_metrics(&args))?;
    print_drop_note(&report);
    if samples.is_empty() {
        return Err(CliError::Data(Error::Validation(
            "no questions left after validation".to_string(),
        )));
    }
    let rows = metric_rows(&samples);
    let mut buffer = Vec::new();
    write_metrics_csv(&mut buffer, &rows)?;
    let dir = out_dir(&args)?;
    let path = write_artifact(dir, "metrics.csv", &buffer)?;
    println!("wrote {} ({} rows)", path.display(), rows.len());
    Ok(())
}

fn cmd_breakdown(args: BreakdownArgs) -> CliResult<()> {
    let common = &args.common;
    let rules = match &args.rules {
        Some(spec) => {
            CorrectnessRule::parse_list(spec).map_err(|e| CliError::Usage(e.to_string()))?
        }
        None => match common.task {
            Task::Retrieval => default_retrieval_rules(common.ndcg_k),
            Task::Reading => default_reading_rules(),
        },
    };
    for rule in &rules {
        check_metric_supported(common.task, rule.metric)?;
    }
    let metrics: Vec<MetricId> = rules
        .iter()
        .map(|r| r.metric)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let inputs = load_inputs(common)?;
    print_warnings(&inputs.warnings);
    let (samples, report) = classified_samples(&inputs, common, &metrics)?;
    print_drop_note(&report);
    if samples.is_empty() {
        return Err(CliError::Data(Error::Validation(
            "no questions left after validation".to_string(),
        )));
    }
    let table = build_breakdown(&samples, &rules)?;
    for note in &table.diagnostics {
        eprintln!("warning: {note}");
    }

    let dir = out_dir(common)?;
    let json = serde_json::to_string_pretty(&table.to_json()).expect("table serializes") + "\n";
    let markdown = table.render_markdown();
    write_artifact(dir, "breakdown.json", json.as_bytes())?;
    write_artifact(dir, "breakdown.md", markdown.as_bytes())?;
    print!("{markdown}");
    println!("wrote {}/breakdown.json and breakdown.md", dir.display());
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> CliResult<()> {
    let common = &args.common;
    if !(args.step > 0.0 && args.step <= 1.0) {
        return Err(CliError::Usage(format!(
            "--step {} is outside (0, 1]",
            args.step
        )));
    }
    let metric = match &args.metric {
        Some(name) => name
            .parse::<MetricId>()
            .map_err(|e| CliError::Usage(e.to_string()))?,
        None => match common.task {
            Task::Retrieval => MetricId::Ndcg { k: common.ndcg_k },
            Task::Reading => MetricId::SpanF1,
        },
    };
    check_metric_supported(common.task, metric)?;
    if !matches!(metric, MetricId::Ndcg { .. } | MetricId::SpanF1) {
        return Err(CliError::Usage(format!(
            "sweep needs a continuous metric (ndcg@K or span_f1), got '{metric}'"
        )));
    }

    let inputs = load_inputs(common)?;
    print_warnings(&inputs.warnings);
    let (samples, report) = classified_samples(&inputs, common, &[metric])?;
    print_drop_note(&report);
    if samples.is_empty() {
        return Err(CliError::Data(Error::Validation(
            "no questions left after validation".to_string(),
        )));
    }
    let values = sweep_values(&samples, metric)?;
    let series = threshold_sweep(&values, args.step)?;

    let dir = out_dir(common)?;
    let mut buffer = Vec::new();
    write_sweep_csv(&mut buffer, &series)?;
    write_artifact(dir, "sweep.csv", &buffer)?;
    let figure = svg::stacked_area_svg(&series, &metric.to_string());
    write_artifact(dir, "sweep.svg", figure.as_bytes())?;
    println!(
        "wrote {}/sweep.csv ({} thresholds) and sweep.svg",
        dir.display(),
        series.rows.len()
    );
    Ok(())
}

fn cmd_correlate(args: CorrelateArgs) -> CliResult<()> {
    let common = &args.common;
    let qr: SimilarityMetric = args
        .qr_metric
        .as_deref()
        .unwrap_or("rouge1_recall")
        .parse()
        .map_err(|e: Error| CliError::Usage(e.to_string()))?;
    let qa: QaMetric = match &args.qa_metric {
        Some(name) => name
            .parse()
            .map_err(|e: Error| CliError::Usage(e.to_string()))?,
        None => match common.task {
            Task::Retrieval => QaMetric::RecallOverlap { k: common.recall_k },
            Task::Reading => QaMetric::SpanJaccard,
        },
    };
    let qa_ok = match common.task {
        Task::Retrieval => matches!(
            qa,
            QaMetric::PrecisionAt1 | QaMetric::Ndcg { .. } | QaMetric::RecallOverlap { .. }
        ),
        Task::Reading => matches!(qa, QaMetric::SpanF1 | QaMetric::SpanJaccard),
    };
    if !qa_ok {
        return Err(CliError::Usage(format!(
            "QA metric '{qa}' is not available for task {}",
            common.task
        )));
    }
    let filter: Option<CorrectnessRule> = match args.filter_rule.as_deref() {
        Some("none") => None,
        Some(spec) => Some(
            spec.parse()
                .map_err(|e: Error| CliError::Usage(e.to_string()))?,
        ),
        None => Some(match common.task {
            Task::Retrieval => "p@1=1".parse().expect("default rule parses"),
            Task::Reading => "span_f1>0".parse().expect("default rule parses"),
        }),
    };
    if let Some(rule) = &filter {
        check_metric_supported(common.task, rule.metric)?;
    }
    if qr == SimilarityMetric::Cosine {
        let have_both = common.embeddings_model.is_some() && common.embeddings_human.is_some();
        if !have_both {
            return Err(CliError::Usage(
                "--qr-metric cosine requires --embeddings-model and --embeddings-human".to_string(),
            ));
        }
    }

    let inputs = load_inputs(common)?;
    print_warnings(&inputs.warnings);
    let cfg = cutoffs(common)?;
    let policy = policy_for(common)?;
    let spec = CorrelationSpec {
        filter_metric: filter.as_ref().map(|r| r.metric),
        qr,
        qa,
    };
    let (points, report) = match common.task {
        Task::Retrieval => {
            let corpus = inputs.retrieval.as_ref().expect("retrieval corpus loaded");
            let report = corpus.validate(mode_for(common))?;
            let retained = corpus.retained_triples(&report);
            let points = corpus.correlation_inputs(
                &retained,
                &spec,
                &cfg,
                &policy,
                inputs.embeddings.as_ref(),
            )?;
            (points, report)
        }
        Task::Reading => {
            let corpus = inputs.reading.as_ref().expect("reading corpus loaded");
            let report = corpus.validate(mode_for(common))?;
            let retained = corpus.retained_triples(&report);
            let points =
                corpus.correlation_inputs(&retained, &spec, &policy, inputs.embeddings.as_ref())?;
            (points, report)
        }
    };
    print_drop_note(&report);

    let correlation = correlate(&points, filter.as_ref(), &qr.to_string(), &qa.to_string())?;

    let dir = out_dir(common)?;
    let json = serde_json::to_string_pretty(&correlation_report_json(&correlation))
        .expect("report serializes")
        + "\n";
    write_artifact(dir, "report.json", json.as_bytes())?;
    let mut buffer = Vec::new();
    write_scatter_csv(&mut buffer, &correlation)?;
    write_artifact(dir, "scatter.csv", &buffer)?;
    let figure = svg::scatter_svg(&correlation);
    write_artifact(dir, "scatter.svg", figure.as_bytes())?;
    println!(
        "n = {}, pearson_r = {:.6}; wrote {}/report.json, scatter.csv, scatter.svg",
        correlation.n,
        correlation.pearson_r,
        dir.display()
    );
    Ok(())
}

fn cmd_validate(args: CommonArgs) -> CliResult<()> {
    let inputs = load_inputs(&args)?;
    print_warnings(&inputs.warnings);
    let report = match args.task {
        Task::Retrieval => inputs
            .retrieval
            .as_ref()
            .expect("retrieval corpus loaded")
            .validate(mode_for(&args))?,
        Task::Reading => inputs
            .reading
            .as_ref()
            .expect("reading corpus loaded")
            .validate(mode_for(&args))?,
    };

    let mut lines: Vec<String> = report
        .missing
        .iter()
        .map(|(artifact, qid)| format!("question '{qid}' is missing from {artifact}"))
        .chain(
            report
                .unknown
                .iter()
                .map(|(artifact, qid)| format!("{artifact} covers unknown question '{qid}'")),
        )
        .collect();
    lines.sort();
    for line in &lines {
        println!("{line}");
    }
    for note in &report.advisory {
        println!("note: {note}");
    }
    if report.is_clean() {
        println!("0 issues");
    } else {
        println!(
            "{} issues; {} question(s) would be dropped",
            report.issue_count(),
            report.dropped.len()
        );
    }
    Ok(())
}
