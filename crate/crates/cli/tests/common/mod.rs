//! Shared helpers for the CLI integration tests.
//!
//! Each test target compiles this module independently and uses a different
//! subset of it.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Output;

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_rewrite-probe")
}

pub struct CmdResult {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: &[&str]) -> CmdResult {
    let Output {
        status,
        stdout,
        stderr,
    } = std::process::Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs");
    CmdResult {
        code: status.code().expect("exit code"),
        stdout: String::from_utf8(stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(stderr).expect("utf-8 stderr"),
    }
}

/// Argument vector for the synthetic retrieval corpus, reading inputs from
/// `input_dir` and writing artifacts to `out`.
pub fn retrieval_args(input_dir: &Path, out: &Path) -> Vec<String> {
    let p = |name: &str| input_dir.join(name).display().to_string();
    vec![
        "--task".into(),
        "retrieval".into(),
        "--triples".into(),
        p("triples.jsonl"),
        "--qrels".into(),
        p("qrels.txt"),
        "--run-original".into(),
        p("run_original.txt"),
        "--run-model".into(),
        p("run_model.txt"),
        "--run-human".into(),
        p("run_human.txt"),
        "--out".into(),
        out.display().to_string(),
    ]
}

pub fn reading_args(input_dir: &Path, out: &Path) -> Vec<String> {
    let p = |name: &str| input_dir.join(name).display().to_string();
    vec![
        "--task".into(),
        "reading".into(),
        "--triples".into(),
        p("triples.jsonl"),
        "--gold".into(),
        p("gold.jsonl"),
        "--spans-original".into(),
        p("spans_original.jsonl"),
        "--spans-model".into(),
        p("spans_model.jsonl"),
        "--spans-human".into(),
        p("spans_human.jsonl"),
        "--out".into(),
        out.display().to_string(),
    ]
}

pub fn run_owned(subcommand: &str, args: &[String]) -> CmdResult {
    let mut full: Vec<&str> = vec![subcommand];
    full.extend(args.iter().map(String::as_str));
    run(&full)
}
