//! Analysis toolkit for probing the robustness of conversational question
//! answering systems through question rewrites.
//!
//! Every conversational turn comes in three formulations: the original
//! (possibly ambiguous) question, an automatic rewrite, and a human rewrite.
//! This crate ingests externally produced retrieval runs, relevance
//! judgments, and answer-span predictions for all three formulations,
//! scores them (NDCG@k, P@1, answer-set recall, span F1), classifies each
//! question into one of eight correctness-pattern bins, and derives
//! breakdown tables, rewriting-impact fractions, threshold sweeps, and
//! correlations between question similarity and answer quality.

pub mod breakdown;
pub mod correlation;
pub mod error;
pub mod export;
pub mod ingest;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod similarity;

pub use error::{Error, Result};
