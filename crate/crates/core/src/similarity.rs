//! Similarity between question formulations: ROUGE-1 recall, token Jaccard,
//! and embedding cosine.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Identifier of a question-similarity metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SimilarityMetric {
    Rouge1Recall,
    Jaccard,
    Cosine,
}

impl fmt::Display for SimilarityMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimilarityMetric::Rouge1Recall => "rouge1_recall",
            SimilarityMetric::Jaccard => "jaccard",
            SimilarityMetric::Cosine => "cosine",
        })
    }
}

impl FromStr for SimilarityMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rouge1_recall" | "rouge1" => Ok(SimilarityMetric::Rouge1Recall),
            "jaccard" => Ok(SimilarityMetric::Jaccard),
            "cosine" => Ok(SimilarityMetric::Cosine),
            other => Err(Error::InvalidInput(format!(
                "unknown similarity metric '{other}'"
            ))),
        }
    }
}

/// A similarity value in [0, 1] together with the metric that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityScore {
    pub value: f64,
    pub metric: SimilarityMetric,
}

/// How question and answer texts are split into tokens.
///
/// Tokenization splits on Unicode whitespace, then optionally folds case,
/// strips punctuation characters from each token, and removes stop-words.
/// Tokens that become empty are dropped. Applying a policy twice yields the
/// same tokens as applying it once.
#[derive(Debug, Clone, Default)]
pub struct TokenizationPolicy {
    pub case_fold: bool,
    pub strip_punctuation: bool,
    pub stopwords: BTreeSet<String>,
}

impl TokenizationPolicy {
    /// Case folding and punctuation stripping on, no stop-words.
    pub fn new() -> Self {
        TokenizationPolicy {
            case_fold: true,
            strip_punctuation: true,
            stopwords: BTreeSet::new(),
        }
    }

    /// Add stop-words, storing them in the normal form the tokenizer emits
    /// so that lookups match processed tokens.
    pub fn with_stopwords<I, S>(mut self, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let base = TokenizationPolicy {
            case_fold: self.case_fold,
            strip_punctuation: self.strip_punctuation,
            stopwords: BTreeSet::new(),
        };
        for word in words {
            for token in tokenize(word.as_ref(), &base) {
                self.stopwords.insert(token);
            }
        }
        self
    }

    /// Also drop English articles ("a", "an", "the").
    pub fn with_articles_removed(self) -> Self {
        self.with_stopwords(["a", "an", "the"])
    }
}

fn is_punctuation(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '\u{2018}'
                | '\u{2019}'
                | '\u{201C}'
                | '\u{201D}'
                | '\u{2013}'
                | '\u{2014}'
                | '\u{2026}'
                | '\u{00A1}'
                | '\u{00BF}'
                | '\u{00AB}'
                | '\u{00BB}'
        )
}

/// Split `text` into tokens under `policy`.
pub fn tokenize(text: &str, policy: &TokenizationPolicy) -> Vec<String> {
    text.split_whitespace()
        .filter_map(|raw| {
            let mut token = if policy.case_fold {
                raw.to_lowercase()
            } else {
                raw.to_string()
            };
            if policy.strip_punctuation {
                token.retain(|c| !is_punctuation(c));
            }
            if token.is_empty() || policy.stopwords.contains(&token) {
                None
            } else {
                Some(token)
            }
        })
        .collect()
}

pub(crate) fn token_counts(tokens: &[String]) -> BTreeMap<&str, usize> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for t in tokens {
        *counts.entry(t.as_str()).or_default() += 1;
    }
    counts
}

/// ROUGE-1 recall of `candidate` against `reference`: the fraction of
/// reference unigrams covered by the candidate, with clipped counts (each
/// reference token is matched at most its reference multiplicity).
pub fn rouge1_recall(
    candidate: &str,
    reference: &str,
    policy: &TokenizationPolicy,
) -> Result<SimilarityScore> {
    let ref_tokens = tokenize(reference, policy);
    if ref_tokens.is_empty() {
        return Err(Error::UndefinedMetric(
            "rouge1_recall: reference tokenizes to an empty sequence".to_string(),
        ));
    }
    let cand_tokens = tokenize(candidate, policy);
    let cand_counts = token_counts(&cand_tokens);
    let overlap: usize = token_counts(&ref_tokens)
        .iter()
        .map(|(token, &ref_count)| ref_count.min(cand_counts.get(token).copied().unwrap_or(0)))
        .sum();
    Ok(SimilarityScore {
        value: overlap as f64 / ref_tokens.len() as f64,
        metric: SimilarityMetric::Rouge1Recall,
    })
}

/// Jaccard similarity of the token sets of `a` and `b`. Two texts that both
/// tokenize to nothing are defined as identical (1.0).
pub fn jaccard_tokens(a: &str, b: &str, policy: &TokenizationPolicy) -> SimilarityScore {
    let set_a: BTreeSet<String> = tokenize(a, policy).into_iter().collect();
    let set_b: BTreeSet<String> = tokenize(b, policy).into_iter().collect();
    let union = set_a.union(&set_b).count();
    let value = if union == 0 {
        1.0
    } else {
        set_a.intersection(&set_b).count() as f64 / union as f64
    };
    SimilarityScore {
        value,
        metric: SimilarityMetric::Jaccard,
    }
}

/// Raw cosine similarity in [-1, 1]. Errors on dimension mismatch and on
/// all-zero vectors.
pub fn cosine_similarity(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::InvalidInput(format!(
            "cosine: dimension mismatch ({} vs {})",
            u.len(),
            v.len()
        )));
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let norm_u = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let norm_v = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm_u == 0.0 || norm_v == 0.0 {
        return Err(Error::InvalidInput("cosine: zero vector".to_string()));
    }
    Ok((dot / (norm_u * norm_v)).clamp(-1.0, 1.0))
}

/// Cosine mapped to [0, 1] via (x + 1) / 2, for reporting alongside the
/// other similarity metrics. The raw value is available from
/// [`cosine_similarity`].
pub fn cosine_score(u: &[f64], v: &[f64]) -> Result<SimilarityScore> {
    Ok(SimilarityScore {
        value: (cosine_similarity(u, v)? + 1.0) / 2.0,
        metric: SimilarityMetric::Cosine,
    })
}
