//! Retrieval and answer-quality metrics, and their aggregation.
//!
//! ROUGE here uses the corpus tokenizer with no stemming or stop-word
//! removal, and clipped multiset counting. ROUGE-SU4 units are skip-bigrams
//! with at most four tokens skipped, plus one `BOS`-anchored pair per token
//! so that unigrams count as well.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::corpus::tokenize;

pub const SU_MAX_SKIP: usize = 4;
const BOS: &str = "\u{0}<s>";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetrievalMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub hit: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RougeVariant {
    Rouge2,
    RougeSu4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RougeScores {
    pub variant: RougeVariant,
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Precision and recall of retrieved ids against the gold set. Repeated ids
/// in `retrieved` count once.
pub fn retrieval_metrics<S: AsRef<str>>(retrieved: &[S], gold: &BTreeSet<String>) -> RetrievalMetrics {
    let unique: HashSet<&str> = retrieved.iter().map(AsRef::as_ref).collect();
    let overlap = unique.iter().filter(|id| gold.contains(**id)).count();
    let precision = ratio(overlap, unique.len());
    let recall = ratio(overlap, gold.len());
    RetrievalMetrics {
        precision,
        recall,
        f1: harmonic(precision, recall),
        hit: overlap > 0,
    }
}

fn counts<T: Eq + Hash>(units: impl IntoIterator<Item = T>) -> HashMap<T, usize> {
    let mut m = HashMap::new();
    for u in units {
        *m.entry(u).or_insert(0) += 1;
    }
    m
}

fn overlap_scores<T: Eq + Hash>(
    variant: RougeVariant,
    cand: HashMap<T, usize>,
    reference: HashMap<T, usize>,
) -> RougeScores {
    let cand_total: usize = cand.values().sum();
    let ref_total: usize = reference.values().sum();
    let hits: usize = cand
        .iter()
        .map(|(u, &n)| n.min(reference.get(u).copied().unwrap_or(0)))
        .sum();
    let recall = ratio(hits, ref_total);
    let precision = ratio(hits, cand_total);
    RougeScores {
        variant,
        recall,
        precision,
        f1: harmonic(precision, recall),
    }
}

fn bigrams(tokens: &[String]) -> Vec<(&str, &str)> {
    tokens.windows(2).map(|w| (w[0].as_str(), w[1].as_str())).collect()
}

fn su_units(tokens: &[String]) -> Vec<(&str, &str)> {
    let mut units: Vec<(&str, &str)> = tokens.iter().map(|t| (BOS, t.as_str())).collect();
    for i in 0..tokens.len() {
        let end = (i + SU_MAX_SKIP + 2).min(tokens.len());
        for j in i + 1..end {
            units.push((tokens[i].as_str(), tokens[j].as_str()));
        }
    }
    units
}

pub fn rouge2(candidate: &str, reference: &str) -> RougeScores {
    let c = tokenize(candidate);
    let r = tokenize(reference);
    overlap_scores(RougeVariant::Rouge2, counts(bigrams(&c)), counts(bigrams(&r)))
}

pub fn rouge_su4(candidate: &str, reference: &str) -> RougeScores {
    let c = tokenize(candidate);
    let r = tokenize(reference);
    overlap_scores(RougeVariant::RougeSu4, counts(su_units(&c)), counts(su_units(&r)))
}

/// Metrics for one question of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionMetrics {
    pub retrieval: RetrievalMetrics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rouge2: Option<RougeScores>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rouge_su4: Option<RougeScores>,
    pub completion_tokens: u64,
    pub simulations_used: usize,
}

/// Unrounded means over one run's questions, as fractions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricMeans {
    pub questions: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub hit_rate: f64,
    pub rouge2_r: Option<f64>,
    pub rouge2_f1: Option<f64>,
    pub rouge_su4_r: Option<f64>,
    pub rouge_su4_f1: Option<f64>,
    pub tokens_per_question: f64,
    pub simulations_used: f64,
}

/// Report block: metrics in percent, everything rounded to two decimals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub questions: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub hit_rate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rouge2_r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rouge2_f1: Option<f64>,
    #[serde(default, rename = "rougeSU4_r", skip_serializing_if = "Option::is_none")]
    pub rouge_su4_r: Option<f64>,
    #[serde(default, rename = "rougeSU4_f1", skip_serializing_if = "Option::is_none")]
    pub rouge_su4_f1: Option<f64>,
    pub tokens_per_question: f64,
    pub simulations_used: f64,
}

fn mean(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values
        .into_iter()
        .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

impl MetricMeans {
    /// Means over the questions of one run. ROUGE means cover only questions
    /// that have ROUGE scores and are `None` when none do.
    pub fn over_questions(rows: &[QuestionMetrics]) -> Self {
        let m = |f: &dyn Fn(&QuestionMetrics) -> f64| mean(rows.iter().map(f)).unwrap_or(0.0);
        Self {
            questions: rows.len(),
            precision: m(&|q| q.retrieval.precision),
            recall: m(&|q| q.retrieval.recall),
            f1: m(&|q| q.retrieval.f1),
            hit_rate: m(&|q| if q.retrieval.hit { 1.0 } else { 0.0 }),
            rouge2_r: mean(rows.iter().filter_map(|q| q.rouge2.map(|s| s.recall))),
            rouge2_f1: mean(rows.iter().filter_map(|q| q.rouge2.map(|s| s.f1))),
            rouge_su4_r: mean(rows.iter().filter_map(|q| q.rouge_su4.map(|s| s.recall))),
            rouge_su4_f1: mean(rows.iter().filter_map(|q| q.rouge_su4.map(|s| s.f1))),
            tokens_per_question: m(&|q| q.completion_tokens as f64),
            simulations_used: m(&|q| q.simulations_used as f64),
        }
    }

    /// Mean of per-seed means.
    pub fn over_seeds(runs: &[MetricMeans]) -> Self {
        let m = |f: &dyn Fn(&MetricMeans) -> f64| mean(runs.iter().map(f)).unwrap_or(0.0);
        let opt = |f: &dyn Fn(&MetricMeans) -> Option<f64>| mean(runs.iter().filter_map(f));
        Self {
            questions: runs.iter().map(|r| r.questions).sum(),
            precision: m(&|r| r.precision),
            recall: m(&|r| r.recall),
            f1: m(&|r| r.f1),
            hit_rate: m(&|r| r.hit_rate),
            rouge2_r: opt(&|r| r.rouge2_r),
            rouge2_f1: opt(&|r| r.rouge2_f1),
            rouge_su4_r: opt(&|r| r.rouge_su4_r),
            rouge_su4_f1: opt(&|r| r.rouge_su4_f1),
            tokens_per_question: m(&|r| r.tokens_per_question),
            simulations_used: m(&|r| r.simulations_used),
        }
    }

    pub fn report(&self) -> AggregateReport {
        let pct = |x: f64| round2(x * 100.0);
        AggregateReport {
            questions: self.questions,
            precision: pct(self.precision),
            recall: pct(self.recall),
            f1: pct(self.f1),
            hit_rate: pct(self.hit_rate),
            rouge2_r: self.rouge2_r.map(pct),
            rouge2_f1: self.rouge2_f1.map(pct),
            rouge_su4_r: self.rouge_su4_r.map(pct),
            rouge_su4_f1: self.rouge_su4_f1.map(pct),
            tokens_per_question: round2(self.tokens_per_question),
            simulations_used: round2(self.simulations_used),
        }
    }
}

/// Per-question metrics for `retrieved`/`answer` against a question's labels.
pub fn question_metrics(
    retrieved: &[String],
    gold: &BTreeSet<String>,
    answer: Option<&str>,
    ideal: Option<&str>,
    completion_tokens: u64,
    simulations_used: usize,
) -> QuestionMetrics {
    let (r2, su4) = match (answer, ideal) {
        (Some(a), Some(i)) => (Some(rouge2(a, i)), Some(rouge_su4(a, i))),
        _ => (None, None),
    };
    QuestionMetrics {
        retrieval: retrieval_metrics(retrieved, gold),
        rouge2: r2,
        rouge_su4: su4,
        completion_tokens,
        simulations_used,
    }
}

/// Aggregates per-question metrics of one or more seeded runs.
pub fn aggregate(runs: &[Vec<QuestionMetrics>]) -> AggregateReport {
    let per_seed: Vec<MetricMeans> = runs.iter().map(|r| MetricMeans::over_questions(r)).collect();
    MetricMeans::over_seeds(&per_seed).report()
}
