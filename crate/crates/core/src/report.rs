//! Run reports: per-question rows for every seed plus aggregate blocks.
//!
//! Reports carry everything needed to recompute metrics offline (retrieved
//! ids, answers, token counts), so `eval` reproduces `run` exactly.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Question;
use crate::error::{Error, Result};
use crate::metrics::{question_metrics, AggregateReport, MetricMeans, QuestionMetrics};
use crate::orchestrator::{Method, RetrievalOutcome};
use crate::tree::SelectionPolicy;

pub const REPORT_FORMAT: &str = "serts-report";
pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionRow {
    pub question_id: String,
    pub status: RowStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub doc_ids: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub answer: Option<String>,
    pub best_reward: u8,
    pub simulations_used: usize,
    pub llm_calls: u64,
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<QuestionMetrics>,
}

impl QuestionRow {
    pub fn from_outcome(outcome: &RetrievalOutcome) -> Self {
        Self {
            question_id: outcome.question_id.clone(),
            status: RowStatus::Ok,
            error: None,
            doc_ids: outcome.doc_ids.clone(),
            answer: outcome.answer.clone(),
            best_reward: outcome.best_reward,
            simulations_used: outcome.simulations_used,
            llm_calls: outcome.llm_calls,
            prompt_tokens: outcome.prompt_tokens,
            completion_tokens: outcome.completion_tokens,
            metrics: None,
        }
    }

    pub fn failed(question_id: &str, error: &Error) -> Self {
        Self {
            question_id: question_id.to_string(),
            status: RowStatus::Failed,
            error: Some(error.to_string()),
            doc_ids: Vec::new(),
            answer: None,
            best_reward: 0,
            simulations_used: 0,
            llm_calls: 0,
            prompt_tokens: 0,
            completion_tokens: 0,
            metrics: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedRun {
    pub seed: u64,
    pub failed: usize,
    pub aggregate: AggregateReport,
    pub questions: Vec<QuestionRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct UsageTotals {
    pub llm_calls: u64,
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub format: String,
    pub version: u32,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<SelectionPolicy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exploration_c: Option<f64>,
    pub seeds: Vec<u64>,
    pub usage: UsageTotals,
    pub aggregate: AggregateReport,
    pub runs: Vec<SeedRun>,
}

fn question_map(questions: &[Question]) -> HashMap<&str, &Question> {
    questions.iter().map(|q| (q.id.as_str(), q)).collect()
}

fn score_rows(rows: &mut [QuestionRow], questions: &HashMap<&str, &Question>) -> Result<Vec<QuestionMetrics>> {
    let mut scored = Vec::new();
    for row in rows.iter_mut() {
        let q = questions.get(row.question_id.as_str()).ok_or_else(|| {
            Error::Schema(format!("question {:?} is not in the questions file", row.question_id))
        })?;
        row.metrics = match row.status {
            RowStatus::Ok => {
                let m = question_metrics(
                    &row.doc_ids,
                    &q.gold_doc_ids,
                    row.answer.as_deref(),
                    q.ideal_answer.as_deref(),
                    row.completion_tokens,
                    row.simulations_used,
                );
                scored.push(m.clone());
                Some(m)
            }
            RowStatus::Failed => None,
        };
    }
    Ok(scored)
}

impl RunReport {
    /// Scores every row against `questions` and fills in the aggregates.
    /// Failed rows are listed but excluded from the means.
    pub fn assemble(
        method: Method,
        policy: Option<SelectionPolicy>,
        exploration_c: Option<f64>,
        runs: Vec<(u64, Vec<QuestionRow>)>,
        questions: &[Question],
    ) -> Result<Self> {
        let mut report = RunReport {
            format: REPORT_FORMAT.into(),
            version: REPORT_VERSION,
            method,
            policy,
            exploration_c,
            seeds: runs.iter().map(|(s, _)| *s).collect(),
            usage: UsageTotals::default(),
            aggregate: MetricMeans::default().report(),
            runs: runs
                .into_iter()
                .map(|(seed, questions)| SeedRun {
                    seed,
                    failed: 0,
                    aggregate: MetricMeans::default().report(),
                    questions,
                })
                .collect(),
        };
        report.rescore(questions)?;
        Ok(report)
    }

    /// Recomputes metrics, usage and aggregates from the stored rows.
    pub fn rescore(&mut self, questions: &[Question]) -> Result<()> {
        let map = question_map(questions);
        let mut usage = UsageTotals::default();
        let mut per_seed = Vec::with_capacity(self.runs.len());
        for run in &mut self.runs {
            let scored = score_rows(&mut run.questions, &map)?;
            let means = MetricMeans::over_questions(&scored);
            run.failed = run
                .questions
                .iter()
                .filter(|r| r.status == RowStatus::Failed)
                .count();
            run.aggregate = means.report();
            per_seed.push(means);
            for r in &run.questions {
                usage.llm_calls += r.llm_calls;
                usage.prompt_tokens += r.prompt_tokens;
                usage.completion_tokens += r.completion_tokens;
            }
        }
        self.seeds = self.runs.iter().map(|r| r.seed).collect();
        self.usage = usage;
        self.aggregate = MetricMeans::over_seeds(&per_seed).report();
        Ok(())
    }

    pub fn total_rows(&self) -> usize {
        self.runs.iter().map(|r| r.questions.len()).sum()
    }

    pub fn failed_rows(&self) -> usize {
        self.runs.iter().map(|r| r.failed).sum()
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let report: RunReport =
            serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
        if report.format != REPORT_FORMAT || report.version != REPORT_VERSION {
            return Err(Error::Schema(format!(
                "expected {REPORT_FORMAT} v{REPORT_VERSION}, found {} v{}",
                report.format, report.version
            )));
        }
        Ok(report)
    }
}
