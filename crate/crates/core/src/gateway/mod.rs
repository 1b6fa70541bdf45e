//! Chat-completion access for the proposer, evaluator and reader agents.
//!
//! Every call is a fresh single-message request; no conversation state is
//! carried between calls. Two backends are provided: an OpenAI-compatible
//! HTTP client and a scripted mock keyed by call site.

mod http;
mod mock;
pub mod parse;
pub mod prompts;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use http::{HttpBackend, RetryPolicy, API_KEY_ENV};
pub use mock::{load_mock_script, MockBackend, MockEntry};
pub use parse::{parse_query, parse_score_feedback, EvalResult, QueryProposal};
pub use prompts::{
    render_answer_prompt, render_eval_prompt, render_query_prompt, render_reflect_prompt,
};

/// Which agent a call is made for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Query,
    QueryRetry,
    Eval,
    Answer,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Query => "query",
            Role::QueryRetry => "query_retry",
            Role::Eval => "eval",
            Role::Answer => "answer",
        }
    }
}

/// Identifies a call site: the question, the tree position the call is made
/// for, and the agent role.
///
/// Node paths are `/` for the root and `/i/j/...` for children, where each
/// segment is the child's position under its parent. Proposer and evaluator
/// calls use the path of the node being created; answer calls use `/`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CallKey {
    pub question_id: String,
    pub node_path: String,
    pub role: Role,
}

impl CallKey {
    pub fn new(question_id: impl Into<String>, node_path: impl Into<String>, role: Role) -> Self {
        Self {
            question_id: question_id.into(),
            node_path: node_path.into(),
            role,
        }
    }
}

impl fmt::Display for CallKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(question {:?}, node {:?}, role {})",
            self.question_id,
            self.node_path,
            self.role.as_str()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationSettings {
    pub model: String,
    pub temperature: f64,
    pub max_tokens: u32,
}

impl Default for GenerationSettings {
    fn default() -> Self {
        Self {
            model: "mock".into(),
            temperature: 0.7,
            max_tokens: 4096,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChatRequest {
    pub prompt: String,
    pub temperature: f64,
    pub max_tokens: u32,
    pub seed: Option<u64>,
    pub model: String,
    pub key: CallKey,
}

impl ChatRequest {
    pub fn new(prompt: impl Into<String>, key: CallKey, settings: &GenerationSettings) -> Self {
        Self {
            prompt: prompt.into(),
            temperature: settings.temperature,
            max_tokens: settings.max_tokens,
            seed: None,
            model: settings.model.clone(),
            key,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.temperature.is_nan() || self.temperature < 0.0 {
            return Err(Error::Config(format!("temperature must be >= 0, got {}", self.temperature)));
        }
        if self.max_tokens < 1 {
            return Err(Error::Config("max_tokens must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatResponse {
    pub text: String,
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

pub trait Backend: Send + Sync {
    fn complete(&self, req: &ChatRequest) -> Result<ChatResponse>;
}

/// One completion against `backend`, after validating the request.
pub fn complete(backend: &dyn Backend, req: &ChatRequest) -> Result<ChatResponse> {
    req.validate()?;
    backend.complete(req)
}

/// Token and call counters shared by concurrent searches.
#[derive(Debug, Default)]
pub struct UsageMeter {
    calls: AtomicU64,
    prompt_tokens: AtomicU64,
    completion_tokens: AtomicU64,
    questions: AtomicU64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UsageStats {
    pub calls: u64,
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
    pub questions: u64,
    pub completion_tokens_per_question: f64,
    pub prompt_tokens_per_question: f64,
}

impl UsageMeter {
    pub fn record(&self, resp: &ChatResponse) {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.prompt_tokens.fetch_add(resp.prompt_tokens, Ordering::Relaxed);
        self.completion_tokens
            .fetch_add(resp.completion_tokens, Ordering::Relaxed);
    }

    pub fn record_question(&self) {
        self.questions.fetch_add(1, Ordering::Relaxed);
    }

    pub fn stats(&self) -> UsageStats {
        let calls = self.calls.load(Ordering::Relaxed);
        let prompt_tokens = self.prompt_tokens.load(Ordering::Relaxed);
        let completion_tokens = self.completion_tokens.load(Ordering::Relaxed);
        let questions = self.questions.load(Ordering::Relaxed);
        let per = |n: u64| if questions == 0 { 0.0 } else { n as f64 / questions as f64 };
        UsageStats {
            calls,
            prompt_tokens,
            completion_tokens,
            questions,
            completion_tokens_per_question: per(completion_tokens),
            prompt_tokens_per_question: per(prompt_tokens),
        }
    }
}

/// A backend plus generation settings and session-wide usage accounting.
#[derive(Clone)]
pub struct Gateway {
    backend: Arc<dyn Backend>,
    settings: GenerationSettings,
    usage: Arc<UsageMeter>,
}

impl Gateway {
    pub fn new(backend: Arc<dyn Backend>, settings: GenerationSettings) -> Self {
        Self {
            backend,
            settings,
            usage: Arc::new(UsageMeter::default()),
        }
    }

    pub fn settings(&self) -> &GenerationSettings {
        &self.settings
    }

    pub fn usage(&self) -> &UsageMeter {
        &self.usage
    }

    pub fn usage_stats(&self) -> UsageStats {
        self.usage.stats()
    }

    pub fn complete(&self, prompt: String, key: CallKey, seed: Option<u64>) -> Result<ChatResponse> {
        let mut req = ChatRequest::new(prompt, key, &self.settings);
        req.seed = seed;
        let resp = complete(self.backend.as_ref(), &req)?;
        self.usage.record(&resp);
        Ok(resp)
    }
}

impl fmt::Debug for Gateway {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Gateway")
            .field("settings", &self.settings)
            .field("usage", &self.usage.stats())
            .finish()
    }
}
