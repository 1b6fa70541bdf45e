//! OpenAI-compatible chat-completions client (blocking).

use std::thread;
use std::time::Duration;

use serde::Deserialize;
use serde_json::json;

use super::{Backend, ChatRequest, ChatResponse};
use crate::error::{Error, Result};

/// Environment variable holding the bearer credential.
pub const API_KEY_ENV: &str = "SERTS_API_KEY";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub initial_backoff: Duration,
    pub multiplier: u32,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            max_attempts: 3,
            initial_backoff: Duration::from_millis(500),
            multiplier: 2,
        }
    }
}

impl RetryPolicy {
    /// Delay before attempt `attempt + 1`, where `attempt` starts at 1.
    pub fn backoff(&self, attempt: u32) -> Duration {
        self.initial_backoff * self.multiplier.saturating_pow(attempt.saturating_sub(1))
    }
}

pub struct HttpBackend {
    endpoint: String,
    api_key: String,
    retry: RetryPolicy,
    agent: ureq::Agent,
}

impl std::fmt::Debug for HttpBackend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HttpBackend")
            .field("endpoint", &self.endpoint)
            .field("retry", &self.retry)
            .finish_non_exhaustive()
    }
}

#[derive(Deserialize)]
struct CompletionBody {
    choices: Vec<Choice>,
    #[serde(default)]
    usage: Option<Usage>,
}

#[derive(Deserialize)]
struct Choice {
    message: Message,
}

#[derive(Deserialize)]
struct Message {
    #[serde(default)]
    content: Option<String>,
}

#[derive(Deserialize)]
struct Usage {
    #[serde(default)]
    prompt_tokens: u64,
    #[serde(default)]
    completion_tokens: u64,
}

enum Failure {
    Retryable(String),
    Fatal(String),
}

impl HttpBackend {
    /// `base_url` is the API root, e.g. `http://localhost:8000/v1`; requests go
    /// to `{base_url}/chat/completions`.
    pub fn new(base_url: &str, api_key: impl Into<String>) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(Duration::from_secs(300)))
            .build()
            .into();
        Self {
            endpoint: format!("{}/chat/completions", base_url.trim_end_matches('/')),
            api_key: api_key.into(),
            retry: RetryPolicy::default(),
            agent,
        }
    }

    /// Reads the credential from `SERTS_API_KEY`.
    pub fn from_env(base_url: &str) -> Result<Self> {
        let key = std::env::var(API_KEY_ENV)
            .map_err(|_| Error::Config(format!("http backend requires {API_KEY_ENV} to be set")))?;
        Ok(Self::new(base_url, key))
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }

    fn attempt(&self, req: &ChatRequest) -> std::result::Result<ChatResponse, Failure> {
        let mut body = json!({
            "model": req.model,
            "messages": [{"role": "user", "content": req.prompt}],
            "temperature": req.temperature,
            "max_tokens": req.max_tokens,
        });
        if let Some(seed) = req.seed {
            body["seed"] = json!(seed);
        }
        let mut resp = self
            .agent
            .post(&self.endpoint)
            .header("Authorization", &format!("Bearer {}", self.api_key))
            .send_json(&body)
            .map_err(|e| Failure::Retryable(e.to_string()))?;
        let status = resp.status().as_u16();
        if status == 429 || status >= 500 {
            return Err(Failure::Retryable(format!("HTTP {status}")));
        }
        if !(200..300).contains(&status) {
            let detail = resp.body_mut().read_to_string().unwrap_or_default();
            return Err(Failure::Fatal(format!("HTTP {status}: {detail}")));
        }
        let parsed: CompletionBody = resp
            .body_mut()
            .read_json()
            .map_err(|e| Failure::Fatal(format!("malformed completion body: {e}")))?;
        let text = parsed
            .choices
            .into_iter()
            .next()
            .and_then(|c| c.message.content)
            .ok_or_else(|| Failure::Fatal("completion has no choices".into()))?;
        let (prompt_tokens, completion_tokens) = parsed
            .usage
            .map(|u| (u.prompt_tokens, u.completion_tokens))
            .unwrap_or((0, 0));
        Ok(ChatResponse {
            text,
            prompt_tokens,
            completion_tokens,
        })
    }
}

impl Backend for HttpBackend {
    fn complete(&self, req: &ChatRequest) -> Result<ChatResponse> {
        let mut attempt = 1;
        loop {
            match self.attempt(req) {
                Ok(resp) => return Ok(resp),
                Err(Failure::Fatal(message)) => {
                    return Err(Error::Transport {
                        attempts: attempt,
                        message,
                    })
                }
                Err(Failure::Retryable(message)) => {
                    if attempt >= self.retry.max_attempts {
                        return Err(Error::Transport {
                            attempts: attempt,
                            message,
                        });
                    }
                    log::warn!("{} attempt {attempt} failed: {message}", self.endpoint);
                    thread::sleep(self.retry.backoff(attempt));
                    attempt += 1;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backoff_doubles() {
        let p = RetryPolicy::default();
        assert_eq!(p.backoff(1), Duration::from_millis(500));
        assert_eq!(p.backoff(2), Duration::from_millis(1000));
        assert_eq!(p.backoff(3), Duration::from_millis(2000));
    }

    #[test]
    fn endpoint_joins_base() {
        assert_eq!(
            HttpBackend::new("http://h:1/v1/", "k").endpoint(),
            "http://h:1/v1/chat/completions"
        );
    }
}
