//! Scripted backend for offline, reproducible runs.
//!
//! Replies are looked up by call site rather than call order, so concurrent
//! searches cannot change which reply a call receives. A script entry may use
//! `*` for the question id or the node path, and may omit the role to match
//! every role. The most specific match wins, in this order:
//!
//! 1. question, path, role
//! 2. question, path
//! 3. `*`, path, role
//! 4. `*`, path
//! 5. question, `*`, role
//! 6. question, `*`
//! 7. `*`, `*`, role
//! 8. `*`, `*`
//!
//! A re-prompt (`query_retry`) with no match of its own falls back to the
//! `query` entries.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Backend, CallKey, ChatRequest, ChatResponse, Role};
use crate::corpus::tokenize;
use crate::error::{Error, Result};

pub const WILDCARD: &str = "*";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MockEntry {
    pub question_id: String,
    pub node_path: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<Role>,
    pub reply_text: String,
}

impl MockEntry {
    pub fn new(
        question_id: impl Into<String>,
        node_path: impl Into<String>,
        role: Option<Role>,
        reply_text: impl Into<String>,
    ) -> Self {
        Self {
            question_id: question_id.into(),
            node_path: node_path.into(),
            role,
            reply_text: reply_text.into(),
        }
    }

    /// An entry that applies to every question.
    pub fn wildcard(node_path: impl Into<String>, role: Option<Role>, reply_text: impl Into<String>) -> Self {
        Self::new(WILDCARD, node_path, role, reply_text)
    }
}

type ScriptKey = (String, String, Option<Role>);

#[derive(Debug, Clone, Default)]
pub struct MockBackend {
    replies: HashMap<ScriptKey, String>,
}

impl MockBackend {
    /// Later entries replace earlier ones with the same key.
    pub fn from_entries(entries: impl IntoIterator<Item = MockEntry>) -> Self {
        let replies = entries
            .into_iter()
            .map(|e| ((e.question_id, e.node_path, e.role), e.reply_text))
            .collect();
        Self { replies }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Ok(Self::from_entries(load_mock_script(path)?))
    }

    pub fn len(&self) -> usize {
        self.replies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.replies.is_empty()
    }

    pub fn lookup(&self, key: &CallKey) -> Option<&str> {
        let q = key.question_id.as_str();
        let p = key.node_path.as_str();
        let r = Some(key.role);
        let candidates = [
            (q, p, r),
            (q, p, None),
            (WILDCARD, p, r),
            (WILDCARD, p, None),
            (q, WILDCARD, r),
            (q, WILDCARD, None),
            (WILDCARD, WILDCARD, r),
            (WILDCARD, WILDCARD, None),
        ];
        let found = candidates.iter().find_map(|&(q, p, r)| {
            self.replies
                .get(&(q.to_string(), p.to_string(), r))
                .map(String::as_str)
        });
        match (found, key.role) {
            (None, Role::QueryRetry) => self.lookup(&CallKey {
                role: Role::Query,
                ..key.clone()
            }),
            _ => found,
        }
    }
}

impl Backend for MockBackend {
    fn complete(&self, req: &ChatRequest) -> Result<ChatResponse> {
        let text = self
            .lookup(&req.key)
            .ok_or_else(|| Error::MockKeyMissing(req.key.to_string()))?;
        Ok(ChatResponse {
            text: text.to_string(),
            prompt_tokens: tokenize(&req.prompt).len() as u64,
            completion_tokens: tokenize(text).len() as u64,
        })
    }
}

/// Reads a line-delimited mock script. Duplicate keys are rejected.
pub fn load_mock_script(path: impl AsRef<Path>) -> Result<Vec<MockEntry>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut entries = Vec::new();
    let mut seen: HashMap<ScriptKey, usize> = HashMap::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let entry: MockEntry = serde_json::from_str(&line).map_err(|e| Error::MockScript {
            line: lineno,
            message: e.to_string(),
        })?;
        let key = (entry.question_id.clone(), entry.node_path.clone(), entry.role);
        if let Some(first) = seen.insert(key, lineno) {
            return Err(Error::MockScript {
                line: lineno,
                message: format!("duplicate key, first defined on line {first}"),
            });
        }
        entries.push(entry);
    }
    Ok(entries)
}
