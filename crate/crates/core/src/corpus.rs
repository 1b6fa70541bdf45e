//! Document and question collections.
//!
//! Both files are line-delimited JSON. A corpus line carries `id` and `text`;
//! a question line carries `id`, `text` and optionally `gold_doc_ids` and
//! `ideal_answer`. Blank lines are skipped but still counted for error
//! reporting.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Splits text into lowercase terms.
///
/// Whitespace (Unicode) separates tokens, leading and trailing ASCII
/// punctuation is stripped from each token, and empty tokens are dropped.
/// Intra-word punctuation such as the hyphen in `b-cell` is kept.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .filter_map(|raw| {
            let trimmed = raw.trim_matches(|c: char| c.is_ascii_punctuation());
            if trimmed.is_empty() {
                None
            } else {
                Some(trimmed.to_lowercase())
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub text: String,
    #[serde(skip)]
    pub token_count: usize,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        let text = text.into();
        let token_count = tokenize(&text).len();
        Self {
            id: id.into(),
            text,
            token_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Question {
    pub id: String,
    pub text: String,
    #[serde(default)]
    pub gold_doc_ids: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal_answer: Option<String>,
}

impl Question {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            text: text.into(),
            gold_doc_ids: BTreeSet::new(),
            ideal_answer: None,
        }
    }
}

/// An immutable, ordered document collection.
///
/// Document ordinals follow load order and are used as the BM25 tie-break.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    docs: Vec<Document>,
    by_id: HashMap<String, usize>,
    avg_doc_len: f64,
}

impl Corpus {
    /// Builds a corpus, rejecting empty or duplicate ids. Error line numbers
    /// are 1-based positions in `docs`.
    pub fn from_documents(docs: Vec<Document>) -> Result<Self> {
        let mut by_id = HashMap::with_capacity(docs.len());
        for (ordinal, doc) in docs.iter().enumerate() {
            if doc.id.is_empty() {
                return Err(Error::Corpus {
                    line: ordinal + 1,
                    message: "missing or empty id".into(),
                });
            }
            if by_id.insert(doc.id.clone(), ordinal).is_some() {
                return Err(Error::Corpus {
                    line: ordinal + 1,
                    message: format!("duplicate id {:?}", doc.id),
                });
            }
        }
        let total: usize = docs.iter().map(|d| d.token_count).sum();
        let avg_doc_len = if docs.is_empty() {
            0.0
        } else {
            total as f64 / docs.len() as f64
        };
        Ok(Self {
            docs,
            by_id,
            avg_doc_len,
        })
    }

    pub fn docs(&self) -> &[Document] {
        &self.docs
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn avg_doc_len(&self) -> f64 {
        self.avg_doc_len
    }

    pub fn get(&self, id: &str) -> Option<&Document> {
        self.by_id.get(id).map(|&i| &self.docs[i])
    }

    pub fn ordinal(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    /// Resolves ids to documents, preserving order. Unknown ids are an error.
    pub fn resolve<'a, S: AsRef<str>>(&'a self, ids: &[S]) -> Result<Vec<&'a Document>> {
        ids.iter()
            .map(|id| {
                self.get(id.as_ref())
                    .ok_or_else(|| Error::UnknownDocument(id.as_ref().to_string()))
            })
            .collect()
    }

    /// Writes the corpus back out in the line-delimited format `load_corpus` reads.
    pub fn write_jsonl(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut out = std::io::BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?);
        for doc in &self.docs {
            let line = serde_json::to_string(doc)?;
            writeln!(out, "{line}").map_err(|e| Error::io(path, e))?;
        }
        out.flush().map_err(|e| Error::io(path, e))
    }
}

#[derive(Deserialize)]
struct RawDocument {
    id: Option<String>,
    text: String,
}

/// Loads a corpus from a line-delimited JSON file.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut docs = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawDocument = serde_json::from_str(&line).map_err(|e| Error::Corpus {
            line: lineno,
            message: e.to_string(),
        })?;
        let id = match raw.id {
            Some(id) if !id.is_empty() => id,
            _ => {
                return Err(Error::Corpus {
                    line: lineno,
                    message: "missing or empty id".into(),
                })
            }
        };
        if !seen.insert(id.clone()) {
            return Err(Error::Corpus {
                line: lineno,
                message: format!("duplicate id {id:?}"),
            });
        }
        docs.push(Document::new(id, raw.text));
    }
    Corpus::from_documents(docs)
}

/// Loads questions from a line-delimited JSON file.
pub fn load_questions(path: impl AsRef<Path>) -> Result<Vec<Question>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut questions = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let q: Question = serde_json::from_str(&line).map_err(|e| Error::Questions {
            line: lineno,
            message: e.to_string(),
        })?;
        if q.id.is_empty() {
            return Err(Error::Questions {
                line: lineno,
                message: "missing or empty id".into(),
            });
        }
        if !seen.insert(q.id.clone()) {
            return Err(Error::Questions {
                line: lineno,
                message: format!("duplicate id {:?}", q.id),
            });
        }
        questions.push(q);
    }
    Ok(questions)
}
