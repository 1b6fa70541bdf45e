//! Fixtures and independent oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;
use serts::gateway::{MockBackend, MockEntry};
use serts::{Bm25Index, Bm25Params, Corpus, Document, Gateway, GenerationSettings, Question, Role};

pub const GLOFITAMAB_DOCS: [&str; 3] = [
    "Glofitamab is a CD20xCD3 bispecific antibody for relapsed B-cell lymphoma.",
    "Mantle cell lymphoma is a rare type of B-cell non-Hodgkin lymphoma.",
    "Glofitamab dose selection in cynomolgus monkeys used glofitamab pharmacokinetics.",
];

pub fn corpus_of(texts: &[&str]) -> Arc<Corpus> {
    let docs = texts
        .iter()
        .enumerate()
        .map(|(i, t)| Document::new(format!("d{i}"), *t))
        .collect();
    Arc::new(Corpus::from_documents(docs).unwrap())
}

pub fn index_of(texts: &[&str]) -> Bm25Index {
    Bm25Index::build(corpus_of(texts), Bm25Params::default())
}

/// Straight evaluation of the BM25 formula from raw text, with no index.
/// Only splitting and case folding are shared with the library.
pub struct Bm25Oracle {
    docs: Vec<Vec<String>>,
    k1: f64,
    b: f64,
}

fn oracle_tokens(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|w| w.trim_matches(|c: char| c.is_ascii_punctuation()).to_lowercase())
        .filter(|w| !w.is_empty())
        .collect()
}

impl Bm25Oracle {
    pub fn new(texts: &[String]) -> Self {
        Self {
            docs: texts.iter().map(|t| oracle_tokens(t)).collect(),
            k1: 1.2,
            b: 0.75,
        }
    }

    pub fn idf(&self, term: &str) -> f64 {
        let n = self.docs.iter().filter(|d| d.iter().any(|t| t == term)).count() as f64;
        let big_n = self.docs.len() as f64;
        ((big_n - n + 0.5) / (n + 0.5) + 1.0).ln()
    }

    pub fn score(&self, query: &str, doc: usize) -> f64 {
        let avgdl = self.docs.iter().map(Vec::len).sum::<usize>() as f64 / self.docs.len() as f64;
        let d = &self.docs[doc];
        let mut total = 0.0;
        for q in oracle_tokens(query) {
            let f = d.iter().filter(|t| **t == q).count() as f64;
            if f == 0.0 {
                continue;
            }
            total += self.idf(&q) * f * (self.k1 + 1.0)
                / (f + self.k1 * (1.0 - self.b + self.b * d.len() as f64 / avgdl));
        }
        total
    }

    /// Every document with a positive score, best first, ties by position.
    pub fn ranking(&self, query: &str) -> Vec<(usize, f64)> {
        let mut all: Vec<(usize, f64)> = (0..self.docs.len())
            .map(|i| (i, self.score(query, i)))
            .filter(|&(_, s)| s > 0.0)
            .collect();
        all.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        all
    }
}

const VOCAB: &[&str] = &[
    "lymphoma", "glofitamab", "b-cell", "car", "t", "therapy", "dose", "monkey", "cytokine",
    "release", "antibody", "relapse", "mantle", "cell", "dlbcl", "safety", "efficacy", "trial",
    "patients", "treatment",
];

pub fn random_text(rng: &mut impl Rng, max_len: usize) -> String {
    let len = rng.random_range(0..=max_len);
    (0..len)
        .map(|_| {
            let w = *VOCAB.choose(rng).unwrap();
            match rng.random_range(0..6) {
                0 => w.to_uppercase(),
                1 => format!("{w},"),
                2 => format!("({w})"),
                _ => w.to_string(),
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn random_corpus(rng: &mut impl Rng, max_docs: usize) -> Vec<String> {
    let n = rng.random_range(1..=max_docs);
    (0..n).map(|_| random_text(rng, 12)).collect()
}

pub fn random_query(rng: &mut impl Rng, max_terms: usize) -> String {
    let len = rng.random_range(1..=max_terms);
    (0..len)
        .map(|_| {
            if rng.random_bool(0.1) {
                "unseenterm".to_string()
            } else {
                VOCAB.choose(rng).unwrap().to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// A small biomedical corpus used by the search-level tests.
pub fn bio_corpus() -> Vec<(&'static str, &'static str)> {
    vec![
        ("p1", "Glofitamab is a CD20xCD3 bispecific antibody that induces remission in relapsed diffuse large B-cell lymphoma."),
        ("p2", "Mantle cell lymphoma is a rare B-cell non-Hodgkin lymphoma that often relapses after first-line treatment."),
        ("p3", "First-in-human dose selection of glofitamab used cytokine release in cynomolgus monkeys as the endpoint."),
        ("p4", "CAR T-cell therapy is a standard option for refractory DLBCL after two prior lines of therapy."),
        ("p5", "Cytokine release syndrome is the most common adverse event of bispecific antibody therapy."),
        ("p6", "Obinutuzumab pretreatment mitigates cytokine release syndrome in patients receiving glofitamab."),
        ("p7", "Follicular lymphoma patients showed complete responses to glofitamab monotherapy."),
        ("p8", "Dermatillomania is a body-focused repetitive behaviour with unclear causes."),
        ("p9", "Tocilizumab is used to manage severe cytokine release syndrome."),
        ("p10", "Bispecific antibodies engage T cells to kill CD20 expressing B cells."),
    ]
}

pub fn bio_index() -> Bm25Index {
    let docs = bio_corpus().into_iter().map(|(id, t)| Document::new(id, t)).collect();
    Bm25Index::build(Arc::new(Corpus::from_documents(docs).unwrap()), Bm25Params::default())
}

pub fn glofitamab_question() -> Question {
    let mut q = Question::new("q1", "What disease can be treated with Glofitamab?");
    q.gold_doc_ids = ["p1", "p7"].iter().map(|s| s.to_string()).collect();
    q.ideal_answer = Some("Glofitamab treats relapsed diffuse large B-cell lymphoma and follicular lymphoma.".into());
    q
}

pub fn mock_gateway(entries: Vec<MockEntry>) -> Gateway {
    Gateway::new(Arc::new(MockBackend::from_entries(entries)), GenerationSettings::default())
}

pub fn query_reply(q: &str) -> String {
    format!("Based on the retrieved information I suggest a narrower search. <query> {q} </query>")
}

pub fn score_reply(score: u8) -> String {
    format!("The knowledge is partly relevant. Try naming lymphoma subtypes. <score>{score}</score>")
}

/// A constant-reply script for every question and node.
pub fn constant_script(query: &str, score: u8) -> Vec<MockEntry> {
    vec![
        MockEntry::wildcard("*", Some(Role::Query), query_reply(query)),
        MockEntry::wildcard("*", Some(Role::Eval), score_reply(score)),
        MockEntry::wildcard("*", Some(Role::Answer), "Glofitamab treats relapsed B-cell lymphoma."),
    ]
}

/// All node paths of a tree with the given branch and depth limits.
pub fn all_paths(branch: usize, depth: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut frontier = vec![String::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for p in &frontier {
            for i in 0..branch {
                let child = format!("{p}/{i}");
                out.push(child.clone());
                next.push(child);
            }
        }
        frontier = next;
    }
    out
}

pub fn write_lines(path: &Path, lines: impl IntoIterator<Item = String>) {
    let mut f = std::fs::File::create(path).unwrap();
    for l in lines {
        writeln!(f, "{l}").unwrap();
    }
}

/// Writes corpus, questions and mock-script files for `n_questions`
/// questions over the bio corpus. Returns (corpus, questions, script) paths.
pub fn write_fixture(dir: &Path, n_questions: usize) -> (PathBuf, PathBuf, PathBuf) {
    let corpus = dir.join("corpus.jsonl");
    let questions = dir.join("questions.jsonl");
    let script = dir.join("mock.jsonl");
    write_lines(
        &corpus,
        bio_corpus()
            .into_iter()
            .map(|(id, text)| serde_json::json!({"id": id, "text": text}).to_string()),
    );
    let topics = [
        ("What disease can be treated with Glofitamab?", vec!["p1", "p7"], Some("Glofitamab treats relapsed diffuse large B-cell lymphoma and follicular lymphoma.")),
        ("How is cytokine release syndrome managed?", vec!["p6", "p9"], Some("Tocilizumab and obinutuzumab pretreatment manage cytokine release syndrome.")),
        ("What causes dermatillomania?", vec!["p8"], None),
        ("Which therapy is standard for refractory DLBCL?", vec!["p4"], Some("CAR T-cell therapy is standard for refractory DLBCL.")),
    ];
    let queries = [
        "glofitamab lymphoma",
        "cytokine release syndrome tocilizumab",
        "dermatillomania causes",
        "car t-cell therapy dlbcl",
    ];
    let mut q_lines = Vec::new();
    let mut s_lines = Vec::new();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for i in 0..n_questions {
        let (text, gold, ideal) = &topics[i % topics.len()];
        let id = format!("q{i:02}");
        let mut rec = serde_json::json!({"id": id, "text": text, "gold_doc_ids": gold});
        if let Some(a) = ideal {
            rec["ideal_answer"] = serde_json::json!(a);
        }
        q_lines.push(rec.to_string());
        for path in all_paths(3, 3) {
            let score: u8 = rng.random_range(0..=5);
            let q = queries[rng.random_range(0..queries.len())];
            s_lines.push(
                serde_json::json!({"question_id": id, "node_path": path, "role": "query", "reply_text": query_reply(q)})
                    .to_string(),
            );
            s_lines.push(
                serde_json::json!({"question_id": id, "node_path": path, "role": "eval", "reply_text": score_reply(score)})
                    .to_string(),
            );
        }
    }
    s_lines.push(
        serde_json::json!({"question_id": "*", "node_path": "*", "reply_text": "<query> lymphoma </query> <score>1</score>"}).to_string(),
    );
    s_lines.push(
        serde_json::json!({"question_id": "*", "node_path": "/", "role": "answer", "reply_text": "Glofitamab treats relapsed B-cell lymphoma."}).to_string(),
    );
    write_lines(&questions, q_lines);
    write_lines(&script, s_lines);
    (corpus, questions, script)
}

use rand::SeedableRng;

pub fn docs_map(index: &Bm25Index) -> BTreeMap<String, String> {
    index
        .corpus()
        .docs()
        .iter()
        .map(|d| (d.id.clone(), d.text.clone()))
        .collect()
}

/// Wraps a backend and keeps every request it serves, in arrival order.
pub struct Recording<B> {
    pub inner: B,
    pub requests: std::sync::Mutex<Vec<serts::ChatRequest>>,
}

impl<B: serts::Backend> Recording<B> {
    pub fn new(inner: B) -> Self {
        Self { inner, requests: Default::default() }
    }

    pub fn take(&self) -> Vec<serts::ChatRequest> {
        std::mem::take(&mut self.requests.lock().unwrap())
    }
}

impl<B: serts::Backend> serts::Backend for Recording<B> {
    fn complete(&self, req: &serts::ChatRequest) -> serts::Result<serts::ChatResponse> {
        self.requests.lock().unwrap().push(req.clone());
        self.inner.complete(req)
    }
}

pub fn recording_gateway(entries: Vec<MockEntry>) -> (Gateway, Arc<Recording<MockBackend>>) {
    let rec = Arc::new(Recording::new(MockBackend::from_entries(entries)));
    (Gateway::new(rec.clone(), GenerationSettings::default()), rec)
}
