//! Retrieval methods: plain BM25, self-reflection and tree search, plus the
//! answer step and trajectory export.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bm25::Bm25Index;
use crate::corpus::{Corpus, Question};
use crate::error::{Error, Result};
use crate::gateway::{
    parse_query, parse_score_feedback, render_answer_prompt, render_eval_prompt,
    render_query_prompt, render_reflect_prompt, CallKey, ChatResponse, EvalResult, Gateway,
    QueryProposal, Role,
};
use crate::tree::{NodeId, Observation, SearchConfig, SearchTree, Selection, ROOT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Bm25,
    Reflection,
    Serts,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Bm25 => "bm25",
            Method::Reflection => "reflection",
            Method::Serts => "serts",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bm25" => Ok(Method::Bm25),
            "reflection" => Ok(Method::Reflection),
            "serts" => Ok(Method::Serts),
            other => Err(Error::Config(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalOutcome {
    pub question_id: String,
    pub method: Method,
    pub doc_ids: Vec<String>,
    pub best_reward: u8,
    pub simulations_used: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub answer: Option<String>,
    pub llm_calls: u64,
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

impl RetrievalOutcome {
    fn empty(question_id: &str, method: Method) -> Self {
        Self {
            question_id: question_id.to_string(),
            method,
            doc_ids: Vec::new(),
            best_reward: 0,
            simulations_used: 0,
            answer: None,
            llm_calls: 0,
            prompt_tokens: 0,
            completion_tokens: 0,
        }
    }

    fn charge(&mut self, resp: &ChatResponse) {
        self.llm_calls += 1;
        self.prompt_tokens += resp.prompt_tokens;
        self.completion_tokens += resp.completion_tokens;
    }
}

/// One proposer action with the observation it was conditioned on and the
/// reward its retrieval earned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub question_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub sim_index: usize,
    pub node_id: NodeId,
    pub parent_id: NodeId,
    pub prompt: String,
    pub completion: String,
    pub query: String,
    pub doc_ids: Vec<String>,
    pub reward: u8,
    pub feedback: String,
}

/// Union preserving first occurrence order.
fn union_ordered(first: &[String], second: &[String]) -> Vec<String> {
    let mut seen: HashSet<&str> = HashSet::new();
    first
        .iter()
        .chain(second)
        .filter(|d| seen.insert(d.as_str()))
        .cloned()
        .collect()
}

fn retrieve(index: &Bm25Index, query: &str, top_k: usize) -> Vec<String> {
    index
        .search(query, top_k)
        .into_iter()
        .map(|h| h.doc_id)
        .collect()
}

pub fn run_bm25(question: &Question, index: &Bm25Index, top_k: usize) -> RetrievalOutcome {
    let mut outcome = RetrievalOutcome::empty(&question.id, Method::Bm25);
    outcome.doc_ids = retrieve(index, &question.text, top_k);
    outcome
}

/// Shared per-question state for the two LLM-driven methods.
struct Expander<'a> {
    question: &'a Question,
    index: &'a Bm25Index,
    gateway: &'a Gateway,
    top_k: usize,
    seed: u64,
    outcome: RetrievalOutcome,
}

struct Expansion {
    prompt: String,
    proposal: QueryProposal,
    docs: Vec<String>,
    eval: EvalResult,
}

impl<'a> Expander<'a> {
    fn call(&mut self, prompt: String, path: &str, role: Role) -> Result<ChatResponse> {
        let key = CallKey::new(&self.question.id, path, role);
        let resp = self.gateway.complete(prompt, key, Some(self.seed))?;
        self.outcome.charge(&resp);
        Ok(resp)
    }

    /// Proposer, retrieval and evaluator for a new child at `path`. Returns
    /// `None` when the proposer fails to produce a query twice.
    fn expand(&mut self, obs: &Observation, prompt: String, path: &str) -> Result<Option<Expansion>> {
        let first = self.call(prompt.clone(), path, Role::Query)?;
        let proposal = match parse_query(&first.text) {
            Ok(p) => p,
            Err(e) => {
                log::debug!("question {} node {path}: {e}; re-prompting", self.question.id);
                let second = self.call(prompt.clone(), path, Role::QueryRetry)?;
                match parse_query(&second.text) {
                    Ok(p) => p,
                    Err(e) => {
                        log::warn!(
                            "question {} node {path}: proposer gave no query twice ({e}); simulation abandoned",
                            self.question.id
                        );
                        return Ok(None);
                    }
                }
            }
        };
        let docs = retrieve(self.index, &proposal.query, self.top_k);
        let evaluated = union_ordered(&obs.ancestor_docs, &docs);
        let corpus = self.index.corpus();
        let eval_prompt = render_eval_prompt(self.question, &corpus.resolve(&evaluated)?);
        let reply = self.call(eval_prompt, path, Role::Eval)?;
        let eval = parse_score_feedback(&reply.text).unwrap_or_else(|e| {
            log::warn!(
                "question {} node {path}: evaluator reply unparseable ({e}); reward 0",
                self.question.id
            );
            EvalResult {
                score: 0,
                feedback: reply.text.clone(),
            }
        });
        Ok(Some(Expansion {
            prompt,
            proposal,
            docs,
            eval,
        }))
    }

    fn record(&self, sim_index: usize, node_id: NodeId, parent_id: NodeId, exp: &Expansion) -> TrajectoryRecord {
        TrajectoryRecord {
            question_id: self.question.id.clone(),
            seed: None,
            sim_index,
            node_id,
            parent_id,
            prompt: exp.prompt.clone(),
            completion: exp.proposal.rationale.clone(),
            query: exp.proposal.query.clone(),
            doc_ids: exp.docs.clone(),
            reward: exp.eval.score,
            feedback: exp.eval.feedback.clone(),
        }
    }

    fn finish(mut self, tree: &SearchTree, sims: usize) -> RetrievalOutcome {
        let best = tree.best_node();
        self.outcome.doc_ids = tree.chain_docs(best);
        self.outcome.best_reward = tree.node(best).reward;
        self.outcome.simulations_used = sims;
        self.outcome
    }
}

fn root_tree(question: &Question, index: &Bm25Index, top_k: usize, branch: usize, depth: usize) -> SearchTree {
    SearchTree::new(question.text.clone(), retrieve(index, &question.text, top_k), branch, depth)
}

/// Tree search for one question.
///
/// `seed` drives the random selection policy and is forwarded to the backend.
/// Stops early once a child scores 5; that child is still added to the tree.
pub fn run_serts(
    question: &Question,
    index: &Bm25Index,
    gateway: &Gateway,
    config: &SearchConfig,
    seed: u64,
) -> Result<(RetrievalOutcome, Vec<TrajectoryRecord>)> {
    let (outcome, records, _) = run_serts_with_tree(question, index, gateway, config, seed)?;
    Ok((outcome, records))
}

/// As [`run_serts`], also returning the final tree.
pub fn run_serts_with_tree(
    question: &Question,
    index: &Bm25Index,
    gateway: &Gateway,
    config: &SearchConfig,
    seed: u64,
) -> Result<(RetrievalOutcome, Vec<TrajectoryRecord>, SearchTree)> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tree = root_tree(question, index, config.top_k, config.max_branch, config.max_depth);
    let mut ex = Expander {
        question,
        index,
        gateway,
        top_k: config.top_k,
        seed,
        outcome: RetrievalOutcome::empty(&question.id, Method::Serts),
    };
    let corpus: &Corpus = index.corpus();
    let mut records = Vec::new();
    let mut sims = 0;
    for sim in 0..config.max_sim {
        sims = sim + 1;
        let parent = match tree.select(config, &mut rng) {
            Selection::Expand(id) => id,
            Selection::Skip(_) => continue,
        };
        let obs = tree.assemble_observation(parent);
        let prompt = render_query_prompt(question, &obs, corpus);
        let path = tree.next_child_path(parent);
        let Some(exp) = ex.expand(&obs, prompt, &path)? else {
            continue;
        };
        let child = tree.add_child(
            parent,
            exp.proposal.query.clone(),
            exp.proposal.rationale.clone(),
            exp.docs.clone(),
            exp.eval.score,
            exp.eval.feedback.clone(),
        )?;
        tree.backpropagate(child, exp.eval.score as f64 * config.reward_scale);
        records.push(ex.record(sim, child, parent, &exp));
        if exp.eval.score == 5 {
            break;
        }
    }
    let outcome = ex.finish(&tree, sims);
    Ok((outcome, records, tree))
}

/// Self-reflection baseline: a single chain where each step refines the most
/// recent node from its own lineage only.
pub fn run_reflection(
    question: &Question,
    index: &Bm25Index,
    gateway: &Gateway,
    config: &SearchConfig,
    seed: u64,
) -> Result<(RetrievalOutcome, Vec<TrajectoryRecord>)> {
    config.validate()?;
    let mut tree = root_tree(question, index, config.top_k, 1, config.max_sim.max(1));
    let mut ex = Expander {
        question,
        index,
        gateway,
        top_k: config.top_k,
        seed,
        outcome: RetrievalOutcome::empty(&question.id, Method::Reflection),
    };
    let corpus: &Corpus = index.corpus();
    let mut records = Vec::new();
    let mut current = ROOT;
    let mut sims = 0;
    for sim in 0..config.max_sim {
        sims = sim + 1;
        let obs = tree.assemble_observation(current);
        let prompt = render_reflect_prompt(question, &obs, corpus);
        let path = tree.next_child_path(current);
        let Some(exp) = ex.expand(&obs, prompt, &path)? else {
            continue;
        };
        let child = tree.add_child(
            current,
            exp.proposal.query.clone(),
            exp.proposal.rationale.clone(),
            exp.docs.clone(),
            exp.eval.score,
            exp.eval.feedback.clone(),
        )?;
        records.push(ex.record(sim, child, current, &exp));
        current = child;
        if exp.eval.score == 5 {
            break;
        }
    }
    let outcome = ex.finish(&tree, sims);
    Ok((outcome, records))
}

/// Runs the reader over `doc_ids` (in order) and returns its reply verbatim.
pub fn generate_answer(
    question: &Question,
    doc_ids: &[String],
    corpus: &Corpus,
    gateway: &Gateway,
    seed: Option<u64>,
) -> Result<ChatResponse> {
    let docs = corpus.resolve(doc_ids)?;
    let prompt = render_answer_prompt(question, &docs);
    gateway.complete(prompt, CallKey::new(&question.id, "/", Role::Answer), seed)
}

/// Writes one JSON record per line; newlines inside fields are escaped.
pub fn export_trajectories(records: &[TrajectoryRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn import_trajectories(path: impl AsRef<Path>) -> Result<Vec<TrajectoryRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut records = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| Error::Trajectory {
            line: idx + 1,
            message: e.to_string(),
        })?;
        records.push(record);
    }
    Ok(records)
}
