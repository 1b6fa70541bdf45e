//! Search tree over retrieval states.
//!
//! Each node holds a query, the documents it retrieved, the evaluator's
//! reward and feedback, and visit statistics. Selection walks down from the
//! root by UCB until it reaches a node that can still take children.

use std::fmt::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type NodeId = usize;

pub const ROOT: NodeId = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SelectionPolicy {
    /// Uniform choice among children at each level.
    Random,
    /// Highest UCB child at each level.
    #[default]
    MaxUcb,
}

/// How the exploration term of UCB treats the visit counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum UcbForm {
    /// `c * sqrt(2 * ln(N(p) / N(s)))`
    #[default]
    Ratio,
    /// `c * sqrt(2 * ln(N(p)) / N(s))`, the usual UCT term.
    Standard,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub max_sim: usize,
    pub max_branch: usize,
    pub max_depth: usize,
    pub exploration_c: f64,
    pub top_k: usize,
    pub policy: SelectionPolicy,
    pub ucb_form: UcbForm,
    /// Multiplier applied to rewards before they are accumulated.
    pub reward_scale: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_sim: 12,
            max_branch: 3,
            max_depth: 3,
            exploration_c: 0.1,
            top_k: 3,
            policy: SelectionPolicy::MaxUcb,
            ucb_form: UcbForm::Ratio,
            reward_scale: 1.0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_branch == 0 {
            return Err(Error::Config("branch limit must be at least 1".into()));
        }
        if self.max_depth == 0 {
            return Err(Error::Config("depth limit must be at least 1".into()));
        }
        if self.top_k == 0 {
            return Err(Error::Config("top_k must be at least 1".into()));
        }
        if !self.exploration_c.is_finite() || self.exploration_c < 0.0 {
            return Err(Error::Config(format!(
                "exploration constant must be finite and >= 0, got {}",
                self.exploration_c
            )));
        }
        if !self.reward_scale.is_finite() || self.reward_scale <= 0.0 {
            return Err(Error::Config("reward scale must be finite and > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchNode {
    pub node_id: NodeId,
    pub parent: Option<NodeId>,
    pub depth: usize,
    pub query: String,
    /// Full proposer completion that produced `query`; the question itself at the root.
    pub rationale: String,
    pub doc_ids: Vec<String>,
    pub reward: u8,
    pub feedback: String,
    pub visit_count: u64,
    pub value_sum: f64,
    pub children: Vec<NodeId>,
}

impl SearchNode {
    pub fn mean(&self) -> Option<f64> {
        (self.visit_count > 0).then(|| self.value_sum / self.visit_count as f64)
    }
}

/// Context gathered for expanding a node.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Observation {
    /// Query-with-reasoning of the node and its ancestors, root first.
    pub ancestor_queries: Vec<String>,
    /// Documents retrieved along the same chain, root first, first occurrence kept.
    pub ancestor_docs: Vec<String>,
    /// Queries of the node's existing children.
    pub sibling_queries: Vec<String>,
    /// Evaluator feedback for those children, aligned with `sibling_queries`.
    pub sibling_feedback: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    Expand(NodeId),
    /// Selection ended on a node at the depth limit; the simulation is spent.
    Skip(NodeId),
}

/// UCB of `node` as a child of `parent`. Unvisited nodes score +∞.
pub fn ucb(node: &SearchNode, parent: &SearchNode, c: f64, form: UcbForm) -> f64 {
    if node.visit_count == 0 {
        return f64::INFINITY;
    }
    let n_s = node.visit_count as f64;
    let n_p = parent.visit_count as f64;
    let mean = node.value_sum / n_s;
    let explore = match form {
        UcbForm::Ratio => (2.0 * (n_p / n_s).ln()).sqrt(),
        UcbForm::Standard => (2.0 * n_p.ln() / n_s).sqrt(),
    };
    // A child can only be visited as often as its parent, so the ln argument
    // is >= 1 in practice. Guard the NaN anyway for hand-built trees.
    if explore.is_nan() {
        mean
    } else {
        mean + c * explore
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchTree {
    nodes: Vec<SearchNode>,
    max_branch: usize,
    max_depth: usize,
}

impl SearchTree {
    /// A tree whose root holds the original question and its first retrieval.
    pub fn new(root_query: impl Into<String>, root_docs: Vec<String>, max_branch: usize, max_depth: usize) -> Self {
        let query = root_query.into();
        let root = SearchNode {
            node_id: ROOT,
            parent: None,
            depth: 0,
            rationale: query.clone(),
            query,
            doc_ids: root_docs,
            reward: 0,
            feedback: String::new(),
            visit_count: 0,
            value_sum: 0.0,
            children: Vec::new(),
        };
        Self {
            nodes: vec![root],
            max_branch,
            max_depth,
        }
    }

    pub fn root(&self) -> &SearchNode {
        &self.nodes[ROOT]
    }

    pub fn node(&self, id: NodeId) -> &SearchNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[SearchNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn max_branch(&self) -> usize {
        self.max_branch
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    /// Node ids from the root down to `id`, inclusive.
    pub fn path_to(&self, id: NodeId) -> Vec<NodeId> {
        let mut chain = vec![id];
        let mut cur = id;
        while let Some(p) = self.nodes[cur].parent {
            chain.push(p);
            cur = p;
        }
        chain.reverse();
        chain
    }

    /// Positional path such as `/0/2`; the root is `/`.
    pub fn node_path(&self, id: NodeId) -> String {
        let chain = self.path_to(id);
        if chain.len() == 1 {
            return "/".into();
        }
        let mut out = String::new();
        for pair in chain.windows(2) {
            let pos = self.nodes[pair[0]]
                .children
                .iter()
                .position(|&c| c == pair[1])
                .expect("child listed under its parent");
            let _ = write!(out, "/{pos}");
        }
        out
    }

    /// Path the next child of `parent` will have.
    pub fn next_child_path(&self, parent: NodeId) -> String {
        let base = self.node_path(parent);
        let pos = self.nodes[parent].children.len();
        if base == "/" {
            format!("/{pos}")
        } else {
            format!("{base}/{pos}")
        }
    }

    /// Documents retrieved from the root down to `id`, deduplicated, root first.
    pub fn chain_docs(&self, id: NodeId) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for n in self.path_to(id) {
            for d in &self.nodes[n].doc_ids {
                if !out.contains(d) {
                    out.push(d.clone());
                }
            }
        }
        out
    }

    pub fn select(&self, config: &SearchConfig, rng: &mut impl Rng) -> Selection {
        let mut cur = ROOT;
        loop {
            let node = &self.nodes[cur];
            if node.children.len() < self.max_branch {
                break;
            }
            cur = match config.policy {
                SelectionPolicy::Random => node.children[rng.random_range(0..node.children.len())],
                SelectionPolicy::MaxUcb => {
                    let mut best = node.children[0];
                    let mut best_score = f64::NEG_INFINITY;
                    for &child in &node.children {
                        let s = ucb(&self.nodes[child], node, config.exploration_c, config.ucb_form);
                        // Strict comparison keeps the lowest id on ties.
                        if s > best_score {
                            best = child;
                            best_score = s;
                        }
                    }
                    best
                }
            };
        }
        if self.nodes[cur].depth >= self.max_depth {
            Selection::Skip(cur)
        } else {
            Selection::Expand(cur)
        }
    }

    /// Context for expanding `id`: its own chain and its current children.
    pub fn assemble_observation(&self, id: NodeId) -> Observation {
        let ancestor_queries = self
            .path_to(id)
            .into_iter()
            .map(|n| self.nodes[n].rationale.clone())
            .collect();
        let children = &self.nodes[id].children;
        Observation {
            ancestor_queries,
            ancestor_docs: self.chain_docs(id),
            sibling_queries: children.iter().map(|&c| self.nodes[c].query.clone()).collect(),
            sibling_feedback: children.iter().map(|&c| self.nodes[c].feedback.clone()).collect(),
        }
    }

    pub fn add_child(
        &mut self,
        parent: NodeId,
        query: impl Into<String>,
        rationale: impl Into<String>,
        doc_ids: Vec<String>,
        reward: u8,
        feedback: impl Into<String>,
    ) -> Result<NodeId> {
        let p = self
            .nodes
            .get(parent)
            .ok_or_else(|| Error::Invariant(format!("node {parent} does not exist")))?;
        if p.children.len() >= self.max_branch {
            return Err(Error::Invariant(format!(
                "node {parent} already has {} children (limit {})",
                p.children.len(),
                self.max_branch
            )));
        }
        if p.depth >= self.max_depth {
            return Err(Error::Invariant(format!(
                "node {parent} is at depth {} (limit {})",
                p.depth, self.max_depth
            )));
        }
        if reward > 5 {
            return Err(Error::Invariant(format!("reward {reward} outside 0..=5")));
        }
        let id = self.nodes.len();
        let depth = p.depth + 1;
        self.nodes.push(SearchNode {
            node_id: id,
            parent: Some(parent),
            depth,
            query: query.into(),
            rationale: rationale.into(),
            doc_ids,
            reward,
            feedback: feedback.into(),
            visit_count: 0,
            value_sum: 0.0,
            children: Vec::new(),
        });
        self.nodes[parent].children.push(id);
        Ok(id)
    }

    /// Adds one visit and `value` to `id` and every ancestor.
    pub fn backpropagate(&mut self, id: NodeId, value: f64) {
        let mut cur = Some(id);
        while let Some(n) = cur {
            let node = &mut self.nodes[n];
            node.visit_count += 1;
            node.value_sum += value;
            cur = node.parent;
        }
    }

    /// Highest own reward; ties go to the shallower, then earlier, node.
    pub fn best_node(&self) -> NodeId {
        self.nodes
            .iter()
            .min_by(|a, b| {
                b.reward
                    .cmp(&a.reward)
                    .then(a.depth.cmp(&b.depth))
                    .then(a.node_id.cmp(&b.node_id))
            })
            .map(|n| n.node_id)
            .unwrap_or(ROOT)
    }

    /// One line per node, in creation order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            let record = serde_json::json!({
                "node_id": n.node_id,
                "parent": n.parent,
                "depth": n.depth,
                "reward": n.reward,
                "visits": n.visit_count,
                "mean": n.mean(),
                "query": n.query,
            });
            let _ = writeln!(out, "{record}");
        }
        out
    }
}
