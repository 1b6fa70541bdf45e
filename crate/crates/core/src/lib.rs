//! Retrieval orchestration for biomedical question answering.
//!
//! A BM25 retriever is wrapped in a Monte Carlo tree search whose expansions
//! are proposed by one prompted LLM agent and scored by another. A sibling-free
//! self-reflection chain and plain BM25 serve as baselines. Searches emit
//! (observation, action, reward) trajectories for downstream policy training.
//!
//! The runnable programs under `examples/` walk through each capability.

pub mod bm25;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod gateway;
pub mod metrics;
pub mod orchestrator;
pub mod report;
pub mod tree;

pub use bm25::{Bm25Index, Bm25Params, ScoredHit};
pub use corpus::{load_corpus, load_questions, tokenize, Corpus, Document, Question};
pub use error::{Error, Result};
pub use gateway::{Backend, CallKey, ChatRequest, ChatResponse, Gateway, GenerationSettings, Role};
pub use orchestrator::{
    export_trajectories, generate_answer, import_trajectories, run_bm25, run_reflection,
    run_serts, Method, RetrievalOutcome, TrajectoryRecord,
};
pub use tree::{Observation, SearchConfig, SearchTree, SelectionPolicy, UcbForm};
