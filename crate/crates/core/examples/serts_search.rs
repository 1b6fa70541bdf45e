// Tree search for a single question with the scripted backend. Prints the
// final tree, the trajectory records and the documents handed to the reader.

use std::error::Error;
use std::sync::Arc;

use serts::gateway::MockBackend;
use serts::orchestrator::run_serts_with_tree;
use serts::{load_corpus, load_questions, Bm25Index, Bm25Params, Gateway, GenerationSettings, SearchConfig};

const CORPUS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/corpus.jsonl");
const QUESTIONS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/questions.jsonl");
const SCRIPT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/mock_script.jsonl");

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let index = Bm25Index::build(Arc::new(load_corpus(CORPUS)?), Bm25Params::default());
    let questions = load_questions(QUESTIONS)?;
    let gateway = Gateway::new(Arc::new(MockBackend::from_file(SCRIPT)?), GenerationSettings::default());

    let q = &questions[0];
    let (outcome, records, tree) = run_serts_with_tree(q, &index, &gateway, &SearchConfig::default(), 42)?;

    println!("{}", q.text);
    for node in tree.nodes() {
        let indent = "  ".repeat(node.depth);
        let mean = node.mean().map(|m| format!("{m:.2}")).unwrap_or_else(|| "-".into());
        println!(
            "{indent}{} r={} N={} mean={mean} {:?} -> {:?}",
            tree.node_path(node.node_id),
            node.reward,
            node.visit_count,
            node.query,
            node.doc_ids
        );
    }

    println!("\n{} simulations, {} LLM calls", outcome.simulations_used, outcome.llm_calls);
    for r in &records {
        println!("sim {} node {} <- {}: reward {} for {:?}", r.sim_index, r.node_id, r.parent_id, r.reward, r.query);
    }
    println!("best reward {}, documents {:?}", outcome.best_reward, outcome.doc_ids);
    assert_eq!(outcome.best_reward, 5);
    assert!(outcome.doc_ids.contains(&"pm5".to_string()));

    let usage = gateway.usage_stats();
    println!("{} prompt and {} completion tokens", usage.prompt_tokens, usage.completion_tokens);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
