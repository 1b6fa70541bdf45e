// Plain BM25, the self-reflection chain and tree search on the same
// questions, scored against the gold abstracts.

use std::error::Error;
use std::sync::Arc;

use serts::gateway::MockBackend;
use serts::metrics::retrieval_metrics;
use serts::{
    load_corpus, load_questions, run_bm25, run_reflection, run_serts, Bm25Index, Bm25Params, Gateway,
    GenerationSettings, SearchConfig,
};

const CORPUS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/corpus.jsonl");
const QUESTIONS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/questions.jsonl");
const SCRIPT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/mock_script.jsonl");

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let index = Bm25Index::build(Arc::new(load_corpus(CORPUS)?), Bm25Params::default());
    let questions = load_questions(QUESTIONS)?;
    let backend = Arc::new(MockBackend::from_file(SCRIPT)?);
    let config = SearchConfig::default();

    println!("{:<4} {:<11} {:>5} {:>5} {:>5} {:>5}", "q", "method", "P", "R", "F1", "calls");
    for q in &questions {
        let gateway = Gateway::new(backend.clone(), GenerationSettings::default());
        let bm25 = run_bm25(q, &index, config.top_k);
        let (reflect, _) = run_reflection(q, &index, &gateway, &config, 42)?;
        let (tree, _) = run_serts(q, &index, &gateway, &config, 42)?;
        for outcome in [&bm25, &reflect, &tree] {
            let m = retrieval_metrics(&outcome.doc_ids, &q.gold_doc_ids);
            println!(
                "{:<4} {:<11} {:>5.2} {:>5.2} {:>5.2} {:>5}",
                q.id,
                outcome.method.as_str(),
                m.precision,
                m.recall,
                m.f1,
                outcome.llm_calls
            );
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
