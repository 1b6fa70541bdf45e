// Trajectories are (observation prompt, proposer completion, reward) records.
// Write them as JSON lines and read them back for policy training.

use std::error::Error;
use std::sync::Arc;

use serts::gateway::MockBackend;
use serts::{
    export_trajectories, import_trajectories, load_corpus, load_questions, run_serts, Bm25Index, Bm25Params,
    Gateway, GenerationSettings, SearchConfig,
};

const CORPUS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/corpus.jsonl");
const QUESTIONS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/questions.jsonl");
const SCRIPT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/mock_script.jsonl");

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let index = Bm25Index::build(Arc::new(load_corpus(CORPUS)?), Bm25Params::default());
    let gateway = Gateway::new(Arc::new(MockBackend::from_file(SCRIPT)?), GenerationSettings::default());
    let mut records = Vec::new();
    for q in load_questions(QUESTIONS)? {
        let (_, mut recs) = run_serts(&q, &index, &gateway, &SearchConfig::default(), 7)?;
        for r in &mut recs {
            r.seed = Some(7);
        }
        records.extend(recs);
    }

    let dir = tempfile::tempdir()?;
    let path = dir.path().join("trajectories.jsonl");
    export_trajectories(&records, &path)?;
    let back = import_trajectories(&path)?;
    assert_eq!(back, records);

    let first = &back[0];
    println!("{} records written to {}", back.len(), path.display());
    println!("first record: question {} node {} reward {}", first.question_id, first.node_id, first.reward);
    println!("observation starts: {:?}", &first.prompt[..80]);
    println!("action: {:?}", first.completion);

    let positive = back.iter().filter(|r| r.reward >= 4).count();
    println!("{positive} of {} actions earned a reward of 4 or more", back.len());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
