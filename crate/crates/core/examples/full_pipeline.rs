// End to end: retrieve with tree search over three seeds, answer each
// question from the retrieved abstracts, write the report and trajectories,
// then recompute the report offline.

use std::error::Error;
use std::path::PathBuf;

use serts::cli::{cmd_eval, cmd_run, RunConfig};
use serts::Method;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let out = tempfile::tempdir()?;
    let mut config = RunConfig::new(data("corpus.jsonl"), data("questions.jsonl"), Method::Serts);
    config.mock_script_path = Some(data("mock_script.jsonl"));
    config.generate_answers = true;
    config.workers = 3;
    config.out_report = Some(out.path().join("report.json"));
    config.out_trajectories = Some(out.path().join("trajectories.jsonl"));

    let run = cmd_run(&config)?;
    let report = &run.report;
    println!("seeds {:?}, {} trajectory records", report.seeds, run.trajectories.len());
    for row in &report.runs[0].questions {
        println!("{}: {:?}\n    {}", row.question_id, row.doc_ids, row.answer.as_deref().unwrap_or(""));
    }
    println!("\n{}", serde_json::to_string_pretty(&report.aggregate)?);

    let again = cmd_eval(config.out_report.as_ref().unwrap(), &data("questions.jsonl"))?;
    assert_eq!(again.aggregate, report.aggregate);
    println!("offline re-scoring reproduces the aggregate");
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
