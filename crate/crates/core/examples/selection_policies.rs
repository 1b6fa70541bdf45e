// The three selection settings compared in the ablation: uniform random
// choice, greedy max-UCB (C = 0) and max-UCB with exploration (C = 0.1).

use std::error::Error;
use std::path::PathBuf;

use serts::cli::{cmd_run, RunConfig};
use serts::{Method, SelectionPolicy};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let settings = [
        ("random", SelectionPolicy::Random, 0.1),
        ("max-UCB, C=0.0", SelectionPolicy::MaxUcb, 0.0),
        ("max-UCB, C=0.1", SelectionPolicy::MaxUcb, 0.1),
    ];
    println!("{:<16} {:>7} {:>7} {:>7} {:>7} {:>6}", "policy", "P", "R", "F1", "Hit", "Sim");
    for (name, policy, c) in settings {
        let mut config = RunConfig::new(data("corpus.jsonl"), data("questions.jsonl"), Method::Serts);
        config.mock_script_path = Some(data("mock_script.jsonl"));
        config.search.policy = policy;
        config.search.exploration_c = c;
        config.workers = 2;
        let a = cmd_run(&config)?.report.aggregate;
        println!(
            "{name:<16} {:>7.2} {:>7.2} {:>7.2} {:>7.2} {:>6}",
            a.precision, a.recall, a.f1, a.hit_rate, a.simulations_used
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
