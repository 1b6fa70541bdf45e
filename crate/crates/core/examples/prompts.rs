// Render the evaluator, proposer, reflection and answer prompts for one
// question, then parse the tagged replies a model would send back.

use std::error::Error;

use serts::gateway::{
    parse_query, parse_score_feedback, render_answer_prompt, render_eval_prompt, render_query_prompt,
    render_reflect_prompt,
};
use serts::{load_corpus, load_questions, Observation};

const CORPUS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/corpus.jsonl");
const QUESTIONS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/questions.jsonl");

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let corpus = load_corpus(CORPUS)?;
    let questions = load_questions(QUESTIONS)?;
    let q = &questions[0];
    let docs = corpus.resolve(&["pm1", "pm2"])?;

    let eval = render_eval_prompt(q, &docs);
    println!("--- evaluator prompt ---\n{eval}");
    assert!(eval.contains("<score>3</score>"));

    // The state of a node whose parent already has one child.
    let obs = Observation {
        ancestor_queries: vec![q.text.clone()],
        ancestor_docs: vec!["pm1".into(), "pm2".into()],
        sibling_queries: vec!["Which types of B-cell lymphoma can be treated with Glofitamab?".into()],
        sibling_feedback: vec!["Covers DLBCL and mantle cell lymphoma only.".into()],
    };
    let proposer = render_query_prompt(q, &obs, &corpus);
    println!("--- proposer prompt ---\n{proposer}");
    assert!(proposer.contains("<query_proposal>"));
    assert!(proposer.contains("<query> Query Here </query>"));

    let reflect = render_reflect_prompt(q, &obs, &corpus);
    assert!(!reflect.contains("<query_proposal>"));
    println!("reflection prompt: {} bytes, no sibling block", reflect.len());

    let answer = render_answer_prompt(q, &docs);
    assert!(answer.starts_with("You are an expert in the field of biomedical science."));

    let reply = "The abstracts only cover DLBCL.\n<query> glofitamab follicular lymphoma </query>";
    let proposal = parse_query(reply)?;
    println!("\nparsed query: {:?}", proposal.query);

    let verdict = parse_score_feedback("Relevant but incomplete. <score> 3 </score>")?;
    println!("parsed score {} with feedback {:?}", verdict.score, verdict.feedback.trim());
    assert_eq!(verdict.score, 3);

    assert!(parse_query("no tags at all").is_err());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
