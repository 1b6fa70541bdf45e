// The scripted backend answers by call site (question, node path, role), so a
// search replays identically no matter how calls interleave.

use std::error::Error;

use serts::gateway::{MockBackend, MockEntry};
use serts::{Backend, CallKey, ChatRequest, GenerationSettings, Role};

const SCRIPT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/mock_script.jsonl");

fn ask(backend: &MockBackend, q: &str, path: &str, role: Role) -> serts::Result<String> {
    let req = ChatRequest::new("prompt text", CallKey::new(q, path, role), &GenerationSettings::default());
    Ok(backend.complete(&req)?.text)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let backend = MockBackend::from_file(SCRIPT)?;
    println!("{} scripted replies", backend.len());

    // An exact entry, a question-level wildcard, and a global fallback.
    println!("q1 /0 eval   -> {:?}", ask(&backend, "q1", "/0", Role::Eval)?);
    println!("q2 /2 query  -> {:?}", ask(&backend, "q2", "/2", Role::Query)?);
    println!("q9 /1/1 eval -> {:?}", ask(&backend, "q9", "/1/1", Role::Eval)?);

    let small = MockBackend::from_entries([
        MockEntry::new("q1", "/0", None, "a b c"),
        MockEntry::new("q1", "/0", Some(Role::Eval), "<score>4</score>"),
    ]);
    let req = ChatRequest::new("One, two.", CallKey::new("q1", "/0", Role::Query), &GenerationSettings::default());
    let resp = small.complete(&req)?;
    println!("\nreply {:?}: {} prompt tokens, {} completion tokens", resp.text, resp.prompt_tokens, resp.completion_tokens);
    assert_eq!(resp.completion_tokens, 3);
    assert_eq!(ask(&small, "q1", "/0", Role::Eval)?, "<score>4</score>");

    match ask(&small, "q2", "/1", Role::Eval) {
        Err(e) => println!("unscripted call: {e}"),
        Ok(text) => panic!("expected a missing key, got {text:?}"),
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
