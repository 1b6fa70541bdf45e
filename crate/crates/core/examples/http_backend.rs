// Talking to an OpenAI-compatible server. Without SERTS_BASE_URL and
// SERTS_API_KEY set this only shows the endpoint and the retry schedule.
//
//     SERTS_BASE_URL=http://localhost:8000/v1 SERTS_API_KEY=... \
//         cargo run --example http_backend

use std::error::Error;

use serts::gateway::{HttpBackend, RetryPolicy, API_KEY_ENV};
use serts::{Backend, CallKey, ChatRequest, GenerationSettings, Role};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let policy = RetryPolicy::default();
    for attempt in 1..policy.max_attempts {
        println!("after failed attempt {attempt}, wait {:?}", policy.backoff(attempt));
    }

    let Ok(base_url) = std::env::var("SERTS_BASE_URL") else {
        let backend = HttpBackend::new("http://localhost:8000/v1", "unused");
        println!("would POST to {}; set SERTS_BASE_URL and {API_KEY_ENV} to send a request", backend.endpoint());
        return Ok(());
    };
    let backend = HttpBackend::from_env(&base_url)?;
    let settings = GenerationSettings {
        model: std::env::var("SERTS_MODEL").unwrap_or_else(|_| "gpt-3.5-turbo".into()),
        ..Default::default()
    };
    let req = ChatRequest::new(
        "Propose one search query about glofitamab. Answer as <query> ... </query>.",
        CallKey::new("demo", "/0", Role::Query),
        &settings,
    )
    .with_seed(42);
    let resp = backend.complete(&req)?;
    println!("{}\n({} prompt / {} completion tokens)", resp.text, resp.prompt_tokens, resp.completion_tokens);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
