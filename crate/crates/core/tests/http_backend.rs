use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use serts::gateway::{HttpBackend, RetryPolicy};
use serts::{Backend, CallKey, ChatRequest, Error, GenerationSettings, Role};

struct Captured {
    request_line: String,
    headers: Vec<String>,
    body: serde_json::Value,
}

/// Serves one scripted (status, body) per connection, then stops.
fn serve(replies: Vec<(u16, String)>) -> (String, mpsc::Receiver<Captured>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        for (status, body) in replies {
            let (mut stream, _) = listener.accept().unwrap();
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut request_line = String::new();
            reader.read_line(&mut request_line).unwrap();
            let mut headers = Vec::new();
            let mut len = 0;
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).unwrap();
                let line = line.trim_end().to_string();
                if line.is_empty() {
                    break;
                }
                if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                    len = v.trim().parse().unwrap();
                }
                headers.push(line);
            }
            let mut buf = vec![0; len];
            reader.read_exact(&mut buf).unwrap();
            let _ = tx.send(Captured {
                request_line: request_line.trim_end().to_string(),
                headers,
                body: serde_json::from_slice(&buf).unwrap_or(serde_json::Value::Null),
            });
            let resp = format!(
                "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                body.len()
            );
            stream.write_all(resp.as_bytes()).unwrap();
        }
    });
    (format!("http://{addr}/v1"), rx)
}

fn fast_retry() -> RetryPolicy {
    RetryPolicy {
        max_attempts: 3,
        initial_backoff: Duration::from_millis(5),
        multiplier: 2,
    }
}

fn request() -> ChatRequest {
    let settings = GenerationSettings {
        model: "test-model".into(),
        ..Default::default()
    };
    ChatRequest::new("Hello there", CallKey::new("q1", "/0", Role::Query), &settings).with_seed(42)
}

const OK_BODY: &str = r#"{"choices":[{"message":{"role":"assistant","content":"<query> lymphoma </query>"}}],"usage":{"prompt_tokens":12,"completion_tokens":5}}"#;

#[test]
fn success_reports_usage_and_sends_openai_shape() {
    let (base, rx) = serve(vec![(200, OK_BODY.into())]);
    let backend = HttpBackend::new(&base, "secret").with_retry(fast_retry());
    let resp = backend.complete(&request()).unwrap();
    assert_eq!(resp.text, "<query> lymphoma </query>");
    assert_eq!((resp.prompt_tokens, resp.completion_tokens), (12, 5));

    let got = rx.recv().unwrap();
    assert_eq!(got.request_line, "POST /v1/chat/completions HTTP/1.1");
    assert!(got.headers.iter().any(|h| h == "authorization: Bearer secret" || h == "Authorization: Bearer secret"));
    assert_eq!(got.body["model"], "test-model");
    assert_eq!(got.body["messages"][0]["role"], "user");
    assert_eq!(got.body["messages"][0]["content"], "Hello there");
    assert_eq!(got.body["temperature"], 0.7);
    assert_eq!(got.body["max_tokens"], 4096);
    assert_eq!(got.body["seed"], 42);
}

#[test]
fn three_server_errors_surface_transport_error() {
    let (base, rx) = serve(vec![(500, "{}".into()); 3]);
    let backend = HttpBackend::new(&base, "k").with_retry(fast_retry());
    match backend.complete(&request()) {
        Err(Error::Transport { attempts, message }) => {
            assert_eq!(attempts, 3);
            assert!(message.contains("500"));
        }
        other => panic!("unexpected {other:?}"),
    }
    assert_eq!(rx.iter().take(3).count(), 3);
}

#[test]
fn recovers_after_rate_limit() {
    let (base, _rx) = serve(vec![(429, "{}".into()), (503, "{}".into()), (200, OK_BODY.into())]);
    let backend = HttpBackend::new(&base, "k").with_retry(fast_retry());
    assert_eq!(backend.complete(&request()).unwrap().completion_tokens, 5);
}

#[test]
fn client_errors_are_not_retried() {
    let (base, rx) = serve(vec![(401, r#"{"error":"bad key"}"#.into())]);
    let backend = HttpBackend::new(&base, "k").with_retry(fast_retry());
    match backend.complete(&request()) {
        Err(Error::Transport { attempts, message }) => {
            assert_eq!(attempts, 1);
            assert!(message.contains("bad key"));
        }
        other => panic!("unexpected {other:?}"),
    }
    assert_eq!(rx.iter().count(), 1);
}

#[test]
fn unreachable_server_is_transport_error() {
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let backend = HttpBackend::new(&format!("http://127.0.0.1:{port}/v1/"), "k").with_retry(fast_retry());
    assert_eq!(backend.endpoint(), format!("http://127.0.0.1:{port}/v1/chat/completions"));
    assert!(matches!(backend.complete(&request()), Err(Error::Transport { attempts: 3, .. })));
}
