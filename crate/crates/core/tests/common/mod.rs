//! Shared helpers for integration tests: a scripted chat-completion mock
//! server and small fixture builders.
#![allow(dead_code)]

use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread;

use serde_json::{json, Value};

type Handler = dyn Fn(&Value) -> (u16, String) + Send + Sync;

/// HTTP/1.1 server on 127.0.0.1 answering `POST .../chat/completions` with
/// whatever the handler returns. Counts requests and peak concurrency.
pub struct MockServer {
    pub base_url: String,
    requests: Arc<AtomicUsize>,
    peak: Arc<AtomicUsize>,
}

impl MockServer {
    pub fn start<F>(handler: F) -> Self
    where
        F: Fn(&Value) -> (u16, String) + Send + Sync + 'static,
    {
        let listener = TcpListener::bind("127.0.0.1:0").expect("bind mock server");
        let addr = listener.local_addr().unwrap();
        let handler: Arc<Handler> = Arc::new(handler);
        let requests = Arc::new(AtomicUsize::new(0));
        let peak = Arc::new(AtomicUsize::new(0));
        let in_flight = Arc::new(AtomicUsize::new(0));
        {
            let (requests, peak) = (requests.clone(), peak.clone());
            thread::spawn(move || {
                for stream in listener.incoming() {
                    let Ok(stream) = stream else { continue };
                    let (handler, requests, peak, in_flight) =
                        (handler.clone(), requests.clone(), peak.clone(), in_flight.clone());
                    thread::spawn(move || {
                        let now = in_flight.fetch_add(1, Ordering::SeqCst) + 1;
                        peak.fetch_max(now, Ordering::SeqCst);
                        requests.fetch_add(1, Ordering::SeqCst);
                        // released before the reply is written, so the client
                        // cannot start its next request while this one still counts
                        let _ = serve(stream, &*handler, || {
                            in_flight.fetch_sub(1, Ordering::SeqCst);
                        });
                    });
                }
            });
        }
        MockServer {
            base_url: format!("http://{addr}/v1"),
            requests,
            peak,
        }
    }

    pub fn requests(&self) -> usize {
        self.requests.load(Ordering::SeqCst)
    }

    pub fn peak_concurrency(&self) -> usize {
        self.peak.load(Ordering::SeqCst)
    }
}

fn serve(stream: TcpStream, handler: &Handler, done: impl FnOnce()) -> std::io::Result<()> {
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut content_length = 0usize;
    let mut line = String::new();
    loop {
        line.clear();
        if reader.read_line(&mut line).unwrap_or(0) == 0 {
            done();
            return Ok(());
        }
        let trimmed = line.trim_end();
        if trimmed.is_empty() {
            break;
        }
        if let Some((name, value)) = trimmed.split_once(':') {
            if name.eq_ignore_ascii_case("content-length") {
                content_length = value.trim().parse().unwrap_or(0);
            }
        }
    }
    let mut body = vec![0u8; content_length];
    let read = reader.read_exact(&mut body);
    let request: Value = serde_json::from_slice(&body).unwrap_or(Value::Null);
    let (status, payload) = handler(&request);
    done();
    read?;
    let reason = match status {
        200 => "OK",
        401 => "Unauthorized",
        429 => "Too Many Requests",
        500 => "Internal Server Error",
        503 => "Service Unavailable",
        _ => "Status",
    };
    let mut stream = stream;
    write!(
        stream,
        "HTTP/1.1 {status} {reason}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{payload}",
        payload.len()
    )?;
    stream.flush()
}

/// A successful completion body carrying `text`.
pub fn completion(text: &str) -> (u16, String) {
    (
        200,
        json!({
            "id": "cmpl-mock",
            "object": "chat.completion",
            "choices": [{"index": 0, "message": {"role": "assistant", "content": text}, "finish_reason": "stop"}]
        })
        .to_string(),
    )
}

pub fn error(status: u16, message: &str) -> (u16, String) {
    (status, json!({"error": {"message": message}}).to_string())
}

/// Content of the message with `role` in a request body.
pub fn message<'a>(request: &'a Value, role: &str) -> Option<&'a str> {
    request["messages"]
        .as_array()?
        .iter()
        .find(|m| m["role"] == role)
        .and_then(|m| m["content"].as_str())
}

pub fn user_prompt(request: &Value) -> &str {
    message(request, "user").unwrap_or_default()
}

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub mod corpus;
pub mod fixture;
pub mod oracles;
pub mod survey;
