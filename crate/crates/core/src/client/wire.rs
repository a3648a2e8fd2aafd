use serde_json::{json, Map, Value};

use super::{ChatRequest, ModelEndpoint};

/// JSON body for `POST /chat/completions`. Each request carries only its own
/// prompts, so sessions never share history.
pub fn request_body(endpoint: &ModelEndpoint, request: &ChatRequest) -> Value {
    let mut messages = Vec::with_capacity(2);
    if let Some(system) = &request.system_prompt {
        messages.push(json!({"role": "system", "content": system}));
    }
    messages.push(json!({"role": "user", "content": request.user_prompt}));

    let mut body = Map::new();
    body.insert("model".into(), json!(endpoint.model_name));
    body.insert("messages".into(), Value::Array(messages));
    body.insert("temperature".into(), json!(endpoint.temperature));
    if let Some(p) = endpoint.top_p {
        body.insert("top_p".into(), json!(p));
    }
    if let Some(m) = endpoint.max_tokens {
        body.insert("max_tokens".into(), json!(m));
    }
    Value::Object(body)
}

/// `choices[0].message.content` of a completion response.
pub fn completion_text(body: &Value) -> Option<String> {
    let content = body.get("choices")?.get(0)?.get("message")?.get("content")?;
    match content {
        Value::String(s) => Some(s.clone()),
        // some servers return content parts
        Value::Array(parts) => Some(
            parts
                .iter()
                .filter_map(|p| p.get("text").and_then(Value::as_str))
                .collect::<Vec<_>>()
                .join(""),
        ),
        _ => None,
    }
}

/// Best-effort server message from an error body.
pub(crate) fn error_message(raw: &str) -> String {
    serde_json::from_str::<Value>(raw)
        .ok()
        .and_then(|v| {
            v.pointer("/error/message")
                .or_else(|| v.get("error"))
                .or_else(|| v.get("message"))
                .and_then(Value::as_str)
                .map(str::to_string)
        })
        .unwrap_or_else(|| raw.trim().to_string())
}
