//! Chat-completion facet classifier for any OpenAI-compatible endpoint.
//!
//! One request per batch. The system message lists both enumerations and asks
//! for a JSON object `{"results": [{"isbn13", "genre", "age_band"}]}`; the user
//! message carries the batch as a JSON array. Validation against the
//! enumerations happens in the caller, not here.

use std::time::Duration;

use reqwest::blocking::Client;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{AgeBand, Genre, NormalizerConfig};
use crate::metadata::VolumeMeta;

pub const DEFAULT_ENDPOINT: &str = "https://api.anthropic.com/v1/chat/completions";

/// One model answer, unvalidated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetAnswer {
    pub isbn13: String,
    pub genre: String,
    pub age_band: String,
}

#[derive(Debug, thiserror::Error)]
pub enum LlmError {
    #[error("request failed: {0}")]
    Transport(String),
    #[error("HTTP {0}")]
    Status(u16),
    #[error("unexpected response shape: {0}")]
    Shape(String),
}

pub trait FacetClassifier: Send + Sync {
    fn classify(&self, batch: &[VolumeMeta]) -> Result<Vec<FacetAnswer>, LlmError>;
}

/// Returns the `(system, user)` message pair for one batch.
pub fn build_prompt(batch: &[VolumeMeta]) -> (String, String) {
    let genres: Vec<&str> = Genre::ALL.iter().map(|g| g.name()).collect();
    let bands: Vec<&str> = AgeBand::ALL.iter().map(|a| a.name()).collect();
    let system = format!(
        "You classify books for a personal library. For every book in the user's list choose \
         exactly one genre from [{}] and exactly one reading-age band from [{}]. Use the title, \
         authors and subject headings; when they are missing or contradictory, infer the most \
         likely values. Reply with a single JSON object of the form \
         {{\"results\": [{{\"isbn13\": \"...\", \"genre\": \"...\", \"age_band\": \"...\"}}]}} \
         containing one entry per book and nothing else. Use the values exactly as spelled.",
        genres.join(", "),
        bands.join(", ")
    );
    let items: Vec<Value> = batch
        .iter()
        .map(|m| {
            json!({
                "isbn13": m.isbn13.as_str(),
                "title": m.title,
                "authors": m.authors,
                "subjects": m.subjects,
            })
        })
        .collect();
    let user = serde_json::to_string(&items).expect("prompt items serialize");
    (system, user)
}

#[derive(Deserialize)]
struct Answers {
    results: Vec<FacetAnswer>,
}

/// Pulls the answer list out of the model's message text, tolerating a
/// Markdown code fence around the JSON.
pub(crate) fn parse_answers(content: &str) -> Result<Vec<FacetAnswer>, LlmError> {
    let trimmed = content.trim();
    let body = trimmed
        .strip_prefix("```json")
        .or_else(|| trimmed.strip_prefix("```"))
        .and_then(|s| s.strip_suffix("```"))
        .unwrap_or(trimmed);
    let answers: Answers = serde_json::from_str(body.trim()).map_err(|e| LlmError::Shape(e.to_string()))?;
    Ok(answers.results)
}

pub struct ChatCompletionClassifier {
    client: Client,
    endpoint: String,
    api_key: String,
    model: String,
}

impl ChatCompletionClassifier {
    pub fn new(config: &NormalizerConfig) -> Result<Self, LlmError> {
        let client = Client::builder()
            .timeout(Duration::from_millis(config.timeout_ms.max(1)))
            .build()
            .map_err(|e| LlmError::Transport(e.to_string()))?;
        Ok(ChatCompletionClassifier {
            client,
            endpoint: config.endpoint.clone(),
            api_key: config.api_key.expose().to_string(),
            model: config.model_id.clone(),
        })
    }
}

impl FacetClassifier for ChatCompletionClassifier {
    fn classify(&self, batch: &[VolumeMeta]) -> Result<Vec<FacetAnswer>, LlmError> {
        if batch.is_empty() {
            return Ok(Vec::new());
        }
        let (system, user) = build_prompt(batch);
        let body = json!({
            "model": self.model,
            "temperature": 0,
            "response_format": {"type": "json_object"},
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": user},
            ],
        });
        let resp = self
            .client
            .post(&self.endpoint)
            .bearer_auth(&self.api_key)
            .json(&body)
            .send()
            .map_err(|e| LlmError::Transport(e.to_string()))?;
        if !resp.status().is_success() {
            return Err(LlmError::Status(resp.status().as_u16()));
        }
        let reply: Value = resp.json().map_err(|e| LlmError::Shape(e.to_string()))?;
        let content = reply
            .pointer("/choices/0/message/content")
            .and_then(Value::as_str)
            .ok_or_else(|| LlmError::Shape("missing choices[0].message.content".into()))?;
        parse_answers(content)
    }
}
