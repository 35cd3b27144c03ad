//! Closed-vocabulary genre and reading-age facets.
//!
//! Provider subject headings are noisy and open-ended. Every volume is mapped
//! to exactly one [`Genre`] and one [`AgeBand`], either by a chat-completion
//! model whose answers are strictly validated against the enumerations, or by
//! the keyword rules in `data/facet_keywords.toml`.

mod llm;
mod rules;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ingest::Isbn13;
use crate::metadata::{Secret, VolumeMeta};
use crate::workers::bounded_map;

pub use llm::{build_prompt, ChatCompletionClassifier, FacetAnswer, FacetClassifier, LlmError, DEFAULT_ENDPOINT};
pub use rules::{rules_normalize, rules_normalize_with, KeywordTable, KeywordTableError, DEFAULT_KEYWORDS_TOML};

/// Genre buckets, in sort (declaration) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Genre {
    Fantasy,
    SciFi,
    Dystopian,
    Mystery,
    Horror,
    Historical,
    Romance,
    Classics,
    Other,
    Nonfiction,
}

impl Genre {
    pub const ALL: [Genre; 10] = [
        Genre::Fantasy,
        Genre::SciFi,
        Genre::Dystopian,
        Genre::Mystery,
        Genre::Horror,
        Genre::Historical,
        Genre::Romance,
        Genre::Classics,
        Genre::Other,
        Genre::Nonfiction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Genre::Fantasy => "Fantasy",
            Genre::SciFi => "SciFi",
            Genre::Dystopian => "Dystopian",
            Genre::Mystery => "Mystery",
            Genre::Horror => "Horror",
            Genre::Historical => "Historical",
            Genre::Romance => "Romance",
            Genre::Classics => "Classics",
            Genre::Other => "Other",
            Genre::Nonfiction => "Nonfiction",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AgeBand {
    Children,
    MiddleGrade,
    YoungAdult,
    Adult,
}

impl AgeBand {
    pub const ALL: [AgeBand; 4] = [AgeBand::Children, AgeBand::MiddleGrade, AgeBand::YoungAdult, AgeBand::Adult];

    pub fn name(self) -> &'static str {
        match self {
            AgeBand::Children => "Children",
            AgeBand::MiddleGrade => "MiddleGrade",
            AgeBand::YoungAdult => "YoungAdult",
            AgeBand::Adult => "Adult",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{value:?} is not one of the {kind} values")]
pub struct UnknownFacet {
    pub kind: &'static str,
    pub value: String,
}

impl FromStr for Genre {
    type Err = UnknownFacet;

    /// Exact (case-insensitive) canonical names only; no synonyms.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Genre::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownFacet { kind: "genre", value: s.to_string() })
    }
}

impl FromStr for AgeBand {
    type Err = UnknownFacet;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AgeBand::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownFacet { kind: "age band", value: s.to_string() })
    }
}

impl fmt::Display for Genre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for AgeBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FacetSource {
    #[serde(rename = "LLM")]
    Llm,
    Rules,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Facets {
    pub genre: Genre,
    pub age_band: AgeBand,
    pub facet_source: FacetSource,
}

#[derive(Debug, Clone)]
pub struct NormalizerConfig {
    pub batch_size: usize,
    pub api_key: Secret,
    pub model_id: String,
    pub timeout_ms: u64,
    pub endpoint: String,
    /// Upper bound on batches sent at the same time.
    pub max_concurrent_batches: usize,
    /// When false the model is never called and every volume goes through the rules.
    pub llm_enabled: bool,
}

impl Default for NormalizerConfig {
    fn default() -> Self {
        NormalizerConfig {
            batch_size: 25,
            api_key: Secret::default(),
            model_id: "claude-3-haiku-20240307".to_string(),
            timeout_ms: 30_000,
            endpoint: DEFAULT_ENDPOINT.to_string(),
            max_concurrent_batches: 2,
            llm_enabled: false,
        }
    }
}

impl NormalizerConfig {
    /// `LLM_API_KEY`, `LLM_ENDPOINT`, `LLM_MODEL`; `LIBRARYLENS_LLM_DISABLED=1`
    /// (or a missing key) selects the rules only.
    pub fn from_env() -> Self {
        let mut config = NormalizerConfig::default();
        if let Ok(key) = std::env::var("LLM_API_KEY") {
            config.api_key = Secret::new(key);
        }
        if let Ok(endpoint) = std::env::var("LLM_ENDPOINT") {
            config.endpoint = endpoint;
        }
        if let Ok(model) = std::env::var("LLM_MODEL") {
            config.model_id = model;
        }
        let disabled = std::env::var("LIBRARYLENS_LLM_DISABLED").is_ok_and(|v| v.trim() == "1");
        config.llm_enabled = !disabled && !config.api_key.is_empty();
        config
    }
}

fn normalize_chunk(
    chunk: &[VolumeMeta],
    classifier: Option<&dyn FacetClassifier>,
    table: &KeywordTable,
) -> Vec<(Isbn13, Facets)> {
    let answers = match classifier {
        Some(c) => match c.classify(chunk) {
            Ok(answers) => answers,
            Err(e) => {
                log::warn!("facet model unavailable for a batch of {}: {e}; using rules", chunk.len());
                Vec::new()
            }
        },
        None => Vec::new(),
    };
    let mut by_isbn: BTreeMap<&str, &FacetAnswer> = BTreeMap::new();
    for answer in &answers {
        by_isbn.entry(answer.isbn13.trim()).or_insert(answer);
    }
    chunk
        .iter()
        .map(|meta| {
            let validated = by_isbn.get(meta.isbn13.as_str()).and_then(|a| {
                match (a.genre.parse::<Genre>(), a.age_band.parse::<AgeBand>()) {
                    (Ok(genre), Ok(age_band)) => Some(Facets { genre, age_band, facet_source: FacetSource::Llm }),
                    (g, b) => {
                        log::info!(
                            "{}: rejecting model facets ({:?}, {:?})",
                            meta.isbn13,
                            g.err().map(|e| e.value),
                            b.err().map(|e| e.value)
                        );
                        None
                    }
                }
            });
            let facets = validated.unwrap_or_else(|| rules_normalize_with(meta, table));
            (meta.isbn13.clone(), facets)
        })
        .collect()
}

/// Assigns one [`Facets`] to every volume.
///
/// Volumes are sent to `classifier` in chunks of at most `config.batch_size`.
/// Answers outside the enumerations, missing answers, and failed batches all
/// fall back to the keyword rules for the affected volumes.
pub fn normalize_batch(
    volumes: &[VolumeMeta],
    config: &NormalizerConfig,
    classifier: Option<&dyn FacetClassifier>,
) -> BTreeMap<Isbn13, Facets> {
    normalize_batch_with(volumes, config, classifier, KeywordTable::bundled())
}

pub fn normalize_batch_with(
    volumes: &[VolumeMeta],
    config: &NormalizerConfig,
    classifier: Option<&dyn FacetClassifier>,
    table: &KeywordTable,
) -> BTreeMap<Isbn13, Facets> {
    let classifier = classifier.filter(|_| config.llm_enabled);
    let chunks: Vec<&[VolumeMeta]> = volumes.chunks(config.batch_size.max(1)).collect();
    bounded_map(&chunks, config.max_concurrent_batches, |chunk| normalize_chunk(chunk, classifier, table))
        .into_iter()
        .flatten()
        .collect()
}
