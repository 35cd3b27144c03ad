use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::dimensions::{parse_reported_dimensions, resolve_dimensions, DimensionSource};
use crate::ingest::{Binding, Isbn13};

/// Enriched metadata for one edition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeMeta {
    pub isbn13: Isbn13,
    pub title: String,
    pub authors: Vec<String>,
    pub binding: Binding,
    pub page_count: u32,
    pub height_mm: f64,
    pub spine_thickness_mm: f64,
    /// URL or provider-specific reference to the cover image.
    pub cover_image: Option<String>,
    pub average_rating: Option<f64>,
    /// Raw subject strings, un-normalized.
    pub subjects: Vec<String>,
    pub dimension_source: DimensionSource,
}

/// The structured body a provider returns for one ISBN. Every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ProviderRecord {
    #[serde(default)]
    pub title: Option<String>,
    #[serde(default)]
    pub authors: Vec<String>,
    #[serde(default)]
    pub pages: Option<u32>,
    #[serde(default)]
    pub binding: Option<String>,
    #[serde(default)]
    pub dimensions: Value,
    #[serde(default)]
    pub dimensions_structured: Value,
    #[serde(default)]
    pub image: Option<String>,
    #[serde(default)]
    pub subjects: Vec<String>,
    #[serde(default)]
    pub rating: Option<f64>,
}

impl ProviderRecord {
    /// Normalizes a provider body: binding to the closed enum, dimensions
    /// clamped or estimated, rating dropped when outside `[0, 5]`.
    pub fn into_meta(self, isbn13: Isbn13) -> VolumeMeta {
        let binding = self.binding.as_deref().map_or(Binding::Unknown, Binding::from_label);
        let page_count = self.pages.unwrap_or(0);
        let mut reported = parse_reported_dimensions(&self.dimensions_structured);
        let text = parse_reported_dimensions(&self.dimensions);
        reported.height_mm = reported.height_mm.or(text.height_mm);
        reported.thickness_mm = reported.thickness_mm.or(text.thickness_mm);
        let dims = resolve_dimensions(reported, page_count, binding);
        VolumeMeta {
            isbn13,
            title: self.title.unwrap_or_default().trim().to_string(),
            authors: self.authors.into_iter().map(|a| a.trim().to_string()).collect(),
            binding,
            page_count,
            height_mm: dims.height_mm,
            spine_thickness_mm: dims.spine_thickness_mm,
            cover_image: self.image.filter(|s| !s.trim().is_empty()),
            average_rating: self.rating.filter(|r| (0.0..=5.0).contains(r)),
            subjects: self.subjects,
            dimension_source: dims.source,
        }
    }
}

/// Why a lookup produced no metadata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[serde(tag = "reason", content = "detail", rename_all = "kebab-case")]
pub enum FetchFailure {
    #[error("not found")]
    NotFound,
    #[error("network: {0}")]
    Network(String),
    #[error("rate limited")]
    RateLimited,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("remote metadata provider requires an API key (set ISBNDB_API_KEY)")]
    MissingApiKey,
    #[error("max_in_flight must be at least 1")]
    ZeroConcurrency,
    #[error("http client: {0}")]
    Client(String),
}

/// Concurrency and retry limits a provider asks callers to respect.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FetchLimits {
    pub max_in_flight: usize,
    pub retry_budget: u32,
    pub backoff_base_ms: u64,
}

impl Default for FetchLimits {
    fn default() -> Self {
        FetchLimits { max_in_flight: 4, retry_budget: 3, backoff_base_ms: 250 }
    }
}

/// A source of per-ISBN metadata and cover bytes.
pub trait MetadataProvider: Send + Sync {
    fn lookup(&self, isbn: &Isbn13) -> Result<ProviderRecord, FetchFailure>;

    fn fetch_cover(&self, reference: &str) -> Result<Vec<u8>, FetchFailure>;

    fn limits(&self) -> FetchLimits {
        FetchLimits::default()
    }

    /// Rejects unusable configurations before any request is made.
    fn check_config(&self) -> Result<(), ConfigError> {
        Ok(())
    }

    /// True when failures mean the provider itself is down rather than a record is missing.
    fn is_remote(&self) -> bool {
        false
    }
}

/// A string that never prints its contents.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Secret(String);

impl Secret {
    pub fn new(s: impl Into<String>) -> Self {
        Secret(s.into())
    }

    pub fn expose(&self) -> &str {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.trim().is_empty()
    }
}

impl fmt::Debug for Secret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.0.is_empty() { "Secret(<empty>)" } else { "Secret(***)" })
    }
}
