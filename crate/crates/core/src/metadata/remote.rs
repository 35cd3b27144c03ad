//! ISBNdb-shaped HTTP provider: `GET {base_url}/book/{isbn13}` with a bearer key.

use std::time::Duration;

use reqwest::blocking::Client;
use reqwest::StatusCode;
use serde::Deserialize;

use super::provider::{ConfigError, FetchFailure, FetchLimits, MetadataProvider, ProviderRecord, Secret};
use crate::ingest::Isbn13;

pub const DEFAULT_BASE_URL: &str = "https://api2.isbndb.com";

#[derive(Debug, Clone)]
pub struct ProviderConfig {
    pub base_url: String,
    pub api_key: Secret,
    pub max_in_flight: usize,
    pub retry_budget: u32,
    pub backoff_base_ms: u64,
}

impl Default for ProviderConfig {
    fn default() -> Self {
        let limits = FetchLimits::default();
        ProviderConfig {
            base_url: DEFAULT_BASE_URL.to_string(),
            api_key: Secret::default(),
            max_in_flight: limits.max_in_flight,
            retry_budget: limits.retry_budget,
            backoff_base_ms: limits.backoff_base_ms,
        }
    }
}

impl ProviderConfig {
    /// Reads `ISBNDB_API_KEY` and, optionally, `ISBNDB_BASE_URL`.
    pub fn from_env() -> Self {
        let mut config = ProviderConfig::default();
        if let Ok(key) = std::env::var("ISBNDB_API_KEY") {
            config.api_key = Secret::new(key);
        }
        if let Ok(url) = std::env::var("ISBNDB_BASE_URL") {
            config.base_url = url;
        }
        config
    }
}

pub struct IsbndbProvider {
    config: ProviderConfig,
    client: Client,
}

impl IsbndbProvider {
    pub fn new(config: ProviderConfig) -> Result<Self, ConfigError> {
        let client = Client::builder()
            .timeout(Duration::from_secs(20))
            .user_agent(concat!("librarylens/", env!("CARGO_PKG_VERSION")))
            .build()
            .map_err(|e| ConfigError::Client(e.to_string()))?;
        Ok(IsbndbProvider { config, client })
    }

    fn get(&self, url: &str, authorized: bool) -> Result<reqwest::blocking::Response, FetchFailure> {
        let mut req = self.client.get(url);
        if authorized {
            req = req.bearer_auth(self.config.api_key.expose());
        }
        let resp = req.send().map_err(|e| FetchFailure::Network(e.to_string()))?;
        match resp.status() {
            s if s.is_success() => Ok(resp),
            StatusCode::NOT_FOUND => Err(FetchFailure::NotFound),
            StatusCode::TOO_MANY_REQUESTS => Err(FetchFailure::RateLimited),
            s => Err(FetchFailure::Network(format!("HTTP {s}"))),
        }
    }
}

/// ISBNdb wraps the record in `{"book": {...}}`; a bare record is accepted too.
#[derive(Deserialize)]
#[serde(untagged)]
enum Body {
    Wrapped { book: ProviderRecord },
    Bare(ProviderRecord),
}

impl MetadataProvider for IsbndbProvider {
    fn lookup(&self, isbn: &Isbn13) -> Result<ProviderRecord, FetchFailure> {
        let url = format!("{}/book/{}", self.config.base_url.trim_end_matches('/'), isbn);
        let body: Body = self.get(&url, true)?.json().map_err(|e| FetchFailure::Network(format!("bad body: {e}")))?;
        Ok(match body {
            Body::Wrapped { book } => book,
            Body::Bare(record) => record,
        })
    }

    fn fetch_cover(&self, reference: &str) -> Result<Vec<u8>, FetchFailure> {
        if !(reference.starts_with("http://") || reference.starts_with("https://")) {
            return Err(FetchFailure::NotFound);
        }
        let bytes = self.get(reference, false)?.bytes().map_err(|e| FetchFailure::Network(e.to_string()))?;
        Ok(bytes.to_vec())
    }

    fn limits(&self) -> FetchLimits {
        FetchLimits {
            max_in_flight: self.config.max_in_flight,
            retry_budget: self.config.retry_budget,
            backoff_base_ms: self.config.backoff_base_ms,
        }
    }

    fn check_config(&self) -> Result<(), ConfigError> {
        if self.config.api_key.is_empty() {
            return Err(ConfigError::MissingApiKey);
        }
        if self.config.max_in_flight == 0 {
            return Err(ConfigError::ZeroConcurrency);
        }
        Ok(())
    }

    fn is_remote(&self) -> bool {
        true
    }
}
