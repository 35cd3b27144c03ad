//! End-to-end enrichment: export rows in, colored and faceted volumes out.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::facets::{normalize_batch, ChatCompletionClassifier, FacetClassifier, NormalizerConfig};
use crate::ingest::{parse_goodreads_csv, IngestReport, Isbn13, ParseError, RawRecord};
use crate::metadata::{
    fetch_metadata, load_cover, ConfigError, FetchFailure, FixtureProvider, IsbndbProvider, MetadataCache,
    MetadataProvider, ProviderConfig, VolumeMeta,
};
use crate::spinecolor::{spine_color_with, QuantizeConfig};
use crate::volume::{merge_meta, Catalog, Volume};
use crate::workers::{bounded_map, default_workers};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("metadata provider unavailable: all {0} lookups failed")]
    ProviderUnavailable(usize),
    #[error("cache: {0}")]
    Cache(#[from] std::io::Error),
}

/// Output of one enrichment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Library {
    pub records: Vec<RawRecord>,
    pub report: IngestReport,
    pub catalog: Catalog,
    /// ISBNs the provider could not supply; these volumes use export data and estimates.
    pub fetch_failures: BTreeMap<Isbn13, FetchFailure>,
}

/// Holds the provider, cache, and facet model for a sequence of runs.
pub struct Enricher {
    provider: Box<dyn MetadataProvider>,
    cache: Option<MetadataCache>,
    classifier: Option<Box<dyn FacetClassifier>>,
    pub normalizer: NormalizerConfig,
    pub quantize: QuantizeConfig,
    pub cover_workers: usize,
}

fn env_flag(name: &str) -> bool {
    std::env::var(name).is_ok_and(|v| v.trim() == "1")
}

impl Enricher {
    pub fn new(provider: Box<dyn MetadataProvider>) -> Self {
        Enricher {
            provider,
            cache: None,
            classifier: None,
            normalizer: NormalizerConfig::default(),
            quantize: QuantizeConfig::default(),
            cover_workers: default_workers(),
        }
    }

    /// Bundled fixture metadata and keyword-rule facets; touches no network.
    pub fn offline() -> Self {
        Enricher::new(Box::new(FixtureProvider::bundled()))
    }

    pub fn with_cache(mut self, cache: MetadataCache) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn with_classifier(mut self, classifier: Box<dyn FacetClassifier>, config: NormalizerConfig) -> Self {
        self.classifier = Some(classifier);
        self.normalizer = config;
        self
    }

    /// Configures from the environment.
    ///
    /// `force_offline` or `LIBRARYLENS_OFFLINE=1` selects the bundled fixture provider; otherwise
    /// the ISBNdb client is used and `ISBNDB_API_KEY` must be set. The cache
    /// lives in `LIBRARYLENS_CACHE_DIR`, falling back to `default_cache_dir`.
    /// The facet model is used when `LLM_API_KEY` is set and
    /// `LIBRARYLENS_LLM_DISABLED` is not `1`.
    pub fn from_env(force_offline: bool, default_cache_dir: Option<&Path>) -> Result<Self, PipelineError> {
        let provider: Box<dyn MetadataProvider> = if force_offline || env_flag("LIBRARYLENS_OFFLINE") {
            Box::new(FixtureProvider::bundled())
        } else {
            let remote = IsbndbProvider::new(ProviderConfig::from_env())?;
            remote.check_config()?;
            Box::new(remote)
        };
        let mut enricher = Enricher::new(provider);
        let cache_dir = std::env::var_os("LIBRARYLENS_CACHE_DIR")
            .map(std::path::PathBuf::from)
            .or_else(|| default_cache_dir.map(Path::to_path_buf));
        if let Some(dir) = cache_dir {
            enricher.cache = Some(MetadataCache::open(dir)?);
        }
        let normalizer = NormalizerConfig::from_env();
        if normalizer.llm_enabled {
            match ChatCompletionClassifier::new(&normalizer) {
                Ok(c) => enricher = enricher.with_classifier(Box::new(c), normalizer),
                Err(e) => log::warn!("facet model disabled: {e}"),
            }
        } else {
            enricher.normalizer = normalizer;
        }
        Ok(enricher)
    }

    pub fn provider(&self) -> &dyn MetadataProvider {
        self.provider.as_ref()
    }

    pub fn build_library(&self, csv: &[u8]) -> Result<Library, PipelineError> {
        let (records, report) = parse_goodreads_csv(csv)?;
        self.enrich(records, report)
    }

    pub fn enrich(&self, records: Vec<RawRecord>, report: IngestReport) -> Result<Library, PipelineError> {
        let isbns: Vec<Isbn13> = records.iter().map(|r| r.isbn13.clone()).collect();
        let fetched = fetch_metadata(&isbns, self.provider.as_ref(), self.cache.as_ref())?;

        if self.provider.is_remote()
            && !fetched.is_empty()
            && fetched.values().all(|r| matches!(r, Err(FetchFailure::Network(_)) | Err(FetchFailure::RateLimited)))
        {
            return Err(PipelineError::ProviderUnavailable(fetched.len()));
        }

        let mut fetch_failures = BTreeMap::new();
        let merged: Vec<VolumeMeta> = records
            .iter()
            .map(|raw| {
                let meta = match fetched.get(&raw.isbn13) {
                    Some(Ok(meta)) => Some(meta),
                    Some(Err(e)) => {
                        fetch_failures.insert(raw.isbn13.clone(), e.clone());
                        None
                    }
                    None => None,
                };
                merge_meta(raw, meta)
            })
            .collect();

        let facets = normalize_batch(&merged, &self.normalizer, self.classifier.as_deref());

        let provider = self.provider.as_ref();
        let quantize = self.quantize;
        let colors = bounded_map(&merged, self.cover_workers, |meta| {
            let cover = load_cover(meta, provider);
            spine_color_with(meta, cover.as_ref(), &quantize)
        });

        let catalog = records
            .iter()
            .zip(&merged)
            .zip(colors)
            .map(|((raw, meta), color)| Volume::assemble(raw, meta, facets[&raw.isbn13], color))
            .collect();

        Ok(Library { records, report, catalog, fetch_failures })
    }
}
