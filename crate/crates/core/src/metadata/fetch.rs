use std::collections::{BTreeMap, BTreeSet};
use std::thread;
use std::time::Duration;

use super::cache::{CachedLookup, MetadataCache};
use super::provider::{ConfigError, FetchFailure, MetadataProvider, VolumeMeta};
use crate::ingest::Isbn13;
use crate::workers::bounded_map;

pub type FetchResults = BTreeMap<Isbn13, Result<VolumeMeta, FetchFailure>>;

fn lookup_with_retry(provider: &dyn MetadataProvider, isbn: &Isbn13) -> Result<VolumeMeta, FetchFailure> {
    let limits = provider.limits();
    let mut attempt = 0u32;
    loop {
        match provider.lookup(isbn) {
            Ok(record) => return Ok(record.into_meta(isbn.clone())),
            Err(FetchFailure::RateLimited) if attempt < limits.retry_budget => {
                let delay = limits.backoff_base_ms.saturating_mul(1u64 << attempt.min(16));
                log::debug!("{isbn}: rate limited, retrying in {delay} ms");
                thread::sleep(Duration::from_millis(delay));
                attempt += 1;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Looks up every ISBN, at most `provider.limits().max_in_flight` at a time.
///
/// Successful and not-found outcomes are written to `cache`; a second call
/// over the same ISBNs is then answered without touching the provider.
pub fn fetch_metadata(
    isbns: &[Isbn13],
    provider: &dyn MetadataProvider,
    cache: Option<&MetadataCache>,
) -> Result<FetchResults, ConfigError> {
    provider.check_config()?;
    let limits = provider.limits();
    if limits.max_in_flight == 0 {
        return Err(ConfigError::ZeroConcurrency);
    }
    let unique: Vec<Isbn13> = isbns.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();

    let mut results = FetchResults::new();
    let mut misses = Vec::new();
    for isbn in unique {
        match cache.and_then(|c| c.get(&isbn)) {
            Some(CachedLookup::Found { meta }) => {
                results.insert(isbn, Ok(meta));
            }
            Some(CachedLookup::NotFound) => {
                results.insert(isbn, Err(FetchFailure::NotFound));
            }
            None => misses.push(isbn),
        }
    }

    let fetched = bounded_map(&misses, limits.max_in_flight, |isbn| lookup_with_retry(provider, isbn));
    for (isbn, outcome) in misses.into_iter().zip(fetched) {
        if let Some(cache) = cache {
            let entry = match &outcome {
                Ok(meta) => Some(CachedLookup::Found { meta: meta.clone() }),
                Err(FetchFailure::NotFound) => Some(CachedLookup::NotFound),
                Err(_) => None,
            };
            if let Some(entry) = entry {
                if let Err(e) = cache.insert(&isbn, entry) {
                    log::warn!("could not write cache entry for {isbn}: {e}");
                }
            }
        }
        results.insert(isbn, outcome);
    }
    Ok(results)
}
