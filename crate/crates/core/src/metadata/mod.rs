//! Metadata enrichment: providers, dimension estimation, cover loading, caching.

mod cache;
mod cover;
mod dimensions;
mod fetch;
pub mod fixture;
mod provider;
mod remote;

pub use cache::{CachedLookup, MetadataCache, CACHE_FILE_NAME};
pub use cover::{decode_cover, load_cover};
pub use dimensions::{
    clamp_height, clamp_thickness, estimate_dimensions, parse_reported_dimensions, resolve_dimensions, DimensionSource,
    Dimensions, ReportedDimensions, HEIGHT_RANGE_MM, THICKNESS_RANGE_MM,
};
pub use fetch::{fetch_metadata, FetchResults};
pub use fixture::FixtureProvider;
pub use provider::{ConfigError, FetchFailure, FetchLimits, MetadataProvider, ProviderRecord, Secret, VolumeMeta};
pub use remote::{IsbndbProvider, ProviderConfig, DEFAULT_BASE_URL};
