// Running the whole enrichment pipeline against the bundled fixture provider.
//
// Set `LIBRARYLENS_CACHE_DIR` to keep lookups between runs.
//
// ```text
// cargo run -p librarylens --example offline_enrichment
// ```

use librarylens::metadata::fixture::BUNDLED_FIXTURE_CSV;
use librarylens::metadata::{DimensionSource, MetadataCache};
use librarylens::pipeline::{Enricher, Library};

pub fn run_example(cache_dir: Option<&std::path::Path>) -> Result<Library, Box<dyn std::error::Error>> {
    let mut enricher = Enricher::offline();
    if let Some(dir) = cache_dir {
        enricher = enricher.with_cache(MetadataCache::open(dir)?);
    }
    let library = enricher.build_library(BUNDLED_FIXTURE_CSV.as_bytes())?;
    let measured = library.catalog.iter().filter(|v| v.dimension_source == DimensionSource::Provider).count();
    println!(
        "{} volumes, {} with measured dimensions, {} fetch failures",
        library.catalog.len(),
        measured,
        library.fetch_failures.len()
    );
    for v in library.catalog.iter().take(8) {
        println!(
            "  {} {:>5.1} x {:>5.1} mm  {:<10} {:<11} {}  {}",
            v.isbn13, v.height_mm, v.spine_thickness_mm, v.facets.genre, v.facets.age_band, v.spine_color, v.title
        );
    }
    Ok(library)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cache = std::env::var_os("LIBRARYLENS_CACHE_DIR").map(std::path::PathBuf::from);
    run_example(cache.as_deref())?;
    Ok(())
}
