//! Virtual bookshelves from a Goodreads library export.
//!
//! The engine reads the export CSV ([`ingest`]), enriches each ISBN with
//! physical dimensions and a cover ([`metadata`]), assigns a closed-vocabulary
//! genre and reading-age band ([`facets`]), reduces each cover to a dominant
//! spine color ([`spinecolor`]), orders and packs the volumes onto shelves
//! ([`shelf`]), and renders color-encoded SVG blueprints ([`visual`]).
//! [`pipeline::Enricher`] runs the first four stages in one call.
//!
//! ```
//! use librarylens::metadata::fixture::BUNDLED_FIXTURE_CSV;
//! use librarylens::pipeline::Enricher;
//! use librarylens::shelf::{pack, sort_volumes, ShelfSpec, SortStrategy};
//! use librarylens::visual::{render_svg, EncodingMode, PaletteTable};
//!
//! let library = Enricher::offline().build_library(BUNDLED_FIXTURE_CSV.as_bytes()).unwrap();
//! let spec = ShelfSpec::default();
//! let strategy: SortStrategy = "genre,-rating".parse().unwrap();
//! let order = sort_volumes(&library.catalog, &strategy);
//! let layout = pack(&order, &library.catalog, &spec);
//! let svg = render_svg(&layout, &library.catalog, &spec, EncodingMode::Genre, &PaletteTable::default(), true);
//! assert!(svg.starts_with("<?xml"));
//! ```

pub mod color;
pub mod facets;
pub mod ingest;
pub mod metadata;
pub mod pipeline;
pub mod shelf;
pub mod spinecolor;
pub mod visual;
mod volume;
mod workers;

pub use color::Rgb;
pub use ingest::Isbn13;
pub use volume::{merge_meta, Catalog, Volume};
