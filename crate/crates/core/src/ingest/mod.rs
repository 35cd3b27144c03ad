//! Goodreads export ingestion and ISBN handling.

mod goodreads;
mod isbn;
mod series;

pub use goodreads::{parse_goodreads_csv, Binding, IngestReport, ParseError, RawRecord, RejectReason, Rejection};
pub use isbn::{isbn10_to_isbn13, validate_isbn10, validate_isbn13, Isbn13, IsbnError};
pub use series::{parse_series_from_title, SeriesTitle};
