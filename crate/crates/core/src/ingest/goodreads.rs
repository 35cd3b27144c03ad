//! Goodreads "My Books" CSV export parsing.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::isbn::{isbn10_to_isbn13, strip_excel_wrapper, Isbn13, IsbnError};
use super::series::parse_series_from_title;

/// Physical format of an edition, as far as shelf geometry cares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Binding {
    Hardcover,
    Paperback,
    MassMarket,
    Ebook,
    Audio,
    #[default]
    Unknown,
}

impl Binding {
    /// Case-insensitive match on the format names Goodreads and ISBNdb emit.
    pub fn from_label(label: &str) -> Binding {
        let l = label.trim().to_ascii_lowercase();
        match l.as_str() {
            "hardcover" | "hardback" | "library binding" => Binding::Hardcover,
            "paperback" | "trade paperback" | "softcover" => Binding::Paperback,
            "mass market paperback" | "mass market" | "massmarket" => Binding::MassMarket,
            "ebook" | "kindle edition" | "nook" | "e-book" => Binding::Ebook,
            "audio" | "audiobook" | "audio cd" | "audible audio" => Binding::Audio,
            _ => Binding::Unknown,
        }
    }
}

/// One accepted row of the export, before enrichment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRecord {
    /// Title with any `(Series, #n)` suffix removed.
    pub title: String,
    pub author_display: String,
    pub author_lf: String,
    pub isbn13: Isbn13,
    pub my_rating: u8,
    pub average_rating: f64,
    pub publisher: String,
    pub binding: Binding,
    pub page_count: u32,
    pub year_published: Option<i32>,
    pub series_name: Option<String>,
    pub series_index: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    /// Neither identifier column holds anything.
    MissingIsbn,
    /// An identifier is present but is not 10/13 digits.
    Shape,
    /// An identifier has the right shape but a wrong check digit.
    Checksum,
    /// Average Rating or My Rating outside `[0, 5]`.
    RatingRange,
    /// The CSV reader could not read the row at all.
    MalformedRow,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectReason::MissingIsbn => "missing-isbn",
            RejectReason::Shape => "shape",
            RejectReason::Checksum => "checksum",
            RejectReason::RatingRange => "rating-range",
            RejectReason::MalformedRow => "malformed-row",
        })
    }
}

impl From<IsbnError> for RejectReason {
    fn from(e: IsbnError) -> Self {
        match e {
            IsbnError::Shape => RejectReason::Shape,
            IsbnError::Checksum => RejectReason::Checksum,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    /// 1-based line number in the file (the header is line 1).
    pub row_number: u64,
    pub reason: RejectReason,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub accepted: usize,
    pub rejected: Vec<Rejection>,
    pub deduplicated: usize,
}

impl IngestReport {
    pub fn row_count(&self) -> usize {
        self.accepted + self.rejected.len() + self.deduplicated
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("input is not valid UTF-8 (at byte {0})")]
    NotUtf8(usize),
    #[error("input has no header row")]
    MissingHeader,
    #[error("header lacks a {0} column")]
    MissingColumn(&'static str),
    #[error("unreadable header: {0}")]
    Csv(#[from] csv::Error),
}

struct Columns {
    title: usize,
    author: Option<usize>,
    author_lf: Option<usize>,
    isbn: Option<usize>,
    isbn13: Option<usize>,
    my_rating: Option<usize>,
    average_rating: Option<usize>,
    publisher: Option<usize>,
    binding: Option<usize>,
    pages: Option<usize>,
    year: Option<usize>,
}

impl Columns {
    fn locate(header: &csv::StringRecord) -> Result<Self, ParseError> {
        let find =
            |name: &str| header.iter().position(|h| h.trim().trim_start_matches('\u{feff}').eq_ignore_ascii_case(name));
        let title = find("Title").ok_or(ParseError::MissingColumn("Title"))?;
        let isbn = find("ISBN");
        let isbn13 = find("ISBN13");
        if isbn.is_none() && isbn13.is_none() {
            return Err(ParseError::MissingColumn("ISBN or ISBN13"));
        }
        Ok(Columns {
            title,
            author: find("Author"),
            author_lf: find("Author l-f"),
            isbn,
            isbn13,
            my_rating: find("My Rating"),
            average_rating: find("Average Rating"),
            publisher: find("Publisher"),
            binding: find("Binding"),
            pages: find("Number of Pages"),
            year: find("Year Published"),
        })
    }
}

fn cell(row: &csv::StringRecord, idx: Option<usize>) -> &str {
    idx.and_then(|i| row.get(i)).map(str::trim).unwrap_or("")
}

/// ISBN13 column first, then the converted ISBN column. The first failure
/// reason wins when both are unusable.
fn resolve_isbn(row: &csv::StringRecord, cols: &Columns) -> Result<Isbn13, RejectReason> {
    let thirteen = strip_excel_wrapper(cell(row, cols.isbn13));
    let ten = strip_excel_wrapper(cell(row, cols.isbn));
    let mut first_err = None;
    if !thirteen.is_empty() {
        match Isbn13::parse(thirteen) {
            Ok(isbn) => return Ok(isbn),
            Err(e) => first_err = Some(RejectReason::from(e)),
        }
    }
    if !ten.is_empty() {
        // some exports put a 13-digit value in the ISBN column
        let converted = if ten.len() == 13 { Isbn13::parse(ten) } else { isbn10_to_isbn13(ten) };
        match converted {
            Ok(isbn) => return Ok(isbn),
            Err(e) => first_err = first_err.or(Some(RejectReason::from(e))),
        }
    }
    Err(first_err.unwrap_or(RejectReason::MissingIsbn))
}

fn parse_rating(s: &str) -> Result<f64, RejectReason> {
    if s.is_empty() {
        return Ok(0.0);
    }
    match s.parse::<f64>() {
        Ok(v) if (0.0..=5.0).contains(&v) => Ok(v),
        _ => Err(RejectReason::RatingRange),
    }
}

fn parse_row(row: &csv::StringRecord, cols: &Columns) -> Result<RawRecord, RejectReason> {
    let isbn13 = resolve_isbn(row, cols)?;
    let average_rating = parse_rating(cell(row, cols.average_rating))?;
    let my_rating = parse_rating(cell(row, cols.my_rating))?;
    if my_rating.fract() != 0.0 {
        return Err(RejectReason::RatingRange);
    }
    let split = parse_series_from_title(cell(row, Some(cols.title)));
    let author_display = cell(row, cols.author).to_string();
    let author_lf = match cell(row, cols.author_lf) {
        "" => author_display.clone(),
        lf => lf.to_string(),
    };
    Ok(RawRecord {
        title: split.clean_title,
        author_display,
        author_lf,
        isbn13,
        my_rating: my_rating as u8,
        average_rating,
        publisher: cell(row, cols.publisher).to_string(),
        binding: Binding::from_label(cell(row, cols.binding)),
        page_count: cell(row, cols.pages).parse().unwrap_or(0),
        year_published: cell(row, cols.year).parse().ok(),
        series_name: split.series_name,
        series_index: split.series_index,
    })
}

/// Parses a Goodreads library export.
///
/// Only a broken header is fatal. Rows without a usable ISBN, with ratings out
/// of range, or that the CSV reader cannot decode are listed in the report;
/// repeated ISBN-13s keep their first occurrence.
pub fn parse_goodreads_csv(bytes: &[u8]) -> Result<(Vec<RawRecord>, IngestReport), ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|e| ParseError::NotUtf8(e.valid_up_to()))?;
    if text.trim().is_empty() {
        return Err(ParseError::MissingHeader);
    }
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    let cols = Columns::locate(&header)?;

    let mut records = Vec::new();
    let mut report = IngestReport::default();
    let mut seen = HashSet::new();
    let mut row = csv::StringRecord::new();
    loop {
        let line = reader.position().line();
        match reader.read_record(&mut row) {
            Ok(false) => break,
            Ok(true) => {}
            Err(_) => {
                report.rejected.push(Rejection { row_number: line, reason: RejectReason::MalformedRow });
                continue;
            }
        }
        if row.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let row_number = row.position().map_or(line, |p| p.line());
        match parse_row(&row, &cols) {
            Ok(record) => {
                if seen.insert(record.isbn13.clone()) {
                    report.accepted += 1;
                    records.push(record);
                } else {
                    report.deduplicated += 1;
                }
            }
            Err(reason) => report.rejected.push(Rejection { row_number, reason }),
        }
    }
    Ok((records, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "Book Id,Title,Author,Author l-f,Additional Authors,ISBN,ISBN13,My Rating,Average Rating,Publisher,Binding,Number of Pages,Year Published,Original Publication Year\n";

    #[test]
    fn wrapped_isbn13_is_accepted() {
        let csv = format!(
            "{HEADER}1,Sample,Ann Author,\"Author, Ann\",,=\"\",=\"9780306406157\",4,3.91,Pub,Paperback,300,2001,1999\n"
        );
        let (records, report) = parse_goodreads_csv(csv.as_bytes()).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].isbn13.as_str(), "9780306406157");
        assert_eq!(records[0].author_lf, "Author, Ann");
        assert_eq!(records[0].binding, Binding::Paperback);
        assert_eq!(records[0].page_count, 300);
        assert_eq!(records[0].year_published, Some(2001));
        assert_eq!(report.accepted, 1);
    }

    #[test]
    fn header_only() {
        let (records, report) = parse_goodreads_csv(HEADER.as_bytes()).unwrap();
        assert!(records.is_empty());
        assert_eq!(report, IngestReport::default());
    }

    #[test]
    fn bad_checksum_is_rejected() {
        let csv = format!("{HEADER}1,Bad,A,,,,=\"9780306406158\",0,0,,,,,\n");
        let (records, report) = parse_goodreads_csv(csv.as_bytes()).unwrap();
        assert!(records.is_empty());
        assert_eq!(report.rejected, vec![Rejection { row_number: 2, reason: RejectReason::Checksum }]);
        assert_eq!(report.rejected[0].reason.to_string(), "checksum");
    }

    #[test]
    fn falls_back_to_isbn10_and_dedups() {
        let csv = format!(
            "{HEADER}1,A,X,,,=\"0306406152\",=\"\",0,4.0,,,,,\n\
             2,B,Y,,,,=\"9780306406157\",0,4.0,,,,,\n\
             3,C,Z,,,,,0,4.0,,,,,\n"
        );
        let (records, report) = parse_goodreads_csv(csv.as_bytes()).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].title, "A");
        assert_eq!(report.deduplicated, 1);
        assert_eq!(report.rejected[0].reason, RejectReason::MissingIsbn);
        assert_eq!(report.row_count(), 3);
    }

    #[test]
    fn series_and_binding_normalization() {
        let csv = format!(
            "{HEADER}1,\"The Eye of the World (The Wheel of Time, #1)\",Robert Jordan,\"Jordan, Robert\",,,=\"9780306406157\",5,4.18,Tor,Mass Market Paperback,782,1990,\n"
        );
        let (records, _) = parse_goodreads_csv(csv.as_bytes()).unwrap();
        let r = &records[0];
        assert_eq!(r.title, "The Eye of the World");
        assert_eq!(r.series_name.as_deref(), Some("The Wheel of Time"));
        assert_eq!(r.series_index, Some(1.0));
        assert_eq!(r.binding, Binding::MassMarket);
        assert_eq!(r.my_rating, 5);
    }

    #[test]
    fn rating_out_of_range_rejected() {
        let csv = format!("{HEADER}1,A,X,,,,=\"9780306406157\",0,7.5,,,,,\n");
        let (_, report) = parse_goodreads_csv(csv.as_bytes()).unwrap();
        assert_eq!(report.rejected[0].reason, RejectReason::RatingRange);
    }

    #[test]
    fn fatal_header_errors() {
        assert!(matches!(parse_goodreads_csv(b"Author,ISBN13\n"), Err(ParseError::MissingColumn("Title"))));
        assert!(matches!(parse_goodreads_csv(b"Title,Author\n"), Err(ParseError::MissingColumn(_))));
        assert!(matches!(parse_goodreads_csv(b""), Err(ParseError::MissingHeader)));
        assert!(matches!(parse_goodreads_csv(&[0xff, 0xfe, 0x00, 0x9f]), Err(ParseError::NotUtf8(0))));
    }

    #[test]
    fn minimal_header_with_bare_digits() {
        let (records, _) = parse_goodreads_csv(b"Title,Author,ISBN13\nDune,Frank Herbert,9780306406157\n").unwrap();
        assert_eq!(records[0].author_lf, "Frank Herbert");
        assert_eq!(records[0].binding, Binding::Unknown);
    }
}
