// Parsing a Goodreads "My Books" export and inspecting the ingest report.
//
// ```text
// cargo run -p librarylens --example ingest_export -- path/to/goodreads_library_export.csv
// ```

use librarylens::ingest::{parse_goodreads_csv, IngestReport, RawRecord};
use librarylens::metadata::fixture::BUNDLED_FIXTURE_CSV;

pub fn run_example(csv: &[u8]) -> Result<(Vec<RawRecord>, IngestReport), Box<dyn std::error::Error>> {
    let (records, report) = parse_goodreads_csv(csv)?;
    println!(
        "{} rows: {} accepted, {} rejected, {} duplicates",
        report.row_count(),
        report.accepted,
        report.rejected.len(),
        report.deduplicated
    );
    for rejection in &report.rejected {
        println!("  line {}: {}", rejection.row_number, rejection.reason);
    }
    for r in records.iter().filter(|r| r.series_name.is_some()).take(5) {
        println!(
            "  {} | {} | {} #{}",
            r.isbn13,
            r.title,
            r.series_name.as_deref().unwrap_or_default(),
            r.series_index.unwrap_or_default()
        );
    }
    Ok((records, report))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bytes = match std::env::args().nth(1) {
        Some(path) => std::fs::read(path)?,
        None => BUNDLED_FIXTURE_CSV.as_bytes().to_vec(),
    };
    run_example(&bytes)?;
    Ok(())
}
