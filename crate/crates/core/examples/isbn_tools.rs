// Validating and converting ISBNs, and splitting series suffixes off titles.
//
// ```text
// cargo run -p librarylens --example isbn_tools -- 0306406152 9780306406156
// ```

use librarylens::ingest::{isbn10_to_isbn13, parse_series_from_title, validate_isbn10, validate_isbn13};

pub fn run_example(inputs: &[String]) -> Result<Vec<String>, Box<dyn std::error::Error>> {
    let mut lines = Vec::new();
    for raw in inputs {
        let s = raw.trim();
        let line = if validate_isbn13(s) {
            format!("{s}: valid ISBN-13")
        } else if validate_isbn10(s) {
            format!("{s}: valid ISBN-10 -> {}", isbn10_to_isbn13(s)?)
        } else {
            match isbn10_to_isbn13(s) {
                Ok(_) => unreachable!("conversion only succeeds for valid ISBN-10s"),
                Err(e) => format!("{s}: invalid ({e})"),
            }
        };
        lines.push(line);
    }
    let series = parse_series_from_title("The Eye of the World (The Wheel of Time, #1)");
    lines.push(format!("series: {:?} / {:?} / {:?}", series.clean_title, series.series_name, series.series_index));
    Ok(lines)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() {
        args = ["9780306406157", "9780306406156", "0306406152", "030640615X", "080442957X"].map(String::from).to_vec();
    }
    for line in run_example(&args)? {
        println!("{line}");
    }
    Ok(())
}
