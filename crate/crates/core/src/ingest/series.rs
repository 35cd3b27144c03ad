use std::sync::OnceLock;

use regex::Regex;

/// A title split into its display part and the trailing series marker, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTitle {
    pub clean_title: String,
    pub series_name: Option<String>,
    pub series_index: Option<f64>,
}

fn series_pattern() -> &'static Regex {
    static PATTERN: OnceLock<Regex> = OnceLock::new();
    PATTERN.get_or_init(|| {
        Regex::new(r"^(?P<title>.*?)\s*\((?P<series>[^()]*?),?\s+#(?P<index>\d+(?:\.\d+)?)\)\s*$")
            .expect("series regex")
    })
}

/// Splits Goodreads' `Title (Series, #n)` / `Title (Series #n)` convention.
pub fn parse_series_from_title(title: &str) -> SeriesTitle {
    let trimmed = title.trim();
    if let Some(caps) = series_pattern().captures(trimmed) {
        let clean = caps["title"].trim();
        let series = caps["series"].trim().trim_end_matches(',').trim();
        if !clean.is_empty() && !series.is_empty() {
            if let Ok(index) = caps["index"].parse::<f64>() {
                return SeriesTitle {
                    clean_title: clean.to_string(),
                    series_name: Some(series.to_string()),
                    series_index: Some(index),
                };
            }
        }
    }
    SeriesTitle { clean_title: trimmed.to_string(), series_name: None, series_index: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn split(t: &str) -> (String, Option<String>, Option<f64>) {
        let s = parse_series_from_title(t);
        (s.clean_title, s.series_name, s.series_index)
    }

    #[test]
    fn comma_form() {
        assert_eq!(
            split("The Eye of the World (The Wheel of Time, #1)"),
            ("The Eye of the World".into(), Some("The Wheel of Time".into()), Some(1.0))
        );
    }

    #[test]
    fn no_parenthetical() {
        assert_eq!(split("Dune"), ("Dune".into(), None, None));
    }

    #[test]
    fn decimal_index() {
        assert_eq!(split("Foo (Bar, #2.5)"), ("Foo".into(), Some("Bar".into()), Some(2.5)));
    }

    #[test]
    fn space_form_and_non_series_parenthetical() {
        assert_eq!(split("Mort (Discworld #4)"), ("Mort".into(), Some("Discworld".into()), Some(4.0)));
        assert_eq!(split("Beowulf (A New Translation)"), ("Beowulf (A New Translation)".into(), None, None));
        // a bare "#1" with no series name stays part of the title
        assert_eq!(split("Untitled (#1)"), ("Untitled (#1)".into(), None, None));
    }
}
