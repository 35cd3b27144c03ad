// Assigning closed-vocabulary genre and age facets with the keyword rules,
// and what happens when a model answers outside the vocabulary.

use librarylens::facets::{
    normalize_batch, rules_normalize, FacetAnswer, FacetClassifier, Facets, LlmError, NormalizerConfig,
};
use librarylens::ingest::Binding;
use librarylens::metadata::{DimensionSource, VolumeMeta};
use librarylens::Isbn13;

fn meta(prefix: &str, title: &str, subjects: &[&str]) -> VolumeMeta {
    VolumeMeta {
        isbn13: Isbn13::from_prefix(prefix).expect("12-digit prefix"),
        title: title.into(),
        authors: Vec::new(),
        binding: Binding::Paperback,
        page_count: 300,
        height_mm: 210.0,
        spine_thickness_mm: 22.0,
        cover_image: None,
        average_rating: None,
        subjects: subjects.iter().map(|s| s.to_string()).collect(),
        dimension_source: DimensionSource::Estimated,
    }
}

/// Stands in for a model that ignores the allowed labels.
struct Freewheeling;

impl FacetClassifier for Freewheeling {
    fn classify(&self, batch: &[VolumeMeta]) -> Result<Vec<FacetAnswer>, LlmError> {
        Ok(batch
            .iter()
            .map(|m| FacetAnswer {
                isbn13: m.isbn13.to_string(),
                genre: "High Fantasy – Grimdark".into(),
                age_band: "Adult".into(),
            })
            .collect())
    }
}

pub fn run_example() -> Vec<(String, Facets)> {
    let volumes = vec![
        meta("978000000001", "The Hollow Crown", &["Epic fantasy", "Magic"]),
        meta("978000000002", "Signal Lost", &["Science Fiction", "Young Adult"]),
        meta("978000000003", "District Nine", &["Juvenile fiction", "Dystopias"]),
        meta("978000000004", "Untitled", &[]),
    ];
    for v in &volumes {
        println!("rules  {:<18} -> {:?}", v.title, rules_normalize(v));
    }
    let config = NormalizerConfig { llm_enabled: true, ..NormalizerConfig::default() };
    let out = normalize_batch(&volumes, &config, Some(&Freewheeling));
    volumes
        .iter()
        .map(|v| {
            let f = out[&v.isbn13];
            println!("model  {:<18} -> {:?}", v.title, f);
            (v.title.clone(), f)
        })
        .collect()
}

fn main() {
    run_example();
}
