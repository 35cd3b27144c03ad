#![allow(dead_code)]

use librarylens::facets::{AgeBand, FacetSource, Facets, Genre};
use librarylens::ingest::Binding;
use librarylens::metadata::DimensionSource;
use librarylens::{Isbn13, Rgb, Volume};

/// A valid ISBN-13 derived from `n`.
pub fn isbn(n: u64) -> Isbn13 {
    Isbn13::from_prefix(&format!("978{:09}", n % 1_000_000_000)).unwrap()
}

pub fn volume(n: u64, thickness_mm: f64, height_mm: f64) -> Volume {
    Volume {
        isbn13: isbn(n),
        title: format!("Volume {n}"),
        author_display: "Ann Author".into(),
        author_lf: "Author, Ann".into(),
        authors: vec!["Ann Author".into()],
        series_name: None,
        series_index: None,
        publisher: String::new(),
        year_published: None,
        binding: Binding::Paperback,
        page_count: 0,
        height_mm,
        spine_thickness_mm: thickness_mm,
        dimension_source: DimensionSource::Provider,
        average_rating: None,
        my_rating: 0,
        subjects: Vec::new(),
        cover_image: None,
        facets: Facets { genre: Genre::Other, age_band: AgeBand::Adult, facet_source: FacetSource::Rules },
        spine_color: Rgb::new(120, 120, 120),
    }
}
