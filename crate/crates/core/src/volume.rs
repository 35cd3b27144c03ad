use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::color::Rgb;
use crate::facets::Facets;
use crate::ingest::{Binding, Isbn13, RawRecord};
use crate::metadata::{estimate_dimensions, DimensionSource, VolumeMeta};

/// A fully enriched book, ready for sorting, packing, and rendering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Volume {
    pub isbn13: Isbn13,
    /// Display title without the series suffix.
    pub title: String,
    pub author_display: String,
    pub author_lf: String,
    pub authors: Vec<String>,
    pub series_name: Option<String>,
    pub series_index: Option<f64>,
    pub publisher: String,
    pub year_published: Option<i32>,
    pub binding: Binding,
    pub page_count: u32,
    pub height_mm: f64,
    pub spine_thickness_mm: f64,
    pub dimension_source: DimensionSource,
    /// `None` when no rating is known.
    pub average_rating: Option<f64>,
    pub my_rating: u8,
    pub subjects: Vec<String>,
    pub cover_image: Option<String>,
    pub facets: Facets,
    pub spine_color: Rgb,
}

/// Fills gaps in provider metadata from the export row.
///
/// When the provider gave no dimensions, or gave a record without page count
/// or binding, the estimate is redone with the row's values.
pub fn merge_meta(raw: &RawRecord, meta: Option<&VolumeMeta>) -> VolumeMeta {
    let mut merged = match meta {
        Some(m) => m.clone(),
        None => {
            let dims = estimate_dimensions(raw.page_count, raw.binding);
            VolumeMeta {
                isbn13: raw.isbn13.clone(),
                title: raw.title.clone(),
                authors: Vec::new(),
                binding: raw.binding,
                page_count: raw.page_count,
                height_mm: dims.height_mm,
                spine_thickness_mm: dims.spine_thickness_mm,
                cover_image: None,
                average_rating: None,
                subjects: Vec::new(),
                dimension_source: DimensionSource::Estimated,
            }
        }
    };
    if merged.title.is_empty() {
        merged.title = raw.title.clone();
    }
    if merged.authors.is_empty() && !raw.author_display.is_empty() {
        merged.authors = vec![raw.author_display.clone()];
    }
    let mut re_estimate = false;
    if merged.page_count == 0 && raw.page_count > 0 {
        merged.page_count = raw.page_count;
        re_estimate = true;
    }
    if merged.binding == Binding::Unknown && raw.binding != Binding::Unknown {
        merged.binding = raw.binding;
        re_estimate = true;
    }
    if re_estimate && merged.dimension_source == DimensionSource::Estimated {
        let dims = estimate_dimensions(merged.page_count, merged.binding);
        merged.height_mm = dims.height_mm;
        merged.spine_thickness_mm = dims.spine_thickness_mm;
    }
    merged
}

impl Volume {
    /// Joins the export row, merged metadata, facets, and spine color.
    ///
    /// The Goodreads average rating is preferred; `0.00` there means "no ratings".
    pub fn assemble(raw: &RawRecord, meta: &VolumeMeta, facets: Facets, spine_color: Rgb) -> Volume {
        let average_rating = if raw.average_rating > 0.0 { Some(raw.average_rating) } else { meta.average_rating };
        Volume {
            isbn13: raw.isbn13.clone(),
            title: raw.title.clone(),
            author_display: raw.author_display.clone(),
            author_lf: raw.author_lf.clone(),
            authors: meta.authors.clone(),
            series_name: raw.series_name.clone(),
            series_index: raw.series_index,
            publisher: raw.publisher.clone(),
            year_published: raw.year_published,
            binding: meta.binding,
            page_count: meta.page_count,
            height_mm: meta.height_mm,
            spine_thickness_mm: meta.spine_thickness_mm,
            dimension_source: meta.dimension_source,
            average_rating,
            my_rating: raw.my_rating,
            subjects: meta.subjects.clone(),
            cover_image: meta.cover_image.clone(),
            facets,
            spine_color,
        }
    }
}

/// Volumes keyed by ISBN-13.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Catalog(BTreeMap<Isbn13, Volume>);

impl Catalog {
    pub fn new() -> Self {
        Catalog::default()
    }

    pub fn insert(&mut self, volume: Volume) -> Option<Volume> {
        self.0.insert(volume.isbn13.clone(), volume)
    }

    pub fn get(&self, isbn: &Isbn13) -> Option<&Volume> {
        self.0.get(isbn)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Volume> {
        self.0.values()
    }

    pub fn isbns(&self) -> impl Iterator<Item = &Isbn13> {
        self.0.keys()
    }
}

impl FromIterator<Volume> for Catalog {
    fn from_iter<I: IntoIterator<Item = Volume>>(iter: I) -> Self {
        let mut c = Catalog::new();
        for v in iter {
            c.insert(v);
        }
        c
    }
}

impl<'a> IntoIterator for &'a Catalog {
    type Item = &'a Volume;
    type IntoIter = std::collections::btree_map::Values<'a, Isbn13, Volume>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.values()
    }
}
