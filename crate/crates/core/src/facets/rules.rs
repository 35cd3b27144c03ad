use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;

use super::{AgeBand, FacetSource, Facets, Genre};
use crate::metadata::VolumeMeta;

pub const DEFAULT_KEYWORDS_TOML: &str = include_str!("../../data/facet_keywords.toml");

#[derive(Debug, thiserror::Error)]
pub enum KeywordTableError {
    #[error("keyword table: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("keyword table: unknown facet {0:?}")]
    UnknownFacet(String),
    #[error("keyword table: unsupported version {0}")]
    Version(u32),
}

#[derive(Deserialize)]
struct RawTable {
    version: u32,
    genres: BTreeMap<String, Vec<String>>,
    age_bands: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone)]
struct Keyword {
    text: String,
    whole_word: bool,
}

impl Keyword {
    fn new(raw: &str) -> Self {
        let lower = raw.trim().to_lowercase();
        match lower.strip_prefix('=') {
            Some(rest) => Keyword { text: rest.to_string(), whole_word: true },
            None => Keyword { text: lower, whole_word: false },
        }
    }

    fn matches(&self, haystack: &str) -> bool {
        if self.text.is_empty() {
            return false;
        }
        haystack.match_indices(self.text.as_str()).any(|(start, _)| {
            let starts_word = haystack[..start].chars().next_back().is_none_or(|c| !c.is_alphanumeric());
            let end = start + self.text.len();
            let ends_word = haystack[end..].chars().next().is_none_or(|c| !c.is_alphanumeric());
            starts_word && (!self.whole_word || ends_word)
        })
    }
}

/// Genre and age-band trigger lists, scanned in enumeration order.
#[derive(Debug, Clone)]
pub struct KeywordTable {
    genres: Vec<(Genre, Vec<Keyword>)>,
    age_bands: Vec<(AgeBand, Vec<Keyword>)>,
}

impl KeywordTable {
    pub fn from_toml(text: &str) -> Result<Self, KeywordTableError> {
        let raw: RawTable = toml::from_str(text)?;
        if raw.version != 1 {
            return Err(KeywordTableError::Version(raw.version));
        }
        let mut genres = BTreeMap::new();
        for (name, words) in raw.genres {
            let genre: Genre = name.parse().map_err(|_| KeywordTableError::UnknownFacet(name.clone()))?;
            genres.insert(genre, words.iter().map(|w| Keyword::new(w)).collect());
        }
        let mut age_bands = BTreeMap::new();
        for (name, words) in raw.age_bands {
            let band: AgeBand = name.parse().map_err(|_| KeywordTableError::UnknownFacet(name.clone()))?;
            age_bands.insert(band, words.iter().map(|w| Keyword::new(w)).collect());
        }
        // BTreeMap keys iterate in declaration order, which is the scan order;
        // Other and Adult are the defaults and never matched by keyword.
        Ok(KeywordTable {
            genres: genres.into_iter().filter(|(g, _)| *g != Genre::Other).collect(),
            age_bands: age_bands.into_iter().filter(|(a, _)| *a != AgeBand::Adult).collect(),
        })
    }

    pub fn bundled() -> &'static KeywordTable {
        static TABLE: OnceLock<KeywordTable> = OnceLock::new();
        TABLE.get_or_init(|| KeywordTable::from_toml(DEFAULT_KEYWORDS_TOML).expect("bundled keyword table"))
    }

    pub fn genre_for(&self, haystack: &str) -> Genre {
        self.genres.iter().find(|(_, kws)| kws.iter().any(|k| k.matches(haystack))).map_or(Genre::Other, |(g, _)| *g)
    }

    pub fn age_band_for(&self, haystack: &str) -> AgeBand {
        self.age_bands
            .iter()
            .find(|(_, kws)| kws.iter().any(|k| k.matches(haystack)))
            .map_or(AgeBand::Adult, |(a, _)| *a)
    }
}

/// Keyword-rule facets using the bundled table.
pub fn rules_normalize(meta: &VolumeMeta) -> Facets {
    rules_normalize_with(meta, KeywordTable::bundled())
}

pub fn rules_normalize_with(meta: &VolumeMeta, table: &KeywordTable) -> Facets {
    let subjects = meta.subjects.join(" | ").to_lowercase();
    let with_title = format!("{subjects} | {}", meta.title.to_lowercase());
    Facets {
        genre: table.genre_for(&with_title),
        age_band: table.age_band_for(&subjects),
        facet_source: FacetSource::Rules,
    }
}
