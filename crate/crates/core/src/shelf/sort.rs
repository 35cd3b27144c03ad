//! Composite sort strategies.
//!
//! A strategy is an ordered list of keys, each ascending or descending,
//! written as comma-separated tokens with an optional `-` for descending:
//! `"genre,-rating,alpha"`. Whatever the keys, ties finally fall back to
//! ISBN-13 ascending, so every strategy yields a total order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::color::Rgb;
use crate::facets::{AgeBand, Genre};
use crate::ingest::Isbn13;
use crate::volume::Volume;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SortKey {
    Size,
    Color,
    Alpha,
    AuthorSeries,
    Rating,
    Genre,
    Age,
}

impl SortKey {
    pub const ALL: [SortKey; 7] = [
        SortKey::Size,
        SortKey::Color,
        SortKey::Alpha,
        SortKey::AuthorSeries,
        SortKey::Rating,
        SortKey::Genre,
        SortKey::Age,
    ];

    pub fn token(self) -> &'static str {
        match self {
            SortKey::Size => "size",
            SortKey::Color => "color",
            SortKey::Alpha => "alpha",
            SortKey::AuthorSeries => "authorseries",
            SortKey::Rating => "rating",
            SortKey::Genre => "genre",
            SortKey::Age => "age",
        }
    }

    fn from_token(token: &str) -> Option<SortKey> {
        let t = token.to_ascii_lowercase();
        let key = match t.as_str() {
            "size" => SortKey::Size,
            "color" | "colour" => SortKey::Color,
            "alpha" | "title" => SortKey::Alpha,
            "authorseries" | "author" | "author-series" | "author_series" => SortKey::AuthorSeries,
            "rating" => SortKey::Rating,
            "genre" => SortKey::Genre,
            "age" => SortKey::Age,
            _ => return None,
        };
        Some(key)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Asc,
    Desc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SortTerm {
    pub key: SortKey,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrategyError {
    #[error("a sort strategy needs at least one key")]
    Empty,
    #[error("sort key {0:?} appears twice")]
    Duplicate(String),
    #[error("unknown sort key {0:?}")]
    UnknownKey(String),
}

/// Non-empty list of distinct sort keys.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SortStrategy {
    terms: Vec<SortTerm>,
}

impl SortStrategy {
    pub fn new(terms: Vec<SortTerm>) -> Result<Self, StrategyError> {
        if terms.is_empty() {
            return Err(StrategyError::Empty);
        }
        for (i, t) in terms.iter().enumerate() {
            if terms[..i].iter().any(|u| u.key == t.key) {
                return Err(StrategyError::Duplicate(t.key.token().to_string()));
            }
        }
        Ok(SortStrategy { terms })
    }

    pub fn ascending(key: SortKey) -> Self {
        SortStrategy { terms: vec![SortTerm { key, direction: Direction::Asc }] }
    }

    pub fn terms(&self) -> &[SortTerm] {
        &self.terms
    }
}

impl Default for SortStrategy {
    fn default() -> Self {
        SortStrategy::ascending(SortKey::AuthorSeries)
    }
}

impl FromStr for SortStrategy {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut terms = Vec::new();
        for raw in s.split(',') {
            let raw = raw.trim();
            if raw.is_empty() {
                continue;
            }
            let (direction, name) = match raw.strip_prefix('-') {
                Some(rest) => (Direction::Desc, rest.trim()),
                None => (Direction::Asc, raw.strip_prefix('+').unwrap_or(raw).trim()),
            };
            let key = SortKey::from_token(name).ok_or_else(|| StrategyError::UnknownKey(raw.to_string()))?;
            terms.push(SortTerm { key, direction });
        }
        SortStrategy::new(terms)
    }
}

impl fmt::Display for SortStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if t.direction == Direction::Desc {
                f.write_str("-")?;
            }
            f.write_str(t.key.token())?;
        }
        Ok(())
    }
}

impl Serialize for SortStrategy {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SortStrategy {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Title with a leading "a", "an", or "the" removed, lower-cased.
pub fn alpha_key(title: &str) -> String {
    let folded = title.trim().to_lowercase();
    for article in ["the ", "an ", "a "] {
        if let Some(rest) = folded.strip_prefix(article) {
            return rest.trim_start().to_string();
        }
    }
    folded
}

/// `(gray flag, hue bucket, lightness)`.
///
/// Saturation below 0.10 counts as gray; grays sort after all chromatic
/// colors. Chromatic colors fall into twelve 30° hue buckets. Within a bucket
/// (and among grays) lighter sorts first.
pub fn color_key(color: Rgb) -> (u8, u8, f64) {
    let (hue, saturation, lightness) = color.to_hsl();
    if saturation < 0.10 {
        (1, 0, lightness)
    } else {
        (0, ((hue / 30.0).floor() as u8).min(11), lightness)
    }
}

fn cmp_color(a: (u8, u8, f64), b: (u8, u8, f64)) -> Ordering {
    a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then_with(|| b.2.total_cmp(&a.2))
}

struct Keys<'a> {
    volume: &'a Volume,
    alpha: String,
    author: String,
    series: Option<String>,
    color: (u8, u8, f64),
}

impl<'a> Keys<'a> {
    fn new(volume: &'a Volume) -> Self {
        Keys {
            volume,
            alpha: alpha_key(&volume.title),
            author: volume.author_lf.to_lowercase(),
            series: volume.series_name.as_ref().map(|s| s.to_lowercase()),
            color: color_key(volume.spine_color),
        }
    }
}

fn cmp_opt_f64(a: Option<f64>, b: Option<f64>) -> Ordering {
    match (a, b) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
}

fn compare_term(a: &Keys, b: &Keys, term: SortTerm) -> Ordering {
    let (va, vb) = (a.volume, b.volume);
    let directed = |o: Ordering| match term.direction {
        Direction::Asc => o,
        Direction::Desc => o.reverse(),
    };
    match term.key {
        SortKey::Size => directed(
            va.height_mm.total_cmp(&vb.height_mm).then(va.spine_thickness_mm.total_cmp(&vb.spine_thickness_mm)),
        ),
        SortKey::Color => directed(cmp_color(a.color, b.color)),
        SortKey::Alpha => directed(a.alpha.cmp(&b.alpha)),
        SortKey::AuthorSeries => directed(
            a.author
                .cmp(&b.author)
                .then_with(|| a.series.cmp(&b.series))
                .then_with(|| cmp_opt_f64(va.series_index, vb.series_index))
                .then_with(|| a.alpha.cmp(&b.alpha)),
        ),
        // unknown ratings go last in either direction
        SortKey::Rating => match (va.average_rating, vb.average_rating) {
            (Some(x), Some(y)) => directed(x.total_cmp(&y)),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        },
        SortKey::Genre => directed(genre_rank(va.facets.genre).cmp(&genre_rank(vb.facets.genre))),
        SortKey::Age => directed(age_rank(va.facets.age_band).cmp(&age_rank(vb.facets.age_band))),
    }
}

fn genre_rank(g: Genre) -> usize {
    Genre::ALL.iter().position(|x| *x == g).unwrap_or(usize::MAX)
}

fn age_rank(a: AgeBand) -> usize {
    AgeBand::ALL.iter().position(|x| *x == a).unwrap_or(usize::MAX)
}

/// Stable lexicographic sort over the strategy's keys, then ISBN-13 ascending.
pub fn sort_volumes<'a>(volumes: impl IntoIterator<Item = &'a Volume>, strategy: &SortStrategy) -> Vec<Isbn13> {
    let mut keyed: Vec<Keys> = volumes.into_iter().map(Keys::new).collect();
    keyed.sort_by(|a, b| {
        strategy
            .terms
            .iter()
            .map(|t| compare_term(a, b, *t))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.volume.isbn13.cmp(&b.volume.isbn13))
    });
    keyed.into_iter().map(|k| k.volume.isbn13.clone()).collect()
}
