//! Spine color encodings and SVG blueprints.

mod svg;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::color::Rgb;
use crate::facets::{AgeBand, Genre};
use crate::volume::Volume;

pub use svg::{render_svg, SHELF_GAP_MM};

pub const DEFAULT_PALETTES_JSON: &str = include_str!("../../data/palettes.json");

/// Which attribute drives spine fill colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum EncodingMode {
    /// The quantized cover color.
    #[default]
    Original,
    Age,
    Genre,
    Rating,
}

impl EncodingMode {
    pub const ALL: [EncodingMode; 4] =
        [EncodingMode::Original, EncodingMode::Age, EncodingMode::Genre, EncodingMode::Rating];

    pub fn token(self) -> &'static str {
        match self {
            EncodingMode::Original => "original",
            EncodingMode::Age => "age",
            EncodingMode::Genre => "genre",
            EncodingMode::Rating => "rating",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown encoding {0:?} (expected original, age, genre, or rating)")]
pub struct UnknownEncoding(pub String);

impl FromStr for EncodingMode {
    type Err = UnknownEncoding;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EncodingMode::ALL
            .into_iter()
            .find(|m| m.token().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownEncoding(s.to_string()))
    }
}

impl fmt::Display for EncodingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatingRamp {
    /// Color at rating 1.0 and below.
    pub low: Rgb,
    /// Color at rating 5.0.
    pub high: Rgb,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaletteTable {
    pub genre_colors: BTreeMap<Genre, Rgb>,
    pub age_colors: BTreeMap<AgeBand, Rgb>,
    pub rating_ramp: RatingRamp,
    pub missing_rating: Rgb,
}

#[derive(Debug, thiserror::Error)]
pub enum PaletteError {
    #[error("palette file: {0}")]
    Io(#[from] std::io::Error),
    #[error("palette file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("palette key {key:?}: {reason}")]
    Key { key: String, reason: String },
    #[error("palette is missing {0:?}")]
    Missing(String),
    #[error("{0} colors must be pairwise distinct")]
    NotDistinct(&'static str),
}

impl PaletteTable {
    /// Parses the flat `{"genre.Fantasy": "#rrggbb", ...}` form.
    pub fn from_json(text: &str) -> Result<Self, PaletteError> {
        let flat: BTreeMap<String, String> = serde_json::from_str(text)?;
        let mut genre_colors = BTreeMap::new();
        let mut age_colors = BTreeMap::new();
        let (mut low, mut high, mut missing) = (None, None, None);
        for (key, hex) in &flat {
            let bad = |reason: String| PaletteError::Key { key: key.clone(), reason };
            let color: Rgb = hex.parse().map_err(|e: crate::color::ParseColorError| bad(e.to_string()))?;
            let (group, name) = key.split_once('.').ok_or_else(|| bad("expected group.name".into()))?;
            match group {
                "genre" => {
                    let g: Genre = name.parse().map_err(|e: crate::facets::UnknownFacet| bad(e.to_string()))?;
                    genre_colors.insert(g, color);
                }
                "age" => {
                    let a: AgeBand = name.parse().map_err(|e: crate::facets::UnknownFacet| bad(e.to_string()))?;
                    age_colors.insert(a, color);
                }
                "rating" => match name {
                    "low" => low = Some(color),
                    "high" => high = Some(color),
                    "missing" => missing = Some(color),
                    _ => return Err(bad("expected rating.low, rating.high, or rating.missing".into())),
                },
                _ => return Err(bad("unknown group".into())),
            }
        }
        for g in Genre::ALL {
            if !genre_colors.contains_key(&g) {
                return Err(PaletteError::Missing(format!("genre.{g}")));
            }
        }
        for a in AgeBand::ALL {
            if !age_colors.contains_key(&a) {
                return Err(PaletteError::Missing(format!("age.{a}")));
            }
        }
        if genre_colors.values().collect::<HashSet<_>>().len() != genre_colors.len() {
            return Err(PaletteError::NotDistinct("genre"));
        }
        if age_colors.values().collect::<HashSet<_>>().len() != age_colors.len() {
            return Err(PaletteError::NotDistinct("age"));
        }
        Ok(PaletteTable {
            genre_colors,
            age_colors,
            rating_ramp: RatingRamp {
                low: low.ok_or_else(|| PaletteError::Missing("rating.low".into()))?,
                high: high.ok_or_else(|| PaletteError::Missing("rating.high".into()))?,
            },
            missing_rating: missing.ok_or_else(|| PaletteError::Missing("rating.missing".into()))?,
        })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, PaletteError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// The bundled palettes, or the file named by `LIBRARYLENS_PALETTES`.
    pub fn from_env() -> Result<Self, PaletteError> {
        match std::env::var("LIBRARYLENS_PALETTES") {
            Ok(path) if !path.trim().is_empty() => Self::from_file(path),
            _ => Ok(Self::default()),
        }
    }
}

impl Default for PaletteTable {
    fn default() -> Self {
        PaletteTable::from_json(DEFAULT_PALETTES_JSON).expect("bundled palettes are valid")
    }
}

/// Position of `rating` on the ramp: 0 at 1.0 and below, 1 at 5.0 and above.
pub fn rating_parameter(rating: f64) -> f64 {
    ((rating - 1.0) / 4.0).clamp(0.0, 1.0)
}

fn lerp_channel(low: u8, high: u8, t: f64) -> u8 {
    let v = f64::from(low) + (f64::from(high) - f64::from(low)) * t;
    v.round().clamp(0.0, 255.0) as u8
}

pub fn rating_color(rating: Option<f64>, palettes: &PaletteTable) -> Rgb {
    match rating {
        Some(r) if r.is_finite() => {
            let t = rating_parameter(r);
            let RatingRamp { low, high } = palettes.rating_ramp;
            Rgb([0, 1, 2].map(|c| lerp_channel(low.0[c], high.0[c], t)))
        }
        _ => palettes.missing_rating,
    }
}

/// Fill color of a spine under `mode`.
pub fn display_color(volume: &Volume, mode: EncodingMode, palettes: &PaletteTable) -> Rgb {
    match mode {
        EncodingMode::Original => volume.spine_color,
        EncodingMode::Age => palettes.age_colors[&volume.facets.age_band],
        EncodingMode::Genre => palettes.genre_colors[&volume.facets.genre],
        EncodingMode::Rating => rating_color(volume.average_rating, palettes),
    }
}
