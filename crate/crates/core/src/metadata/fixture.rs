//! Offline provider backed by a bundled JSON file.
//!
//! The file maps ISBN-13 strings to provider bodies in the same shape the
//! remote API returns. Cover references of the form
//! `synthetic:#RRGGBB:#RRGGBB:<percent>` are rendered on demand as 64×96 PNGs
//! (background color, accent band covering `<percent>` of the rows, light
//! deterministic noise); `file:<path>` references are read relative to the
//! fixture file.

use std::collections::BTreeMap;
use std::io::Cursor;
use std::path::{Path, PathBuf};

use image::{ImageFormat, Rgb as Pixel, RgbImage};

use super::provider::{FetchFailure, FetchLimits, MetadataProvider, ProviderRecord};
use crate::color::Rgb;
use crate::ingest::Isbn13;

/// Metadata for the bundled 135-book sample library.
pub const BUNDLED_FIXTURE_JSON: &str = include_str!("../../data/fixture/metadata.json");
/// Goodreads export matching [`BUNDLED_FIXTURE_JSON`].
pub const BUNDLED_FIXTURE_CSV: &str = include_str!("../../data/fixture/goodreads_library.csv");

pub const SYNTHETIC_COVER_SIZE: (u32, u32) = (64, 96);

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("reading fixture: {0}")]
    Io(#[from] std::io::Error),
    #[error("parsing fixture: {0}")]
    Json(#[from] serde_json::Error),
}

pub struct FixtureProvider {
    records: BTreeMap<String, ProviderRecord>,
    base_dir: Option<PathBuf>,
}

impl FixtureProvider {
    pub fn bundled() -> Self {
        Self::from_json(BUNDLED_FIXTURE_JSON).expect("bundled fixture is valid JSON")
    }

    pub fn from_json(json: &str) -> Result<Self, FixtureError> {
        Ok(FixtureProvider { records: serde_json::from_str(json)?, base_dir: None })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, FixtureError> {
        let text = std::fs::read_to_string(path.as_ref())?;
        let mut provider = Self::from_json(&text)?;
        provider.base_dir = path.as_ref().parent().map(Path::to_path_buf);
        Ok(provider)
    }

    pub fn from_records(records: BTreeMap<String, ProviderRecord>) -> Self {
        FixtureProvider { records, base_dir: None }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn isbns(&self) -> impl Iterator<Item = &str> {
        self.records.keys().map(String::as_str)
    }
}

impl MetadataProvider for FixtureProvider {
    fn lookup(&self, isbn: &Isbn13) -> Result<ProviderRecord, FetchFailure> {
        self.records.get(isbn.as_str()).cloned().ok_or(FetchFailure::NotFound)
    }

    fn fetch_cover(&self, reference: &str) -> Result<Vec<u8>, FetchFailure> {
        if let Some(spec) = reference.strip_prefix("synthetic:") {
            let image = parse_synthetic(spec).ok_or(FetchFailure::NotFound)?;
            return encode_png(&image).map_err(FetchFailure::Network);
        }
        if let Some(rel) = reference.strip_prefix("file:") {
            let path = match &self.base_dir {
                Some(dir) => dir.join(rel),
                None => PathBuf::from(rel),
            };
            return std::fs::read(path).map_err(|_| FetchFailure::NotFound);
        }
        Err(FetchFailure::NotFound)
    }

    fn limits(&self) -> FetchLimits {
        FetchLimits { max_in_flight: 8, retry_budget: 0, backoff_base_ms: 0 }
    }
}

fn parse_synthetic(spec: &str) -> Option<RgbImage> {
    let mut parts = spec.split(':');
    let background: Rgb = parts.next()?.parse().ok()?;
    let accent: Rgb = parts.next()?.parse().ok()?;
    let percent: u32 = parts.next()?.parse().ok()?;
    let (w, h) = SYNTHETIC_COVER_SIZE;
    Some(synthetic_cover(background, accent, percent.min(100), w, h, spec))
}

/// A flat two-tone cover with ±6 of per-channel noise seeded from `seed`.
pub fn synthetic_cover(
    background: Rgb,
    accent: Rgb,
    accent_percent: u32,
    width: u32,
    height: u32,
    seed: &str,
) -> RgbImage {
    // FNV-1a over the seed, then xorshift for the noise stream
    let mut state =
        seed.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)) | 1;
    let band_rows = height * accent_percent.min(100) / 100;
    RgbImage::from_fn(width, height, |_, y| {
        let base = if y < band_rows { accent } else { background };
        let mut px = [0u8; 3];
        for (c, out) in px.iter_mut().enumerate() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let jitter = (state % 13) as i16 - 6;
            *out = (i16::from(base.0[c]) + jitter).clamp(0, 255) as u8;
        }
        Pixel(px)
    })
}

pub(crate) fn encode_png(image: &RgbImage) -> Result<Vec<u8>, String> {
    let mut bytes = Cursor::new(Vec::new());
    image.write_to(&mut bytes, ImageFormat::Png).map_err(|e| e.to_string())?;
    Ok(bytes.into_inner())
}
