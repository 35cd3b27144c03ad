//! Restricted-palette cover quantization and RGB histograms.
//!
//! Quantization is median cut over the (possibly stride-sampled) pixels:
//!
//! 1. Start with one box holding every sampled pixel.
//! 2. Pick the box whose widest channel range is largest (ties: earliest box,
//!    then R before G before B). Stop if no box has a non-zero range.
//! 3. Split it on that channel at the lower median value `m`: pixels with
//!    value `<= m` go low, the rest go high. When that leaves the high side
//!    empty (the median equals the maximum) the split is `< max` / `== max`.
//! 4. Repeat until the palette size is reached.
//!
//! Each box becomes a palette entry whose color is the rounded per-channel
//! mean. The dominant color is the entry with the most pixels, ties going to
//! the darker entry (Rec. 709 luminance) and then the lexicographically smaller
//! RGB triple. Nothing is randomized.

use image::RgbImage;
use serde::{Deserialize, Serialize};

use crate::color::{Rgb, NEUTRAL_SPINE};
use crate::metadata::VolumeMeta;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantizeConfig {
    pub palette_size: usize,
    pub max_pixels: usize,
}

impl Default for QuantizeConfig {
    fn default() -> Self {
        QuantizeConfig { palette_size: 4, max_pixels: 65_536 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaletteEntry {
    pub color: Rgb,
    pub pixel_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaletteResult {
    /// Sorted with the dominant entry first.
    pub entries: Vec<PaletteEntry>,
    pub dominant: Rgb,
}

impl PaletteResult {
    pub fn sampled_pixels(&self) -> usize {
        self.entries.iter().map(|e| e.pixel_count).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramConfig {
    pub bins: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RgbHistogram {
    pub red: Vec<u64>,
    pub green: Vec<u64>,
    pub blue: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ColorError {
    #[error("image has no pixels")]
    EmptyImage,
    #[error("palette size {0} outside 1..=16")]
    PaletteSize(usize),
    #[error("max_pixels must be at least 1")]
    MaxPixels,
    #[error("bin count {0} outside 2..=256")]
    Bins(usize),
}

/// Row-major pixels, keeping every `stride`-th one when the image exceeds `max_pixels`.
pub fn sample_pixels(image: &RgbImage, max_pixels: usize) -> Vec<Rgb> {
    let total = image.pixels().len();
    let stride = total.div_ceil(max_pixels.max(1)).max(1);
    image.pixels().step_by(stride).map(|p| Rgb(p.0)).collect()
}

fn channel_range(pixels: &[Rgb]) -> (usize, u8) {
    let mut best = (0usize, 0u8);
    for c in 0..3 {
        let (lo, hi) = pixels.iter().fold((u8::MAX, u8::MIN), |(lo, hi), p| (lo.min(p.0[c]), hi.max(p.0[c])));
        let range = hi.saturating_sub(lo);
        if range > best.1 {
            best = (c, range);
        }
    }
    best
}

fn split_box(pixels: Vec<Rgb>, channel: usize) -> (Vec<Rgb>, Vec<Rgb>) {
    let mut counts = [0usize; 256];
    for p in &pixels {
        counts[usize::from(p.0[channel])] += 1;
    }
    let rank = (pixels.len() - 1) / 2;
    let mut seen = 0;
    let median = counts
        .iter()
        .position(|&n| {
            seen += n;
            seen > rank
        })
        .unwrap_or(255) as u8;
    let max = counts.iter().rposition(|&n| n > 0).unwrap_or(255) as u8;
    let threshold = if median < max { median } else { max - 1 };
    pixels.into_iter().partition(|p| p.0[channel] <= threshold)
}

fn mean_color(pixels: &[Rgb]) -> Rgb {
    let n = pixels.len() as f64;
    let mut sums = [0u64; 3];
    for p in pixels {
        for (sum, v) in sums.iter_mut().zip(p.0) {
            *sum += u64::from(v);
        }
    }
    Rgb(sums.map(|s| (s as f64 / n).round() as u8))
}

/// Dominant-first order: pixel count desc, luminance asc, RGB asc.
fn entry_order(a: &PaletteEntry, b: &PaletteEntry) -> std::cmp::Ordering {
    b.pixel_count
        .cmp(&a.pixel_count)
        .then_with(|| a.color.luminance().total_cmp(&b.color.luminance()))
        .then_with(|| a.color.cmp(&b.color))
}

/// Median-cut palette of a set of pixels. `pixels` must be non-empty.
pub fn median_cut(pixels: Vec<Rgb>, palette_size: usize) -> Vec<PaletteEntry> {
    let mut boxes = vec![pixels];
    while boxes.len() < palette_size {
        let candidate =
            boxes.iter().enumerate().map(|(i, b)| (i, channel_range(b))).filter(|(_, (_, range))| *range > 0).fold(
                None::<(usize, (usize, u8))>,
                |best, cur| match best {
                    Some(b) if b.1 .1 >= cur.1 .1 => Some(b),
                    _ => Some(cur),
                },
            );
        let Some((index, (channel, _))) = candidate else { break };
        let target = std::mem::take(&mut boxes[index]);
        let (low, high) = split_box(target, channel);
        boxes[index] = low;
        boxes.insert(index + 1, high);
    }
    let mut entries: Vec<PaletteEntry> =
        boxes.iter().map(|b| PaletteEntry { color: mean_color(b), pixel_count: b.len() }).collect();
    entries.sort_by(entry_order);
    entries
}

pub fn quantize(image: &RgbImage, config: &QuantizeConfig) -> Result<PaletteResult, ColorError> {
    if !(1..=16).contains(&config.palette_size) {
        return Err(ColorError::PaletteSize(config.palette_size));
    }
    if config.max_pixels == 0 {
        return Err(ColorError::MaxPixels);
    }
    if image.width() == 0 || image.height() == 0 {
        return Err(ColorError::EmptyImage);
    }
    let entries = median_cut(sample_pixels(image, config.max_pixels), config.palette_size);
    let dominant = entries[0].color;
    Ok(PaletteResult { entries, dominant })
}

/// Per-channel counts; value `v` lands in bin `v * bins / 256`.
pub fn rgb_histogram(image: &RgbImage, config: &HistogramConfig) -> Result<RgbHistogram, ColorError> {
    let bins = config.bins;
    if !(2..=256).contains(&bins) {
        return Err(ColorError::Bins(bins));
    }
    let mut hist = RgbHistogram { red: vec![0; bins], green: vec![0; bins], blue: vec![0; bins] };
    let bin = |v: u8| usize::from(v) * bins / 256;
    for p in image.pixels() {
        hist.red[bin(p.0[0])] += 1;
        hist.green[bin(p.0[1])] += 1;
        hist.blue[bin(p.0[2])] += 1;
    }
    Ok(hist)
}

/// Dominant quantized color of the cover, or the neutral gray without one.
pub fn spine_color_for(meta: &VolumeMeta, cover: Option<&RgbImage>) -> Rgb {
    spine_color_with(meta, cover, &QuantizeConfig::default())
}

pub fn spine_color_with(meta: &VolumeMeta, cover: Option<&RgbImage>, config: &QuantizeConfig) -> Rgb {
    match cover.map(|img| quantize(img, config)) {
        Some(Ok(palette)) => palette.dominant,
        Some(Err(e)) => {
            log::warn!("{}: cannot quantize cover: {e}", meta.isbn13);
            NEUTRAL_SPINE
        }
        None => NEUTRAL_SPINE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::Isbn13;
    use crate::metadata::ProviderRecord;

    fn image_of(pixels: &[(Rgb, usize)]) -> RgbImage {
        let flat: Vec<Rgb> = pixels.iter().flat_map(|(c, n)| std::iter::repeat_n(*c, *n)).collect();
        RgbImage::from_fn(flat.len() as u32, 1, |x, _| image::Rgb(flat[x as usize].0))
    }

    fn meta() -> VolumeMeta {
        ProviderRecord::default().into_meta(Isbn13::parse("9780306406157").unwrap())
    }

    const BLUE: Rgb = Rgb::new(0, 0, 255);
    const YELLOW: Rgb = Rgb::new(255, 255, 0);
    const RED: Rgb = Rgb::new(255, 0, 0);

    #[test]
    fn uniform_image_has_one_entry() {
        let img = RgbImage::from_pixel(5, 7, image::Rgb([200, 30, 40]));
        let p = quantize(&img, &QuantizeConfig::default()).unwrap();
        assert_eq!(p.entries, vec![PaletteEntry { color: Rgb::new(200, 30, 40), pixel_count: 35 }]);
        assert_eq!(p.dominant, Rgb::new(200, 30, 40));
    }

    #[test]
    fn majority_cluster_wins() {
        let p = quantize(&image_of(&[(BLUE, 6), (YELLOW, 4)]), &QuantizeConfig::default()).unwrap();
        assert_eq!(p.dominant, BLUE);
        assert_eq!(p.entries.len(), 2);
        assert_eq!(p.entries[1], PaletteEntry { color: YELLOW, pixel_count: 4 });
    }

    #[test]
    fn equal_counts_prefer_darker() {
        let p = quantize(&image_of(&[(RED, 4), (BLUE, 4)]), &QuantizeConfig::default()).unwrap();
        assert_eq!(p.dominant, BLUE);
    }

    #[test]
    fn zero_pixel_image_is_an_error() {
        assert_eq!(quantize(&RgbImage::new(0, 3), &QuantizeConfig::default()), Err(ColorError::EmptyImage));
        let img = RgbImage::new(1, 1);
        assert!(quantize(&img, &QuantizeConfig { palette_size: 0, max_pixels: 10 }).is_err());
        assert!(quantize(&img, &QuantizeConfig { palette_size: 17, max_pixels: 10 }).is_err());
    }

    #[test]
    fn histogram_examples() {
        let white = RgbImage::from_pixel(1, 1, image::Rgb([255, 255, 255]));
        let h = rgb_histogram(&white, &HistogramConfig { bins: 256 }).unwrap();
        assert_eq!(h.red[255], 1);
        assert_eq!(h.red.iter().sum::<u64>(), 1);
        let h = rgb_histogram(&white, &HistogramConfig { bins: 24 }).unwrap();
        assert_eq!((h.red[23], h.green[23], h.blue[23]), (1, 1, 1));
        let black = RgbImage::from_pixel(2, 1, image::Rgb([0, 0, 0]));
        let h = rgb_histogram(&black, &HistogramConfig { bins: 24 }).unwrap();
        assert_eq!((h.red[0], h.green[0], h.blue[0]), (2, 2, 2));
        assert_eq!(rgb_histogram(&black, &HistogramConfig { bins: 1 }), Err(ColorError::Bins(1)));
        assert_eq!(rgb_histogram(&black, &HistogramConfig { bins: 257 }), Err(ColorError::Bins(257)));
    }

    #[test]
    fn spine_color_fallbacks() {
        assert_eq!(spine_color_for(&meta(), None), Rgb::new(120, 120, 120));
        let dark = RgbImage::from_pixel(3, 3, image::Rgb([10, 10, 10]));
        assert_eq!(spine_color_for(&meta(), Some(&dark)), Rgb::new(10, 10, 10));
        let cover = image_of(&[(BLUE, 6), (YELLOW, 4)]);
        assert_eq!(spine_color_for(&meta(), Some(&cover)), BLUE);
    }

    #[test]
    fn stride_sampling_caps_pixel_count() {
        let img = RgbImage::from_fn(300, 300, |x, y| image::Rgb([(x % 256) as u8, (y % 256) as u8, 7]));
        let p = quantize(&img, &QuantizeConfig { palette_size: 4, max_pixels: 1000 }).unwrap();
        // stride = ceil(90000 / 1000) = 90
        assert_eq!(p.sampled_pixels(), 1000);
        assert_eq!(sample_pixels(&img, 1000).len(), 1000);
        assert_eq!(sample_pixels(&img, 1_000_000).len(), 90_000);
    }

    #[test]
    fn split_keeps_identical_values_together() {
        let pixels = vec![Rgb::new(0, 0, 0), Rgb::new(5, 0, 0), Rgb::new(5, 0, 0), Rgb::new(5, 0, 0)];
        let (low, high) = split_box(pixels, 0);
        assert_eq!(low, vec![Rgb::new(0, 0, 0)]);
        assert_eq!(high.len(), 3);
    }
}
