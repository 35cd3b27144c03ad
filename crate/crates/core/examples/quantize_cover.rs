// Reducing a cover to a four-color palette, picking the spine color, and
// computing channel histograms at 256 and 24 bins.
//
// ```text
// cargo run -p librarylens --example quantize_cover -- cover.jpg
// ```

use librarylens::metadata::decode_cover;
use librarylens::metadata::fixture::synthetic_cover;
use librarylens::spinecolor::{quantize, rgb_histogram, HistogramConfig, PaletteResult, QuantizeConfig};
use librarylens::Rgb;

fn sparkline(counts: &[u64]) -> String {
    const BARS: [char; 8] = ['▁', '▂', '▃', '▄', '▅', '▆', '▇', '█'];
    let max = counts.iter().copied().max().unwrap_or(0).max(1);
    counts.iter().map(|&c| BARS[((c * 7) / max) as usize]).collect()
}

pub fn run_example(cover: &image::RgbImage) -> Result<PaletteResult, Box<dyn std::error::Error>> {
    let palette = quantize(cover, &QuantizeConfig::default())?;
    println!("{}x{} cover, {} pixels sampled", cover.width(), cover.height(), palette.sampled_pixels());
    for e in &palette.entries {
        println!("  {}  {:>6} px", e.color, e.pixel_count);
    }
    println!("spine color: {}", palette.dominant);
    let coarse = rgb_histogram(cover, &HistogramConfig { bins: 24 })?;
    println!("red   {}", sparkline(&coarse.red));
    println!("green {}", sparkline(&coarse.green));
    println!("blue  {}", sparkline(&coarse.blue));
    let fine = rgb_histogram(cover, &HistogramConfig { bins: 256 })?;
    println!("256-bin red peak at {}", fine.red.iter().enumerate().max_by_key(|(_, c)| **c).map_or(0, |(i, _)| i));
    Ok(palette)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cover = match std::env::args().nth(1) {
        Some(path) => decode_cover(&std::fs::read(path)?)?,
        None => synthetic_cover(Rgb::new(31, 58, 95), Rgb::new(217, 164, 4), 25, 64, 96, "example"),
    };
    run_example(&cover)?;
    Ok(())
}
