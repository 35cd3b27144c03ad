//! Deterministic SVG blueprint of a packed layout, 1 mm = 1 user unit.
//!
//! Shelf `i` occupies the band `[i * (clearance + gap), i * (clearance + gap) + clearance]`
//! with its baseline at the bottom of the band. Books sit on the baseline at
//! their x offset. Overflow volumes are drawn upright, side by side, in a strip
//! below the last shelf.

use std::fmt::Write;

use super::{display_color, EncodingMode, PaletteTable};
use crate::shelf::{Orientation, SceneLayout, ShelfSpec};
use crate::volume::{Catalog, Volume};

/// Vertical space between consecutive shelves (the board).
pub const SHELF_GAP_MM: f64 = 20.0;
const CAPTION_MARGIN_MM: f64 = 70.0;
const CAPTION_FONT: f64 = 14.0;
const OVERFLOW_CAPTION_MM: f64 = 24.0;

/// Shortest decimal form with at most two fractional digits.
fn num(v: f64) -> String {
    let rounded = (v * 100.0).round() / 100.0;
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    let s = format!("{rounded:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c if (c as u32) < 0x20 && c != '\t' && c != '\n' && c != '\r' => {}
            c => out.push(c),
        }
    }
    out
}

struct Rect {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
}

struct Book<'a> {
    volume: &'a Volume,
    rect: Rect,
    vertical_text: bool,
    shelf: Option<usize>,
}

fn book_rect(volume: &Volume, x: f64, baseline: f64, orientation: Orientation) -> Rect {
    match orientation {
        Orientation::Upright => {
            Rect { x, y: baseline - volume.height_mm, w: volume.spine_thickness_mm, h: volume.height_mm }
        }
        Orientation::Flat => {
            Rect { x, y: baseline - volume.spine_thickness_mm, w: volume.height_mm, h: volume.spine_thickness_mm }
        }
    }
}

fn write_book(
    out: &mut String,
    defs: &mut String,
    id: usize,
    book: &Book,
    mode: EncodingMode,
    palettes: &PaletteTable,
    labels: bool,
) {
    let color = display_color(book.volume, mode, palettes);
    let Rect { x, y, w, h } = book.rect;
    let shelf_attr = book.shelf.map_or_else(|| "overflow".to_string(), |s| s.to_string());
    let _ = writeln!(
        out,
        r##"    <rect class="volume" data-isbn="{}" data-shelf="{}" x="{}" y="{}" width="{}" height="{}" fill="{}" stroke="#1a1a1a" stroke-width="0.5"/>"##,
        book.volume.isbn13,
        shelf_attr,
        num(x),
        num(y),
        num(w),
        num(h),
        color
    );
    if !labels {
        return;
    }
    let _ = writeln!(
        defs,
        r#"    <clipPath id="clip-{id}"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath>"#,
        num(x),
        num(y),
        num(w),
        num(h)
    );
    let text_fill = if color.luminance() > 140.0 { "#111111" } else { "#f5f5f5" };
    let title = escape(&book.volume.title);
    if book.vertical_text {
        let size = (w * 0.6).clamp(2.0, 12.0);
        let _ = writeln!(
            out,
            r#"    <g clip-path="url(#clip-{id})"><text class="volume-label" transform="translate({} {}) rotate(-90)" font-family="sans-serif" font-size="{}" fill="{text_fill}" dominant-baseline="middle">{title}</text></g>"#,
            num(x + w / 2.0),
            num(y + h - 3.0),
            num(size)
        );
    } else {
        let size = (h * 0.6).clamp(2.0, 12.0);
        let _ = writeln!(
            out,
            r#"    <g clip-path="url(#clip-{id})"><text class="volume-label" x="{}" y="{}" font-family="sans-serif" font-size="{}" fill="{text_fill}" dominant-baseline="middle">{title}</text></g>"#,
            num(x + 3.0),
            num(y + h / 2.0),
            num(size)
        );
    }
}

/// Renders `layout` as a standalone SVG 1.1 document.
///
/// With `labels` each spine carries its title, clipped to the spine. Shelf
/// captions are always drawn; the overflow caption only when something
/// overflowed. Identical inputs give byte-identical output.
pub fn render_svg(
    layout: &SceneLayout,
    catalog: &Catalog,
    spec: &ShelfSpec,
    mode: EncodingMode,
    palettes: &PaletteTable,
    labels: bool,
) -> String {
    let width = spec.shelf_width_mm();
    let clearance = spec.shelf_clearance_mm();
    let pitch = clearance + SHELF_GAP_MM;
    let shelves_height = spec.shelf_count() as f64 * pitch;

    let overflow: Vec<&Volume> = layout.overflow.iter().filter_map(|i| catalog.get(i)).collect();
    let overflow_width: f64 = overflow.iter().map(|v| v.spine_thickness_mm).sum();
    let overflow_height = overflow.iter().map(|v| v.height_mm).fold(0.0, f64::max);
    let strip_top = shelves_height;
    let total_height = if overflow.is_empty() {
        shelves_height
    } else {
        strip_top + OVERFLOW_CAPTION_MM + overflow_height + SHELF_GAP_MM
    };
    let total_width = width.max(overflow_width) + CAPTION_MARGIN_MM;

    let mut body = String::new();
    let mut defs = String::new();
    let mut id = 0usize;

    for shelf in 0..spec.shelf_count() {
        let top = shelf as f64 * pitch;
        let baseline = top + clearance;
        let _ = writeln!(body, r#"  <g class="shelf" id="shelf-{shelf}">"#);
        let _ = writeln!(
            body,
            r##"    <rect class="shelf-outline" x="0" y="{}" width="{}" height="{}" fill="none" stroke="#555555" stroke-width="1"/>"##,
            num(top),
            num(width),
            num(clearance)
        );
        let _ = writeln!(
            body,
            r##"    <line class="shelf-baseline" x1="0" y1="{b}" x2="{}" y2="{b}" stroke="#222222" stroke-width="2"/>"##,
            num(width),
            b = num(baseline)
        );
        let _ = writeln!(
            body,
            r##"    <text class="shelf-caption" x="{}" y="{}" font-family="sans-serif" font-size="{}" fill="#222222">Shelf {}</text>"##,
            num(width + 8.0),
            num(baseline),
            num(CAPTION_FONT),
            shelf + 1
        );
        for placement in layout.shelf(shelf) {
            let Some(volume) = catalog.get(&placement.isbn13) else { continue };
            let book = Book {
                volume,
                rect: book_rect(volume, placement.x_offset_mm, baseline, placement.orientation),
                vertical_text: placement.orientation == Orientation::Upright,
                shelf: Some(shelf),
            };
            write_book(&mut body, &mut defs, id, &book, mode, palettes, labels);
            id += 1;
        }
        body.push_str("  </g>\n");
    }

    body.push_str("  <g id=\"overflow\">\n");
    if !overflow.is_empty() {
        let _ = writeln!(
            body,
            r##"    <text class="shelf-caption overflow-caption" x="0" y="{}" font-family="sans-serif" font-size="{}" fill="#222222">overflow ({})</text>"##,
            num(strip_top + CAPTION_FONT + 4.0),
            num(CAPTION_FONT),
            overflow.len()
        );
        let baseline = strip_top + OVERFLOW_CAPTION_MM + overflow_height;
        let mut x = 0.0;
        for volume in overflow {
            let book = Book {
                volume,
                rect: book_rect(volume, x, baseline, Orientation::Upright),
                vertical_text: true,
                shelf: None,
            };
            write_book(&mut body, &mut defs, id, &book, mode, palettes, labels);
            id += 1;
            x += volume.spine_thickness_mm;
        }
    }
    body.push_str("  </g>\n");

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}mm" height="{h}mm" viewBox="0 0 {w} {h}">"#,
        w = num(total_width),
        h = num(total_height)
    );
    if !defs.is_empty() {
        out.push_str("  <defs>\n");
        out.push_str(&defs);
        out.push_str("  </defs>\n");
    }
    out.push_str(&body);
    out.push_str("</svg>\n");
    out
}
