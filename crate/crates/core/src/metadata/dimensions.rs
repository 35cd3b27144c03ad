use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ingest::Binding;

pub const HEIGHT_RANGE_MM: (f64, f64) = (100.0, 400.0);
pub const THICKNESS_RANGE_MM: (f64, f64) = (3.0, 120.0);

/// Cover boards plus endpapers.
const COVER_ALLOWANCE_MM: f64 = 4.0;
const MM_PER_PAGE: f64 = 0.06;
/// Thickness assumed when the page count is unknown (a median paperback).
const UNKNOWN_PAGES_THICKNESS_MM: f64 = 18.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DimensionSource {
    Provider,
    Estimated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dimensions {
    pub height_mm: f64,
    pub spine_thickness_mm: f64,
    pub source: DimensionSource,
}

fn round_tenth(v: f64) -> f64 {
    (v * 10.0).round() / 10.0
}

pub fn clamp_height(mm: f64) -> f64 {
    mm.clamp(HEIGHT_RANGE_MM.0, HEIGHT_RANGE_MM.1)
}

pub fn clamp_thickness(mm: f64) -> f64 {
    mm.clamp(THICKNESS_RANGE_MM.0, THICKNESS_RANGE_MM.1)
}

pub fn estimated_height_mm(binding: Binding) -> f64 {
    match binding {
        Binding::Hardcover => 235.0,
        Binding::Paperback => 210.0,
        Binding::MassMarket => 175.0,
        _ => 203.0,
    }
}

pub fn estimated_thickness_mm(page_count: u32) -> f64 {
    if page_count == 0 {
        return UNKNOWN_PAGES_THICKNESS_MM;
    }
    round_tenth(clamp_thickness(COVER_ALLOWANCE_MM + MM_PER_PAGE * f64::from(page_count)))
}

/// Physical size from page count and binding alone.
pub fn estimate_dimensions(page_count: u32, binding: Binding) -> Dimensions {
    Dimensions {
        height_mm: estimated_height_mm(binding),
        spine_thickness_mm: estimated_thickness_mm(page_count),
        source: DimensionSource::Estimated,
    }
}

/// Height and spine thickness in millimetres as reported by a provider, if any.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ReportedDimensions {
    pub height_mm: Option<f64>,
    pub thickness_mm: Option<f64>,
}

fn to_mm(value: f64, unit: &str) -> Option<f64> {
    let unit = unit.trim().to_ascii_lowercase();
    let factor = match unit.as_str() {
        "in" | "inch" | "inches" | "\"" => 25.4,
        "cm" | "centimeter" | "centimeters" | "centimetre" | "centimetres" => 10.0,
        "mm" | "millimeter" | "millimeters" | "millimetre" | "millimetres" => 1.0,
        _ => return None,
    };
    (value.is_finite() && value > 0.0).then_some(value * factor)
}

fn dimension_pattern() -> &'static Regex {
    static PATTERN: OnceLock<Regex> = OnceLock::new();
    PATTERN.get_or_init(|| {
        Regex::new(r"(?i)(height|width|thickness|depth)\s*:\s*([0-9]+(?:\.[0-9]+)?)\s*([a-z]+)")
            .expect("dimension regex")
    })
}

/// Parses the provider `dimensions` field.
///
/// Accepts the text form `"Height: 9.21 Inches, Length: 6.14 Inches, Width: 0.92 Inches"`
/// (width is the spine) and the object form
/// `{"height": {"value": 23.4, "unit": "cm"}, "width": {...}}`.
pub fn parse_reported_dimensions(value: &Value) -> ReportedDimensions {
    let mut out = ReportedDimensions::default();
    match value {
        Value::String(text) => {
            for caps in dimension_pattern().captures_iter(text) {
                let Ok(v) = caps[2].parse::<f64>() else { continue };
                let Some(mm) = to_mm(v, &caps[3]) else { continue };
                match caps[1].to_ascii_lowercase().as_str() {
                    "height" => out.height_mm = Some(mm),
                    _ => out.thickness_mm = Some(mm),
                }
            }
        }
        Value::Object(map) => {
            let read = |key: &str| -> Option<f64> {
                let entry = map.get(key)?;
                let v = entry.get("value")?.as_f64()?;
                let unit = entry.get("unit").and_then(Value::as_str).unwrap_or("mm");
                to_mm(v, unit)
            };
            out.height_mm = read("height");
            out.thickness_mm = read("width").or_else(|| read("thickness"));
        }
        _ => {}
    }
    out
}

/// Combines provider-reported fields with the estimate. Provider values win
/// field by field; the source is `Provider` only when both came from it.
pub fn resolve_dimensions(reported: ReportedDimensions, page_count: u32, binding: Binding) -> Dimensions {
    let estimate = estimate_dimensions(page_count, binding);
    let source = if reported.height_mm.is_some() && reported.thickness_mm.is_some() {
        DimensionSource::Provider
    } else {
        DimensionSource::Estimated
    };
    Dimensions {
        height_mm: reported.height_mm.map(|h| round_tenth(clamp_height(h))).unwrap_or(estimate.height_mm),
        spine_thickness_mm: reported
            .thickness_mm
            .map(|t| round_tenth(clamp_thickness(t)))
            .unwrap_or(estimate.spine_thickness_mm),
        source,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn estimate_worked_examples() {
        let d = estimate_dimensions(300, Binding::Paperback);
        assert_eq!((d.height_mm, d.spine_thickness_mm), (210.0, 22.0));
        assert_eq!(d.source, DimensionSource::Estimated);
        let d = estimate_dimensions(0, Binding::Hardcover);
        assert_eq!((d.height_mm, d.spine_thickness_mm), (235.0, 18.0));
        let d = estimate_dimensions(4000, Binding::Hardcover);
        assert_eq!((d.height_mm, d.spine_thickness_mm), (235.0, 120.0));
        assert_eq!(estimate_dimensions(10, Binding::MassMarket).height_mm, 175.0);
        assert_eq!(estimate_dimensions(10, Binding::Audio).height_mm, 203.0);
        // 4.0 + 0.06 * 333 = 23.98
        assert_eq!(estimated_thickness_mm(333), 24.0);
    }

    #[test]
    fn text_dimensions() {
        let d = parse_reported_dimensions(&json!(
            "Height: 9.21 Inches, Length: 6.14 Inches, Weight: 1.2 Pounds, Width: 0.92 Inches"
        ));
        assert!((d.height_mm.unwrap() - 233.934).abs() < 1e-9);
        assert!((d.thickness_mm.unwrap() - 23.368).abs() < 1e-9);
    }

    #[test]
    fn object_dimensions() {
        let d = parse_reported_dimensions(&json!({
            "height": {"value": 21.0, "unit": "cm"},
            "width": {"value": 18, "unit": "mm"}
        }));
        assert_eq!(d.height_mm, Some(210.0));
        assert_eq!(d.thickness_mm, Some(18.0));
        assert_eq!(parse_reported_dimensions(&json!(null)), ReportedDimensions::default());
    }

    #[test]
    fn provider_garbage_is_clamped() {
        let d = resolve_dimensions(
            ReportedDimensions { height_mm: Some(9999.0), thickness_mm: Some(0.1) },
            100,
            Binding::Paperback,
        );
        assert_eq!(d.height_mm, 400.0);
        assert_eq!(d.spine_thickness_mm, 3.0);
        assert_eq!(d.source, DimensionSource::Provider);
    }

    #[test]
    fn partial_report_mixes_with_estimate() {
        let d = resolve_dimensions(
            ReportedDimensions { height_mm: Some(240.0), thickness_mm: None },
            300,
            Binding::Paperback,
        );
        assert_eq!((d.height_mm, d.spine_thickness_mm), (240.0, 22.0));
        assert_eq!(d.source, DimensionSource::Estimated);
    }
}
