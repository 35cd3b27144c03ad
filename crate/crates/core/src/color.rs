//! 8-bit RGB colors and the derived quantities the engine sorts and ties on.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An sRGB color with 8 bits per channel.
///
/// Serialized everywhere as `#RRGGBB`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rgb(pub [u8; 3]);

/// Spine color used when a volume has no usable cover.
pub const NEUTRAL_SPINE: Rgb = Rgb([120, 120, 120]);

impl Rgb {
    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Rgb([r, g, b])
    }

    pub fn r(self) -> u8 {
        self.0[0]
    }

    pub fn g(self) -> u8 {
        self.0[1]
    }

    pub fn b(self) -> u8 {
        self.0[2]
    }

    /// Relative luminance with Rec. 709 weights on the raw channel values.
    pub fn luminance(self) -> f64 {
        0.2126 * f64::from(self.r()) + 0.7152 * f64::from(self.g()) + 0.0722 * f64::from(self.b())
    }

    /// Hue in degrees `[0, 360)`, saturation and lightness in `[0, 1]`.
    pub fn to_hsl(self) -> (f64, f64, f64) {
        let r = f64::from(self.r()) / 255.0;
        let g = f64::from(self.g()) / 255.0;
        let b = f64::from(self.b()) / 255.0;
        let max = r.max(g).max(b);
        let min = r.min(g).min(b);
        let lightness = (max + min) / 2.0;
        let delta = max - min;
        if delta == 0.0 {
            return (0.0, 0.0, lightness);
        }
        let saturation = delta / (1.0 - (2.0 * lightness - 1.0).abs());
        let hue = if max == r {
            60.0 * ((g - b) / delta).rem_euclid(6.0)
        } else if max == g {
            60.0 * ((b - r) / delta + 2.0)
        } else {
            60.0 * ((r - g) / delta + 4.0)
        };
        (hue.rem_euclid(360.0), saturation.min(1.0), lightness)
    }

    pub fn to_hex(self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.r(), self.g(), self.b())
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("invalid hex color {0:?}, expected #RRGGBB")]
pub struct ParseColorError(pub String);

impl FromStr for Rgb {
    type Err = ParseColorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let hex = s.trim().strip_prefix('#').unwrap_or(s.trim());
        if hex.len() != 6 || !hex.is_ascii() {
            return Err(ParseColorError(s.to_string()));
        }
        let channel = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).map_err(|_| ParseColorError(s.to_string()));
        Ok(Rgb([channel(0)?, channel(2)?, channel(4)?]))
    }
}

impl Serialize for Rgb {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Rgb {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_round_trip() {
        let c = Rgb::new(200, 30, 40);
        assert_eq!(c.to_hex(), "#c81e28");
        assert_eq!("#C81E28".parse::<Rgb>().unwrap(), c);
        assert!("#c81e2".parse::<Rgb>().is_err());
        assert!("zzzzzz".parse::<Rgb>().is_err());
    }

    #[test]
    fn luminance_orders_blue_below_red() {
        let red = Rgb::new(255, 0, 0).luminance();
        let blue = Rgb::new(0, 0, 255).luminance();
        assert!((red - 54.213).abs() < 1e-9);
        assert!((blue - 18.411).abs() < 1e-9);
    }

    #[test]
    fn hsl_primaries() {
        let (h, s, l) = Rgb::new(255, 0, 0).to_hsl();
        assert_eq!((h, s, l), (0.0, 1.0, 0.5));
        let (h, _, _) = Rgb::new(0, 255, 0).to_hsl();
        assert!((h - 120.0).abs() < 1e-9);
        let (h, _, _) = Rgb::new(0, 0, 255).to_hsl();
        assert!((h - 240.0).abs() < 1e-9);
        let (_, s, l) = Rgb::new(128, 128, 128).to_hsl();
        assert_eq!(s, 0.0);
        assert!((l - 128.0 / 255.0).abs() < 1e-12);
    }
}
