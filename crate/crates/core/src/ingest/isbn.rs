//! ISBN-10 / ISBN-13 checksums and conversion.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum IsbnError {
    #[error("shape")]
    Shape,
    #[error("checksum")]
    Checksum,
}

/// A canonical, checksum-verified 13-digit ISBN.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isbn13(String);

impl Isbn13 {
    pub fn parse(s: &str) -> Result<Self, IsbnError> {
        if s.len() != 13 || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(IsbnError::Shape);
        }
        if !validate_isbn13(s) {
            return Err(IsbnError::Checksum);
        }
        Ok(Isbn13(s.to_string()))
    }

    /// Builds a valid ISBN-13 from its first twelve digits.
    pub fn from_prefix(prefix: &str) -> Result<Self, IsbnError> {
        if prefix.len() != 12 || !prefix.bytes().all(|b| b.is_ascii_digit()) {
            return Err(IsbnError::Shape);
        }
        let check = isbn13_check_digit(prefix.as_bytes());
        Ok(Isbn13(format!("{prefix}{check}")))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Isbn13 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Isbn13 {
    type Err = IsbnError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Isbn13::parse(s)
    }
}

impl AsRef<str> for Isbn13 {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl Serialize for Isbn13 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Isbn13 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Isbn13::parse(&s).map_err(|e| serde::de::Error::custom(format!("isbn13 {s:?}: {e}")))
    }
}

/// Check digit over the first twelve ASCII digits (weights 1,3 alternating).
fn isbn13_check_digit(digits: &[u8]) -> u8 {
    let sum: u32 =
        digits[..12].iter().enumerate().map(|(i, d)| u32::from(d - b'0') * if i % 2 == 0 { 1 } else { 3 }).sum();
    ((10 - sum % 10) % 10) as u8
}

/// True iff `s` is exactly thirteen ASCII digits with a correct check digit.
pub fn validate_isbn13(s: &str) -> bool {
    let bytes = s.as_bytes();
    bytes.len() == 13 && bytes.iter().all(u8::is_ascii_digit) && isbn13_check_digit(bytes) == bytes[12] - b'0'
}

/// True iff `s` is nine digits followed by a digit or `X` satisfying the mod-11 sum.
pub fn validate_isbn10(s: &str) -> bool {
    isbn10_digits(s).is_ok_and(|d| isbn10_sum(&d).is_multiple_of(11))
}

fn isbn10_digits(s: &str) -> Result<[u32; 10], IsbnError> {
    let bytes = s.as_bytes();
    if bytes.len() != 10 {
        return Err(IsbnError::Shape);
    }
    let mut out = [0u32; 10];
    for (i, &b) in bytes.iter().enumerate() {
        out[i] = match b {
            b'0'..=b'9' => u32::from(b - b'0'),
            b'X' | b'x' if i == 9 => 10,
            _ => return Err(IsbnError::Shape),
        };
    }
    Ok(out)
}

fn isbn10_sum(digits: &[u32; 10]) -> u32 {
    digits.iter().zip((1..=10).rev()).map(|(d, w)| d * w).sum()
}

/// Converts a valid ISBN-10 into its `978`-prefixed ISBN-13.
pub fn isbn10_to_isbn13(s: &str) -> Result<Isbn13, IsbnError> {
    let digits = isbn10_digits(s)?;
    if !isbn10_sum(&digits).is_multiple_of(11) {
        return Err(IsbnError::Checksum);
    }
    Isbn13::from_prefix(&format!("978{}", &s[..9]))
}

/// Removes the `="..."` wrapper Goodreads puts around identifier cells.
pub(crate) fn strip_excel_wrapper(cell: &str) -> &str {
    let cell = cell.trim();
    let cell = cell.strip_prefix("=\"").map_or(cell, |rest| rest.strip_suffix('"').unwrap_or(rest));
    cell.trim()
}
