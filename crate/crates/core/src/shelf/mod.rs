//! Ordering, packing, and manual re-ordering of volumes on shelves.

mod check;
mod pack;
mod sort;

use serde::{Deserialize, Serialize};

use crate::ingest::Isbn13;

pub use check::{validate_layout, LayoutViolation};
pub use pack::{move_volume, pack, resort, Resorted};
pub use sort::{alpha_key, color_key, sort_volumes, Direction, SortKey, SortStrategy, SortTerm, StrategyError};

pub const MIN_SHELF_WIDTH_MM: f64 = 50.0;
pub const MIN_SHELF_CLEARANCE_MM: f64 = 100.0;

/// Bookcase geometry: `shelf_count` identical shelves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "UncheckedSpec")]
pub struct ShelfSpec {
    shelf_count: usize,
    shelf_width_mm: f64,
    shelf_clearance_mm: f64,
}

#[derive(Deserialize)]
struct UncheckedSpec {
    shelf_count: usize,
    shelf_width_mm: f64,
    shelf_clearance_mm: f64,
}

impl TryFrom<UncheckedSpec> for ShelfSpec {
    type Error = ShelfError;

    fn try_from(u: UncheckedSpec) -> Result<Self, Self::Error> {
        ShelfSpec::new(u.shelf_count, u.shelf_width_mm, u.shelf_clearance_mm)
    }
}

impl ShelfSpec {
    pub fn new(shelf_count: usize, shelf_width_mm: f64, shelf_clearance_mm: f64) -> Result<Self, ShelfError> {
        if shelf_count < 1 {
            return Err(ShelfError::InvalidSpec("shelf count must be at least 1".into()));
        }
        if !(shelf_width_mm.is_finite() && shelf_width_mm >= MIN_SHELF_WIDTH_MM) {
            return Err(ShelfError::InvalidSpec(format!("shelf width must be at least {MIN_SHELF_WIDTH_MM} mm")));
        }
        if !(shelf_clearance_mm.is_finite() && shelf_clearance_mm >= MIN_SHELF_CLEARANCE_MM) {
            return Err(ShelfError::InvalidSpec(format!(
                "shelf clearance must be at least {MIN_SHELF_CLEARANCE_MM} mm"
            )));
        }
        Ok(ShelfSpec { shelf_count, shelf_width_mm, shelf_clearance_mm })
    }

    pub fn shelf_count(&self) -> usize {
        self.shelf_count
    }

    pub fn shelf_width_mm(&self) -> f64 {
        self.shelf_width_mm
    }

    pub fn shelf_clearance_mm(&self) -> f64 {
        self.shelf_clearance_mm
    }
}

impl Default for ShelfSpec {
    /// Five shelves, 760 mm wide, 300 mm of clearance.
    fn default() -> Self {
        ShelfSpec { shelf_count: 5, shelf_width_mm: 760.0, shelf_clearance_mm: 300.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Upright,
    /// Lying on its side: occupies its height in width, its thickness in height.
    Flat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub isbn13: Isbn13,
    pub shelf_index: usize,
    pub x_offset_mm: f64,
    pub orientation: Orientation,
    /// Horizontal space taken on the shelf.
    pub width_mm: f64,
}

/// The packed arrangement of one library.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneLayout {
    /// Flow order; placements and overflow both follow it.
    pub order: Vec<Isbn13>,
    pub placements: Vec<Placement>,
    pub overflow: Vec<Isbn13>,
    /// Set once a manual move has been applied since the last sort.
    pub manual: bool,
}

impl SceneLayout {
    pub fn empty() -> Self {
        SceneLayout { order: Vec::new(), placements: Vec::new(), overflow: Vec::new(), manual: false }
    }

    pub fn placement(&self, isbn: &Isbn13) -> Option<&Placement> {
        self.placements.iter().find(|p| &p.isbn13 == isbn)
    }

    pub fn shelf(&self, index: usize) -> impl Iterator<Item = &Placement> {
        self.placements.iter().filter(move |p| p.shelf_index == index)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ShelfError {
    #[error("invalid shelf spec: {0}")]
    InvalidSpec(String),
    #[error("index {index} out of bounds for {len} volumes")]
    IndexOutOfBounds { index: usize, len: usize },
}
