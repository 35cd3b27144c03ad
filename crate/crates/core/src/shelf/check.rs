use std::collections::HashSet;

use super::{Orientation, SceneLayout, ShelfSpec};
use crate::volume::Catalog;

const EPS: f64 = 1e-9;

/// A broken layout invariant.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LayoutViolation {
    #[error("shelf {shelf} holds {used} mm on a {width} mm shelf")]
    Width { shelf: usize, used: f64, width: f64 },
    #[error("{isbn} overlaps or precedes its left neighbour on shelf {shelf}")]
    Overlap { shelf: usize, isbn: String },
    #[error("{isbn} does not fit its {orientation:?} orientation")]
    Orientation { isbn: String, orientation: Orientation },
    #[error("{isbn} is placed on shelf {shelf} of {count}")]
    ShelfIndex { isbn: String, shelf: usize, count: usize },
    #[error("placements and overflow are not a permutation of the order")]
    NotPermutation,
    #[error("reading the shelves does not reproduce the order")]
    OrderMismatch,
    #[error("{0} is not in the catalog")]
    Unknown(String),
}

/// Checks every structural invariant of `layout` against `catalog` and `spec`.
pub fn validate_layout(layout: &SceneLayout, catalog: &Catalog, spec: &ShelfSpec) -> Result<(), LayoutViolation> {
    let width = spec.shelf_width_mm();
    let clearance = spec.shelf_clearance_mm();

    for p in &layout.placements {
        let isbn = p.isbn13.to_string();
        let v = catalog.get(&p.isbn13).ok_or_else(|| LayoutViolation::Unknown(isbn.clone()))?;
        if p.shelf_index >= spec.shelf_count() {
            return Err(LayoutViolation::ShelfIndex { isbn, shelf: p.shelf_index, count: spec.shelf_count() });
        }
        let fits = match p.orientation {
            Orientation::Upright => v.height_mm <= clearance && p.width_mm == v.spine_thickness_mm,
            Orientation::Flat => v.spine_thickness_mm <= clearance && p.width_mm == v.height_mm,
        };
        if !fits {
            return Err(LayoutViolation::Orientation { isbn, orientation: p.orientation });
        }
    }

    for shelf in 0..spec.shelf_count() {
        let mut used = 0.0;
        let mut right_edge = 0.0;
        for p in layout.shelf(shelf) {
            if p.x_offset_mm + EPS < right_edge {
                return Err(LayoutViolation::Overlap { shelf, isbn: p.isbn13.to_string() });
            }
            right_edge = p.x_offset_mm + p.width_mm;
            used += p.width_mm;
        }
        if used > width + EPS || right_edge > width + EPS {
            return Err(LayoutViolation::Width { shelf, used, width });
        }
    }

    let placed: Vec<_> = layout.placements.iter().map(|p| &p.isbn13).collect();
    let mut seen = HashSet::new();
    let all_unique = placed.iter().copied().chain(&layout.overflow).all(|i| seen.insert(i));
    let order_set: HashSet<_> = layout.order.iter().collect();
    if !all_unique || seen != order_set || seen.len() != layout.order.len() {
        return Err(LayoutViolation::NotPermutation);
    }

    let mut by_shelf: Vec<_> = layout.placements.iter().enumerate().collect();
    by_shelf.sort_by(|(ia, a), (ib, b)| {
        (a.shelf_index, a.x_offset_mm, ia).partial_cmp(&(b.shelf_index, b.x_offset_mm, ib)).expect("finite offsets")
    });
    let overflow: HashSet<_> = layout.overflow.iter().collect();
    let reading = by_shelf.into_iter().map(|(_, p)| &p.isbn13);
    if !reading.eq(layout.order.iter().filter(|i| !overflow.contains(i))) {
        return Err(LayoutViolation::OrderMismatch);
    }
    Ok(())
}
