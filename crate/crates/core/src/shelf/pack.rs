use super::sort::{sort_volumes, SortStrategy};
use super::{Orientation, Placement, SceneLayout, ShelfError, ShelfSpec};
use crate::ingest::Isbn13;
use crate::volume::Catalog;

/// Greedy left-to-right fill of `order` onto the shelves of `spec`.
///
/// Each volume stands upright when its height clears the shelf, otherwise lies
/// flat when its thickness does. If the current shelf lacks the width the fill
/// moves on to the next shelf; it never goes back. Volumes that fit nowhere
/// land in `overflow`, in order. ISBNs missing from `catalog` are dropped.
pub fn pack(order: &[Isbn13], catalog: &Catalog, spec: &ShelfSpec) -> SceneLayout {
    let width = spec.shelf_width_mm();
    let clearance = spec.shelf_clearance_mm();
    let mut layout = SceneLayout::empty();
    let mut shelf = 0usize;
    let mut used = 0.0f64;

    for isbn in order {
        let Some(volume) = catalog.get(isbn) else { continue };
        layout.order.push(isbn.clone());

        let fit = if volume.height_mm <= clearance {
            Some((Orientation::Upright, volume.spine_thickness_mm))
        } else if volume.spine_thickness_mm <= clearance {
            Some((Orientation::Flat, volume.height_mm))
        } else {
            None
        };
        let Some((orientation, occupied)) = fit.filter(|(_, w)| *w <= width) else {
            layout.overflow.push(isbn.clone());
            continue;
        };
        if used + occupied > width {
            if shelf + 1 < spec.shelf_count() {
                shelf += 1;
                used = 0.0;
            } else {
                layout.overflow.push(isbn.clone());
                continue;
            }
        }
        layout.placements.push(Placement {
            isbn13: isbn.clone(),
            shelf_index: shelf,
            x_offset_mm: used,
            orientation,
            width_mm: occupied,
        });
        used += occupied;
    }
    layout
}

/// Moves the volume at `from` so it ends up at `to` (an index into the list
/// after removal) and re-packs. The input layout is left untouched.
pub fn move_volume(
    layout: &SceneLayout,
    from: usize,
    to: usize,
    catalog: &Catalog,
    spec: &ShelfSpec,
) -> Result<SceneLayout, ShelfError> {
    let len = layout.order.len();
    if from >= len {
        return Err(ShelfError::IndexOutOfBounds { index: from, len });
    }
    if to >= len {
        return Err(ShelfError::IndexOutOfBounds { index: to, len });
    }
    let mut order = layout.order.clone();
    let item = order.remove(from);
    order.insert(to, item);
    let mut moved = pack(&order, catalog, spec);
    moved.manual = true;
    Ok(moved)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resorted {
    pub layout: SceneLayout,
    /// True when the input carried manual moves that the re-sort threw away.
    pub discarded_manual: bool,
}

/// Sorts from scratch and re-packs, dropping any manual order.
pub fn resort(layout: &SceneLayout, strategy: &SortStrategy, catalog: &Catalog, spec: &ShelfSpec) -> Resorted {
    let order = sort_volumes(catalog, strategy);
    Resorted { layout: pack(&order, catalog, spec), discarded_manual: layout.manual }
}
