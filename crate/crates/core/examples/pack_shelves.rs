// Sorting the fixture library, packing it onto a bookcase, and applying a
// drag-and-drop style move.
//
// ```text
// cargo run -p librarylens --example pack_shelves -- "genre,-rating" 4 700 260
// ```

use librarylens::metadata::fixture::BUNDLED_FIXTURE_CSV;
use librarylens::pipeline::Enricher;
use librarylens::shelf::{
    move_volume, pack, resort, sort_volumes, validate_layout, SceneLayout, ShelfSpec, SortStrategy,
};

pub fn run_example(strategy: &SortStrategy, spec: &ShelfSpec) -> Result<SceneLayout, Box<dyn std::error::Error>> {
    let library = Enricher::offline().build_library(BUNDLED_FIXTURE_CSV.as_bytes())?;
    let catalog = &library.catalog;
    let layout = pack(&sort_volumes(catalog, strategy), catalog, spec);
    validate_layout(&layout, catalog, spec)?;
    for shelf in 0..spec.shelf_count() {
        let used: f64 = layout.shelf(shelf).map(|p| p.width_mm).sum();
        let count = layout.shelf(shelf).count();
        println!("shelf {}: {count:>3} volumes, {used:>6.1} / {} mm", shelf + 1, spec.shelf_width_mm());
    }
    println!("overflow: {}", layout.overflow.len());

    let last = layout.order.len().saturating_sub(1);
    let moved = move_volume(&layout, last, 0, catalog, spec)?;
    validate_layout(&moved, catalog, spec)?;
    println!("moved {} to the front (manual = {})", moved.order[0], moved.manual);
    let restored = resort(&moved, strategy, catalog, spec);
    println!("re-sort discarded manual moves: {}", restored.discarded_manual);
    Ok(moved)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let strategy: SortStrategy = args.first().map_or("genre,-rating", String::as_str).parse()?;
    let count = args.get(1).map_or(Ok(5), |s| s.parse())?;
    let width = args.get(2).map_or(Ok(760.0), |s| s.parse())?;
    let clearance = args.get(3).map_or(Ok(300.0), |s| s.parse())?;
    run_example(&strategy, &ShelfSpec::new(count, width, clearance)?)?;
    Ok(())
}
