// Rendering labeled SVG blueprints of the fixture library under every color encoding.
//
// ```text
// cargo run -p librarylens --example blueprint_svg -- out-dir
// ```

use std::path::Path;

use librarylens::metadata::fixture::BUNDLED_FIXTURE_CSV;
use librarylens::pipeline::Enricher;
use librarylens::shelf::{pack, sort_volumes, ShelfSpec};
use librarylens::visual::{render_svg, EncodingMode, PaletteTable};

pub fn run_example(out_dir: Option<&Path>) -> Result<Vec<(EncodingMode, String)>, Box<dyn std::error::Error>> {
    let library = Enricher::offline().build_library(BUNDLED_FIXTURE_CSV.as_bytes())?;
    let spec = ShelfSpec::default();
    let layout = pack(&sort_volumes(&library.catalog, &"color".parse()?), &library.catalog, &spec);
    let palettes = PaletteTable::from_env()?;
    let mut documents = Vec::new();
    for mode in EncodingMode::ALL {
        let svg = render_svg(&layout, &library.catalog, &spec, mode, &palettes, true);
        if let Some(dir) = out_dir {
            let path = dir.join(format!("blueprint-{mode}.svg"));
            std::fs::write(&path, &svg)?;
            println!("wrote {} ({} bytes)", path.display(), svg.len());
        }
        documents.push((mode, svg));
    }
    Ok(documents)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| ".".into());
    std::fs::create_dir_all(&dir)?;
    run_example(Some(Path::new(&dir)))?;
    Ok(())
}
