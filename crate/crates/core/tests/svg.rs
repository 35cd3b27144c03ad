mod common;

use common::volume;
use librarylens::metadata::fixture::BUNDLED_FIXTURE_CSV;
use librarylens::pipeline::Enricher;
use librarylens::shelf::{pack, sort_volumes, SceneLayout, ShelfSpec};
use librarylens::visual::{display_color, rating_color, rating_parameter, render_svg, EncodingMode, PaletteTable};
use librarylens::{Catalog, Rgb};
use proptest::prelude::*;

fn attr(node: roxmltree::Node, name: &str) -> f64 {
    node.attribute(name).unwrap().parse().unwrap()
}

#[test]
fn single_book_geometry() {
    let catalog: Catalog = [volume(1, 20.0, 210.0)].into_iter().collect();
    let spec = ShelfSpec::new(1, 300.0, 250.0).unwrap();
    let order: Vec<_> = catalog.isbns().cloned().collect();
    let svg = render_svg(
        &pack(&order, &catalog, &spec),
        &catalog,
        &spec,
        EncodingMode::Original,
        &PaletteTable::default(),
        false,
    );
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let rects: Vec<_> = doc.descendants().filter(|n| n.attribute("class") == Some("volume")).collect();
    assert_eq!(rects.len(), 1);
    let r = rects[0];
    assert_eq!((attr(r, "x"), attr(r, "y"), attr(r, "width"), attr(r, "height")), (0.0, 40.0, 20.0, 210.0));
}

#[test]
fn empty_layout_draws_only_outlines() {
    let spec = ShelfSpec::default();
    let svg =
        render_svg(&SceneLayout::empty(), &Catalog::new(), &spec, EncodingMode::Genre, &PaletteTable::default(), true);
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(doc.descendants().filter(|n| n.attribute("class") == Some("shelf-outline")).count(), 5);
    assert_eq!(doc.descendants().filter(|n| n.attribute("class") == Some("volume")).count(), 0);
}

#[test]
fn fixture_blueprint_parses_back() {
    let library = Enricher::offline().build_library(BUNDLED_FIXTURE_CSV.as_bytes()).unwrap();
    let catalog = &library.catalog;
    let spec = ShelfSpec::new(4, 700.0, 260.0).unwrap();
    let layout = pack(&sort_volumes(catalog, &"genre,alpha".parse().unwrap()), catalog, &spec);
    assert!(!layout.overflow.is_empty());
    let palettes = PaletteTable::default();

    for labels in [true, false] {
        let svg = render_svg(&layout, catalog, &spec, EncodingMode::Genre, &palettes, labels);
        assert_eq!(svg, render_svg(&layout, catalog, &spec, EncodingMode::Genre, &palettes, labels));
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let rects: Vec<_> = doc.descendants().filter(|n| n.attribute("class") == Some("volume")).collect();
        assert_eq!(rects.len(), layout.placements.len() + layout.overflow.len());

        for shelf in 0..spec.shelf_count() {
            let mut spans: Vec<(f64, f64)> = rects
                .iter()
                .filter(|r| r.attribute("data-shelf") == Some(shelf.to_string().as_str()))
                .map(|r| (attr(*r, "x"), attr(*r, "x") + attr(*r, "width")))
                .collect();
            spans.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert!(spans.windows(2).all(|w| w[0].1 <= w[1].0 + 1e-6), "overlap on shelf {shelf}");
            assert!(spans.last().is_none_or(|s| s.1 <= spec.shelf_width_mm() + 0.01));
        }

        let texts: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("text")).collect();
        let labels_found = texts.iter().filter(|t| t.attribute("class") == Some("volume-label")).count();
        if labels {
            assert_eq!(labels_found, rects.len());
        } else {
            assert!(texts
                .iter()
                .all(|t| t.attribute("class").is_some_and(|c| c.split(' ').any(|c| c == "shelf-caption"))));
        }
        assert!(texts.iter().any(|t| t.text().is_some_and(|s| s.starts_with("overflow ("))));
    }

    for mode in EncodingMode::ALL {
        for v in catalog.iter() {
            let _ = display_color(v, mode, &palettes);
        }
    }
    assert!(catalog.iter().all(|v| display_color(v, EncodingMode::Original, &palettes) == v.spine_color));
}

#[test]
fn ramp_endpoints_are_exact() {
    let p = PaletteTable::default();
    assert_eq!(rating_color(Some(1.0), &p), p.rating_ramp.low);
    assert_eq!(rating_color(Some(5.0), &p), p.rating_ramp.high);
    assert_eq!(rating_color(None, &p), Rgb::new(128, 128, 128));
}

proptest! {
    #[test]
    fn ramp_parameter_is_strictly_increasing(a in 1.0f64..5.0, b in 1.0f64..5.0) {
        prop_assume!(a != b);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(rating_parameter(lo) < rating_parameter(hi));
    }
}
