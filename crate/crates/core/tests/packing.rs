mod common;

use std::time::Instant;

use common::{isbn, volume};
use librarylens::facets::{AgeBand, Genre};
use librarylens::shelf::{
    move_volume, pack, resort, sort_volumes, validate_layout, Orientation, ShelfSpec, SortKey, SortStrategy,
};
use librarylens::{Catalog, Rgb, Volume};
use proptest::prelude::*;

fn catalog_of(volumes: Vec<Volume>) -> (Catalog, Vec<librarylens::Isbn13>) {
    let order = volumes.iter().map(|v| v.isbn13.clone()).collect();
    (volumes.into_iter().collect(), order)
}

#[test]
fn worked_single_shelf() {
    let (catalog, order) = catalog_of(vec![volume(1, 120.0, 200.0), volume(2, 100.0, 200.0), volume(3, 90.0, 200.0)]);
    let spec = ShelfSpec::new(1, 300.0, 250.0).unwrap();
    let layout = pack(&order, &catalog, &spec);
    let placed: Vec<_> = layout.placements.iter().map(|p| (p.isbn13.clone(), p.x_offset_mm)).collect();
    assert_eq!(placed, vec![(isbn(1), 0.0), (isbn(2), 120.0)]);
    assert_eq!(layout.overflow, vec![isbn(3)]);

    let spec = ShelfSpec::new(2, 300.0, 250.0).unwrap();
    let layout = pack(&order, &catalog, &spec);
    assert_eq!(layout.shelf(0).map(|p| p.isbn13.clone()).collect::<Vec<_>>(), vec![isbn(1), isbn(2)]);
    assert_eq!(layout.shelf(1).map(|p| p.isbn13.clone()).collect::<Vec<_>>(), vec![isbn(3)]);
    assert!(layout.overflow.is_empty());
}

#[test]
fn tall_book_lies_flat() {
    let (catalog, order) = catalog_of(vec![volume(1, 40.0, 260.0)]);
    let spec = ShelfSpec::new(1, 300.0, 250.0).unwrap();
    let p = &pack(&order, &catalog, &spec).placements[0];
    assert_eq!((p.orientation, p.width_mm), (Orientation::Flat, 260.0));
}

#[test]
fn worked_moves() {
    let (catalog, order) = catalog_of((1..=4).map(|n| volume(n, 20.0, 200.0)).collect());
    let spec = ShelfSpec::default();
    let layout = pack(&order, &catalog, &spec);
    let moved = move_volume(&layout, 3, 1, &catalog, &spec).unwrap();
    assert_eq!(moved.order, vec![isbn(1), isbn(4), isbn(2), isbn(3)]);
    assert!(moved.manual);
    let same = move_volume(&layout, 2, 2, &catalog, &spec).unwrap();
    assert_eq!(same.order, layout.order);
    assert!(same.manual);
    assert!(move_volume(&layout, 0, 4, &catalog, &spec).is_err());
    assert!(!layout.manual);

    let three = pack(&order[..3], &catalog, &spec);
    assert_eq!(move_volume(&three, 0, 2, &catalog, &spec).unwrap().order, vec![isbn(2), isbn(3), isbn(1)]);
}

#[test]
fn alpha_ignores_articles_and_ties_break_on_isbn() {
    let mut hobbit = volume(1, 20.0, 200.0);
    hobbit.title = "The Hobbit".into();
    let mut dune = volume(2, 20.0, 200.0);
    dune.title = "Dune".into();
    let alpha = SortStrategy::ascending(SortKey::Alpha);
    assert_eq!(sort_volumes([&hobbit, &dune], &alpha), vec![isbn(2), isbn(1)]);

    let a = volume(7, 20.0, 200.0);
    let mut b = volume(3, 20.0, 200.0);
    b.title = a.title.clone();
    assert_eq!(sort_volumes([&a, &b], &alpha), vec![isbn(3), isbn(7)]);
    assert_eq!(sort_volumes([&a], &"size,-rating".parse().unwrap()), vec![isbn(7)]);
}

#[test]
fn unknown_ratings_sort_last_both_ways() {
    let mut rated: Vec<Volume> = (1..=3).map(|n| volume(n, 20.0, 200.0)).collect();
    rated[0].average_rating = Some(4.5);
    rated[1].average_rating = None;
    rated[2].average_rating = Some(2.0);
    for token in ["rating", "-rating"] {
        let order = sort_volumes(&rated, &token.parse().unwrap());
        assert_eq!(order.last(), Some(&isbn(2)), "{token}");
    }
}

#[test]
fn resort_clears_manual() {
    let (catalog, order) = catalog_of((1..=6).map(|n| volume(n, 20.0 + n as f64, 200.0)).collect());
    let spec = ShelfSpec::default();
    let strategy = SortStrategy::ascending(SortKey::Size);
    let moved = move_volume(&pack(&order, &catalog, &spec), 0, 5, &catalog, &spec).unwrap();
    let r = resort(&moved, &strategy, &catalog, &spec);
    assert!(r.discarded_manual);
    assert!(!r.layout.manual);
    assert_eq!(r.layout, pack(&sort_volumes(&catalog, &strategy), &catalog, &spec));
    let again = resort(&r.layout, &strategy, &catalog, &spec);
    assert!(!again.discarded_manual);
    assert_eq!(again.layout, r.layout);
}

fn arbitrary_volume(n: u64) -> impl Strategy<Value = Volume> {
    (
        3.0f64..120.0,
        100.0f64..400.0,
        prop::option::of(0.0f64..5.0),
        prop::array::uniform3(any::<u8>()),
        0usize..Genre::ALL.len(),
        0usize..AgeBand::ALL.len(),
        "[A-Za-z ]{0,12}",
    )
        .prop_map(move |(t, h, rating, rgb, g, a, title)| {
            let mut v = volume(n, (t * 10.0).round() / 10.0, (h * 10.0).round() / 10.0);
            v.average_rating = rating;
            v.spine_color = Rgb(rgb);
            v.facets.genre = Genre::ALL[g];
            v.facets.age_band = AgeBand::ALL[a];
            v.title = title;
            v.author_lf = format!("Writer {}", n % 3);
            v
        })
}

fn library() -> impl Strategy<Value = Vec<Volume>> {
    (0usize..60).prop_flat_map(|len| (0..len as u64).map(arbitrary_volume).collect::<Vec<_>>())
}

fn spec() -> impl Strategy<Value = ShelfSpec> {
    (1usize..6, 50.0f64..1200.0, 100.0f64..450.0).prop_map(|(c, w, h)| ShelfSpec::new(c, w, h).unwrap())
}

fn strategy() -> impl Strategy<Value = SortStrategy> {
    prop::sample::subsequence(SortKey::ALL.to_vec(), 1..=3)
        .prop_flat_map(|keys| {
            let n = keys.len();
            (prop::sample::Index::arbitrary(), Just(keys), prop::collection::vec(any::<bool>(), n))
        })
        .prop_map(|(rot, mut keys, desc)| {
            let k = rot.index(keys.len());
            keys.rotate_left(k);
            let text: Vec<String> =
                keys.iter().zip(desc).map(|(k, d)| format!("{}{}", if d { "-" } else { "" }, k.token())).collect();
            text.join(",").parse().unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn packing_invariants_survive_moves(
        volumes in library(),
        spec in spec(),
        strategy in strategy(),
        moves in prop::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>()), 20),
    ) {
        let catalog: Catalog = volumes.into_iter().collect();
        let order = sort_volumes(&catalog, &strategy);
        let mut layout = pack(&order, &catalog, &spec);
        prop_assert_eq!(validate_layout(&layout, &catalog, &spec), Ok(()));
        prop_assert_eq!(&layout.order, &order);
        for (from, to) in moves {
            if layout.order.is_empty() {
                break;
            }
            let (from, to) = (from.index(layout.order.len()), to.index(layout.order.len()));
            let next = move_volume(&layout, from, to, &catalog, &spec).unwrap();
            let mut expected = layout.order.clone();
            let item = expected.remove(from);
            expected.insert(to, item);
            prop_assert_eq!(&next.order, &expected);
            prop_assert_eq!(validate_layout(&next, &catalog, &spec), Ok(()));
            layout = next;
        }
    }

    #[test]
    fn sorting_is_stable_and_idempotent(volumes in library(), strategy in strategy()) {
        let catalog: Catalog = volumes.into_iter().collect();
        let once = sort_volumes(&catalog, &strategy);
        let resorted: Vec<&Volume> = once.iter().map(|i| catalog.get(i).unwrap()).collect();
        prop_assert_eq!(sort_volumes(resorted.iter().copied(), &strategy), once.clone());
        let reversed: Vec<&Volume> = catalog.iter().collect::<Vec<_>>().into_iter().rev().collect();
        prop_assert_eq!(sort_volumes(reversed, &strategy), once);
    }

    #[test]
    fn strategy_text_round_trips(strategy in strategy()) {
        prop_assert_eq!(strategy.to_string().parse::<SortStrategy>().unwrap(), strategy);
    }
}

#[test]
fn five_thousand_volumes_sort_and_pack_quickly() {
    let volumes: Vec<Volume> = (0..5000u64)
        .map(|n| {
            let mut v = volume(n, 5.0 + (n * 37 % 60) as f64, 150.0 + (n * 13 % 150) as f64);
            v.spine_color = Rgb::new((n * 7) as u8, (n * 11) as u8, (n * 13) as u8);
            v.average_rating = Some((n % 50) as f64 / 10.0);
            v
        })
        .collect();
    let catalog: Catalog = volumes.into_iter().collect();
    let spec = ShelfSpec::new(40, 1200.0, 320.0).unwrap();
    let start = Instant::now();
    for strategy in ["size", "color", "alpha", "authorseries", "-rating", "genre,age,alpha"] {
        let order = sort_volumes(&catalog, &strategy.parse().unwrap());
        let layout = pack(&order, &catalog, &spec);
        assert_eq!(layout.placements.len() + layout.overflow.len(), 5000);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 6.0, "six sort+pack rounds took {elapsed:?}");
}
