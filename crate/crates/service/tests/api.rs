mod common;

use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use common::{get_json, multipart, offline_app, post_json, send, upload};
use librarylens::ingest::Isbn13;
use librarylens::metadata::fixture::BUNDLED_FIXTURE_CSV;
use librarylens::metadata::{FetchFailure, MetadataProvider, ProviderRecord};
use librarylens::pipeline::Enricher;
use librarylens::shelf::sort_volumes;
use librarylens::visual::{display_color, EncodingMode, PaletteTable};
use librarylens_service::{router, AppState, LibraryStore};
use serde_json::{json, Value};

const FIXTURE: &[u8] = BUNDLED_FIXTURE_CSV.as_bytes();

#[tokio::test]
async fn upload_variants() {
    let (_, app) = offline_app(LibraryStore::in_memory());
    let (status, _, body) = send(&app, multipart(FIXTURE)).await;
    assert_eq!(status, StatusCode::CREATED);
    let v: Value = serde_json::from_slice(&body).unwrap();
    assert_eq!(v["ingest_report"]["accepted"], 135);

    let raw = Request::post("/api/library").header(header::CONTENT_TYPE, "text/csv").body(Body::from(FIXTURE)).unwrap();
    assert_eq!(send(&app, raw).await.0, StatusCode::CREATED);

    let header_only = "Title,Author,ISBN,ISBN13\n";
    let id = upload(&app, header_only.as_bytes()).await;
    let (status, scene) = get_json(&app, &format!("/api/library/{id}/scene")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(scene["placements"].as_array().unwrap().len(), 0);

    let garbage = Request::post("/api/library").body(Body::from(vec![0xffu8, 0xfe, 0x00, 0x13])).unwrap();
    assert_eq!(send(&app, garbage).await.0, StatusCode::BAD_REQUEST);
    let headless = Request::post("/api/library").body(Body::from("just,some\nwords,here\n")).unwrap();
    assert_eq!(send(&app, headless).await.0, StatusCode::BAD_REQUEST);

    let mut big = String::from("Title,Author,ISBN,ISBN13\n");
    for i in 0..10_001 {
        big.push_str(&format!("Book {i},A,,\n"));
    }
    assert_eq!(send(&app, multipart(big.as_bytes())).await.0, StatusCode::PAYLOAD_TOO_LARGE);
}

#[tokio::test]
async fn scene_queries() {
    let (state, app) = offline_app(LibraryStore::in_memory());
    let id = upload(&app, FIXTURE).await;

    let (status, scene) = get_json(&app, &format!("/api/library/{id}/scene?sort=color")).await;
    assert_eq!(status, StatusCode::OK);
    let shared = state.store.get(&id).unwrap();
    let expected = {
        let lib = shared.lock().unwrap();
        sort_volumes(&lib.catalog, &"color".parse().unwrap())
    };
    let order: Vec<String> = serde_json::from_value(scene["order"].clone()).unwrap();
    assert_eq!(order, expected.iter().map(ToString::to_string).collect::<Vec<_>>());

    let (_, scene) = get_json(&app, &format!("/api/library/{id}/scene?encoding=rating")).await;
    assert_eq!(scene["encoding"], "rating");
    assert_eq!(scene["sort"], "color");
    let palettes = PaletteTable::default();
    let lib = shared.lock().unwrap().clone();
    for p in scene["placements"].as_array().unwrap() {
        let isbn = Isbn13::parse(p["isbn13"].as_str().unwrap()).unwrap();
        let want = display_color(lib.catalog.get(&isbn).unwrap(), EncodingMode::Rating, &palettes);
        assert_eq!(p["color"], want.to_string());
    }

    for bad in ["sort=banana", "encoding=sepia", "shelves=0", "width_mm=10", "clearance_mm=abc", "sort=size,size"] {
        let (status, body) = get_json(&app, &format!("/api/library/{id}/scene?{bad}")).await;
        assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{bad}: {body}");
    }
    let (_, after) = get_json(&app, &format!("/api/library/{id}/scene")).await;
    assert_eq!(after["revision"], scene["revision"]);

    let (_, resized) = get_json(&app, &format!("/api/library/{id}/scene?shelves=2&width_mm=500")).await;
    assert_eq!(resized["spec"]["shelf_count"], 2);
    assert_eq!(resized["spec"]["shelf_clearance_mm"], 300.0);
    assert!(!resized["overflow"].as_array().unwrap().is_empty());

    assert_eq!(get_json(&app, "/api/library/nope/scene").await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn moves_and_revisions() {
    let (_, app) = offline_app(LibraryStore::in_memory());
    let id = upload(&app, FIXTURE).await;
    let (_, scene) = get_json(&app, &format!("/api/library/{id}/scene")).await;
    let order = scene["order"].as_array().unwrap().clone();
    let revision = scene["revision"].as_u64().unwrap();

    let uri = format!("/api/library/{id}/move");
    let (status, moved) = post_json(&app, &uri, json!({"from": 10, "to": 2, "revision": revision})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(moved["manual"], true);
    assert_eq!(moved["order"][2], order[10]);
    assert_eq!(moved["revision"], revision + 1);

    let (status, _) = post_json(&app, &uri, json!({"from": 0, "to": 1, "revision": revision})).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (status, _) = post_json(&app, &uri, json!({"from": 0, "to": 135})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let (_, unchanged) = get_json(&app, &format!("/api/library/{id}/scene")).await;
    assert_eq!(unchanged, moved);

    let (_, resorted) = get_json(&app, &format!("/api/library/{id}/scene?sort=authorseries")).await;
    assert_eq!(resorted["manual_discarded"], true);
    assert_eq!(resorted["manual"], false);
    assert_eq!(post_json(&app, "/api/library/nope/move", json!({"from": 0, "to": 0})).await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn concurrent_moves_are_serialized() {
    let (_, app) = offline_app(LibraryStore::in_memory());
    let id = upload(&app, FIXTURE).await;
    let app = Arc::new(app);
    let tasks: Vec<_> = (0..32)
        .map(|i| {
            let app = app.clone();
            let uri = format!("/api/library/{id}/move");
            tokio::spawn(async move { post_json(&app, &uri, json!({"from": i, "to": 134 - i})).await })
        })
        .collect();
    let mut revisions = Vec::new();
    for t in tasks {
        let (status, scene) = t.await.unwrap();
        assert_eq!(status, StatusCode::OK);
        revisions.push(scene["revision"].as_u64().unwrap());
    }
    revisions.sort_unstable();
    assert_eq!(revisions, (2..34).collect::<Vec<_>>());
}

#[tokio::test]
async fn book_details() {
    let (_, app) = offline_app(LibraryStore::in_memory());
    let id = upload(&app, FIXTURE).await;
    let (_, scene) = get_json(&app, &format!("/api/library/{id}/scene?shelves=1")).await;
    let placed = scene["placements"][0]["isbn13"].as_str().unwrap().to_string();
    let overflowed = scene["overflow"][0]["isbn13"].as_str().unwrap().to_string();

    let (status, detail) = get_json(&app, &format!("/api/library/{id}/book/{placed}")).await;
    assert_eq!(status, StatusCode::OK);
    for key in
        ["title", "authors", "height_mm", "spine_thickness_mm", "facets", "spine_color", "display_color", "placement"]
    {
        assert!(!detail[key].is_null(), "missing {key}");
    }
    let (status, detail) = get_json(&app, &format!("/api/library/{id}/book/{overflowed}")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(detail["in_overflow"], true);
    assert!(detail["placement"].is_null());

    assert_eq!(get_json(&app, &format!("/api/library/{id}/book/9780306406157")).await.0, StatusCode::NOT_FOUND);
    assert_eq!(get_json(&app, &format!("/api/library/{id}/book/banana")).await.0, StatusCode::NOT_FOUND);
    assert_eq!(get_json(&app, &format!("/api/library/x/book/{placed}")).await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn svg_export() {
    let (_, app) = offline_app(LibraryStore::in_memory());
    let id = upload(&app, FIXTURE).await;
    let get = |uri: String| Request::get(uri).body(Body::empty()).unwrap();
    let (status, ctype, a) = send(&app, get(format!("/api/library/{id}/export.svg"))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(ctype.as_deref(), Some("image/svg+xml"));
    let (_, _, b) = send(&app, get(format!("/api/library/{id}/export.svg?labels=true"))).await;
    assert_eq!(a, b);

    let (_, _, plain) = send(&app, get(format!("/api/library/{id}/export.svg?labels=false"))).await;
    let text = String::from_utf8(plain).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    let texts: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("text")).collect();
    assert!(!texts.is_empty());
    assert!(texts.iter().all(|t| t.attribute("class").unwrap().split(' ').any(|c| c == "shelf-caption")));

    assert_eq!(
        send(&app, get(format!("/api/library/{id}/export.svg?labels=maybe"))).await.0,
        StatusCode::UNPROCESSABLE_ENTITY
    );
    assert_eq!(send(&app, get("/api/library/nope/export.svg".into())).await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn restart_reloads_identically() {
    let dir = tempfile::tempdir().unwrap();
    let (id, scene, svg) = {
        let (_, app) = offline_app(LibraryStore::open(dir.path()).unwrap());
        let id = upload(&app, FIXTURE).await;
        get_json(&app, &format!("/api/library/{id}/scene?sort=genre,-rating&encoding=genre&shelves=4")).await;
        post_json(&app, &format!("/api/library/{id}/move"), json!({"from": 7, "to": 60})).await;
        let (_, scene) = get_json(&app, &format!("/api/library/{id}/scene")).await;
        let (_, _, svg) =
            send(&app, Request::get(format!("/api/library/{id}/export.svg")).body(Body::empty()).unwrap()).await;
        (id, scene, svg)
    };
    for file in ["records.json", "volumes.json", "state.json"] {
        assert!(dir.path().join(&id).join(file).is_file());
    }
    let (_, app) = offline_app(LibraryStore::open(dir.path()).unwrap());
    let (_, reloaded) = get_json(&app, &format!("/api/library/{id}/scene")).await;
    assert_eq!(reloaded, scene);
    let (_, _, again) =
        send(&app, Request::get(format!("/api/library/{id}/export.svg")).body(Body::empty()).unwrap()).await;
    assert_eq!(again, svg);
}

struct Down;

impl MetadataProvider for Down {
    fn lookup(&self, _: &Isbn13) -> Result<ProviderRecord, FetchFailure> {
        Err(FetchFailure::Network("connection refused".into()))
    }

    fn fetch_cover(&self, _: &str) -> Result<Vec<u8>, FetchFailure> {
        Err(FetchFailure::Network("connection refused".into()))
    }

    fn is_remote(&self) -> bool {
        true
    }
}

#[tokio::test]
async fn provider_outage_is_bad_gateway() {
    let state = AppState::new(LibraryStore::in_memory(), Enricher::new(Box::new(Down)), PaletteTable::default());
    let app = router(state.clone(), None);
    assert_eq!(send(&app, multipart(FIXTURE)).await.0, StatusCode::BAD_GATEWAY);
    assert!(state.store.is_empty());
}

#[tokio::test]
async fn static_files_are_served() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<!doctype html><title>shelf</title>").unwrap();
    let state = AppState::new(LibraryStore::in_memory(), Enricher::offline(), PaletteTable::default());
    let app = router(state, Some(dir.path().to_path_buf()));
    let (status, _, body) = send(&app, Request::get("/index.html").body(Body::empty()).unwrap()).await;
    assert_eq!(status, StatusCode::OK);
    assert!(String::from_utf8(body).unwrap().contains("shelf"));
}
