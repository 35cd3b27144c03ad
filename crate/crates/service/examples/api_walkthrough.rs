// The HTTP API driven in-process: upload the fixture export, try several
// sort strategies, drag one volume, inspect it, and export the blueprint.
//
// ```text
// cargo run -p librarylens-service --example api_walkthrough -- shelf.svg
// ```

use std::path::Path;

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use librarylens::metadata::fixture::BUNDLED_FIXTURE_CSV;
use librarylens::pipeline::Enricher;
use librarylens::visual::PaletteTable;
use librarylens_service::{router, AppState, LibraryStore};
use serde_json::{json, Value};
use tower::ServiceExt;

type Failure = Box<dyn std::error::Error>;

async fn call(app: &Router, req: Request<Body>) -> Result<(StatusCode, Vec<u8>), Failure> {
    let resp = app.clone().oneshot(req).await?;
    let status = resp.status();
    Ok((status, resp.into_body().collect().await?.to_bytes().to_vec()))
}

async fn call_json(app: &Router, req: Request<Body>) -> Result<Value, Failure> {
    let (status, body) = call(app, req).await?;
    let value: Value = serde_json::from_slice(&body)?;
    if !status.is_success() {
        return Err(format!("{status}: {}", value["error"]).into());
    }
    Ok(value)
}

pub async fn run_example(out: Option<&Path>) -> Result<Value, Failure> {
    let state = AppState::new(LibraryStore::in_memory(), Enricher::offline(), PaletteTable::default());
    let app = router(state, None);

    let upload =
        Request::post("/api/library").header(header::CONTENT_TYPE, "text/csv").body(Body::from(BUNDLED_FIXTURE_CSV))?;
    let created = call_json(&app, upload).await?;
    let id = created["library_id"].as_str().ok_or("no library id")?.to_string();
    println!("library {id}: {} rows accepted", created["ingest_report"]["accepted"]);

    for (sort, encoding) in
        [("color", "original"), ("genre,-rating", "genre"), ("age,alpha", "age"), ("-rating", "rating")]
    {
        let uri = format!("/api/library/{id}/scene?sort={sort}&encoding={encoding}");
        let scene = call_json(&app, Request::get(uri).body(Body::empty())?).await?;
        println!(
            "sort {sort:<14} encoding {encoding:<9} revision {} placed {} overflow {}",
            scene["revision"],
            scene["placements"].as_array().map_or(0, Vec::len),
            scene["overflow"].as_array().map_or(0, Vec::len)
        );
    }

    let scene = call_json(&app, Request::get(format!("/api/library/{id}/scene")).body(Body::empty())?).await?;
    let moved = Request::post(format!("/api/library/{id}/move"))
        .header(header::CONTENT_TYPE, "application/json")
        .body(Body::from(json!({"from": 5, "to": 0, "revision": scene["revision"]}).to_string()))?;
    let scene = call_json(&app, moved).await?;
    let first = scene["order"][0].as_str().ok_or("empty order")?.to_string();
    println!("moved {first} to the front, manual = {}", scene["manual"]);

    let detail = call_json(&app, Request::get(format!("/api/library/{id}/book/{first}")).body(Body::empty())?).await?;
    println!(
        "{} by {}: {} / {}, {} mm tall, spine {}",
        detail["title"],
        detail["authors"][0],
        detail["facets"]["genre"],
        detail["facets"]["age_band"],
        detail["height_mm"],
        detail["spine_color"]
    );

    let (status, svg) = call(&app, Request::get(format!("/api/library/{id}/export.svg")).body(Body::empty())?).await?;
    println!("export: {status}, {} bytes", svg.len());
    if let Some(path) = out {
        std::fs::write(path, &svg)?;
        println!("wrote {}", path.display());
    }
    Ok(scene)
}

#[tokio::main]
async fn main() -> Result<(), Failure> {
    let out = std::env::args().nth(1);
    run_example(out.as_deref().map(Path::new)).await?;
    Ok(())
}
