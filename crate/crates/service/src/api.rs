use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, FromRequest, Multipart, Path, Query, Request, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use librarylens::ingest::{parse_goodreads_csv, IngestReport};
use librarylens::pipeline::{Enricher, PipelineError};
use librarylens::shelf::{ShelfSpec, SortStrategy};
use librarylens::visual::{EncodingMode, PaletteTable};
use librarylens::Isbn13;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::services::ServeDir;

use crate::state::{LibraryState, StateError, ViewUpdate};
use crate::store::{LibraryStore, SharedLibrary};

/// Upload bodies larger than this are refused before parsing.
pub const MAX_UPLOAD_BYTES: usize = 32 * 1024 * 1024;
/// Uploads with more data rows than this get 413.
pub const DEFAULT_ROW_CAP: usize = 10_000;

#[derive(Debug, thiserror::Error)]
pub enum ApiError {
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    BadRequest(String),
    #[error("{0}")]
    Unprocessable(String),
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    TooLarge(String),
    #[error("{0}")]
    BadGateway(String),
    #[error("{0}")]
    Internal(String),
}

impl ApiError {
    fn status(&self) -> StatusCode {
        match self {
            ApiError::NotFound(_) => StatusCode::NOT_FOUND,
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::Unprocessable(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ApiError::Conflict(_) => StatusCode::CONFLICT,
            ApiError::TooLarge(_) => StatusCode::PAYLOAD_TOO_LARGE,
            ApiError::BadGateway(_) => StatusCode::BAD_GATEWAY,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status(), Json(json!({ "error": self.to_string() }))).into_response()
    }
}

impl From<PipelineError> for ApiError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Parse(_) => ApiError::BadRequest(e.to_string()),
            PipelineError::ProviderUnavailable(_) => ApiError::BadGateway(e.to_string()),
            PipelineError::Config(_) | PipelineError::Cache(_) => ApiError::Internal(e.to_string()),
        }
    }
}

impl From<StateError> for ApiError {
    fn from(e: StateError) -> Self {
        match e {
            StateError::StaleRevision { .. } => ApiError::Conflict(e.to_string()),
            StateError::Shelf(_) => ApiError::Unprocessable(e.to_string()),
        }
    }
}

impl From<crate::state::PersistError> for ApiError {
    fn from(e: crate::state::PersistError) -> Self {
        ApiError::Internal(e.to_string())
    }
}

/// Shared handler state.
#[derive(Clone)]
pub struct AppState {
    pub store: Arc<LibraryStore>,
    pub enricher: Arc<Enricher>,
    pub palettes: Arc<PaletteTable>,
    pub row_cap: usize,
}

impl AppState {
    pub fn new(store: LibraryStore, enricher: Enricher, palettes: PaletteTable) -> Self {
        AppState {
            store: Arc::new(store),
            enricher: Arc::new(enricher),
            palettes: Arc::new(palettes),
            row_cap: DEFAULT_ROW_CAP,
        }
    }

    fn library(&self, id: &str) -> Result<SharedLibrary, ApiError> {
        self.store.get(id).ok_or_else(|| ApiError::NotFound(format!("no library {id:?}")))
    }
}

/// The JSON API, plus static files from `static_dir` for every other path.
pub fn router(state: AppState, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/library", post(upload))
        .route("/api/library/{id}/scene", get(scene))
        .route("/api/library/{id}/move", post(move_book))
        .route("/api/library/{id}/book/{isbn13}", get(book))
        .route("/api/library/{id}/export.svg", get(export_svg))
        .layer(DefaultBodyLimit::max(MAX_UPLOAD_BYTES))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct UploadResponse {
    pub library_id: String,
    pub ingest_report: IngestReport,
}

async fn read_upload(req: Request) -> Result<Bytes, ApiError> {
    let is_multipart = req
        .headers()
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.starts_with("multipart/form-data"));
    if !is_multipart {
        return axum::body::to_bytes(req.into_body(), MAX_UPLOAD_BYTES)
            .await
            .map_err(|e| ApiError::TooLarge(e.to_string()));
    }
    let mut multipart = Multipart::from_request(req, &()).await.map_err(|e| ApiError::BadRequest(e.to_string()))?;
    let mut first = None;
    while let Some(field) = multipart.next_field().await.map_err(|e| ApiError::BadRequest(e.to_string()))? {
        let is_file = field.file_name().is_some() || matches!(field.name(), Some("file" | "csv"));
        let bytes = field.bytes().await.map_err(|e| ApiError::BadRequest(e.to_string()))?;
        if is_file {
            return Ok(bytes);
        }
        first.get_or_insert(bytes);
    }
    first.ok_or_else(|| ApiError::BadRequest("multipart body has no parts".into()))
}

async fn upload(State(app): State<AppState>, req: Request) -> Result<(StatusCode, Json<UploadResponse>), ApiError> {
    let body = read_upload(req).await?;
    let response = tokio::task::spawn_blocking(move || -> Result<UploadResponse, ApiError> {
        let (records, report) = parse_goodreads_csv(&body).map_err(|e| ApiError::BadRequest(e.to_string()))?;
        if report.row_count() > app.row_cap {
            return Err(ApiError::TooLarge(format!(
                "{} rows exceeds the limit of {}",
                report.row_count(),
                app.row_cap
            )));
        }
        let library = app.enricher.enrich(records, report)?;
        let id = uuid::Uuid::new_v4().simple().to_string();
        let state = LibraryState::new(id.clone(), library);
        let ingest_report = state.report.clone();
        app.store.insert(state)?;
        log::info!("library {id}: {} accepted, {} rejected", ingest_report.accepted, ingest_report.rejected.len());
        Ok(UploadResponse { library_id: id, ingest_report })
    })
    .await
    .map_err(|e| ApiError::Internal(e.to_string()))??;
    Ok((StatusCode::CREATED, Json(response)))
}

#[derive(Debug, Default, Deserialize)]
pub struct SceneQuery {
    pub sort: Option<String>,
    pub encoding: Option<String>,
    pub shelves: Option<String>,
    pub width_mm: Option<String>,
    pub clearance_mm: Option<String>,
}

fn parse_field<T: std::str::FromStr>(name: &str, raw: &str) -> Result<T, ApiError>
where
    T::Err: std::fmt::Display,
{
    raw.trim().parse().map_err(|e| ApiError::Unprocessable(format!("{name}: {e}")))
}

impl SceneQuery {
    /// Validates the query against the current spec; every error is a 422.
    pub fn to_update(&self, current: &ShelfSpec) -> Result<ViewUpdate, ApiError> {
        let strategy = self.sort.as_deref().map(|s| parse_field::<SortStrategy>("sort", s)).transpose()?;
        let mode = self.encoding.as_deref().map(|s| parse_field::<EncodingMode>("encoding", s)).transpose()?;
        let spec = if self.shelves.is_some() || self.width_mm.is_some() || self.clearance_mm.is_some() {
            let count = self.shelves.as_deref().map(|s| parse_field::<usize>("shelves", s)).transpose()?;
            let width = self.width_mm.as_deref().map(|s| parse_field::<f64>("width_mm", s)).transpose()?;
            let clearance = self.clearance_mm.as_deref().map(|s| parse_field::<f64>("clearance_mm", s)).transpose()?;
            let spec = ShelfSpec::new(
                count.unwrap_or(current.shelf_count()),
                width.unwrap_or(current.shelf_width_mm()),
                clearance.unwrap_or(current.shelf_clearance_mm()),
            )
            .map_err(|e| ApiError::Unprocessable(e.to_string()))?;
            Some(spec)
        } else {
            None
        };
        Ok(ViewUpdate { strategy, mode, spec })
    }
}

async fn scene(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Query(query): Query<SceneQuery>,
) -> Result<Json<crate::state::SceneResponse>, ApiError> {
    let library = app.library(&id)?;
    let mut state = library.lock().unwrap_or_else(|e| e.into_inner());
    let update = query.to_update(&state.spec)?;
    let revision = state.revision;
    let discarded = state.apply_view(&update);
    if state.revision != revision {
        app.store.save_view(&state)?;
    }
    Ok(Json(state.scene(&app.palettes, discarded)))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MoveRequest {
    pub from: usize,
    pub to: usize,
    #[serde(default)]
    pub revision: Option<u64>,
}

async fn move_book(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Json(request): Json<MoveRequest>,
) -> Result<Json<crate::state::SceneResponse>, ApiError> {
    let library = app.library(&id)?;
    let mut state = library.lock().unwrap_or_else(|e| e.into_inner());
    state.apply_move(request.from, request.to, request.revision)?;
    app.store.save_view(&state)?;
    Ok(Json(state.scene(&app.palettes, false)))
}

async fn book(
    State(app): State<AppState>,
    Path((id, isbn)): Path<(String, String)>,
) -> Result<Json<crate::state::BookDetail>, ApiError> {
    let library = app.library(&id)?;
    let state = library.lock().unwrap_or_else(|e| e.into_inner());
    Isbn13::parse(&isbn)
        .ok()
        .and_then(|isbn| state.detail(&isbn, &app.palettes))
        .map(Json)
        .ok_or_else(|| ApiError::NotFound(format!("no volume {isbn:?} in library {id:?}")))
}

#[derive(Debug, Default, Deserialize)]
pub struct ExportQuery {
    pub labels: Option<String>,
}

async fn export_svg(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Query(query): Query<ExportQuery>,
) -> Result<Response, ApiError> {
    let labels = match query.labels.as_deref().map(str::trim) {
        None | Some("true" | "1" | "yes") => true,
        Some("false" | "0" | "no") => false,
        Some(other) => return Err(ApiError::Unprocessable(format!("labels: expected true or false, got {other:?}"))),
    };
    let library = app.library(&id)?;
    let svg = library.lock().unwrap_or_else(|e| e.into_inner()).export_svg(&app.palettes, labels);
    Ok(([(header::CONTENT_TYPE, "image/svg+xml")], svg).into_response())
}
