//! HTTP service and command line front-end for the librarylens engine.
//!
//! | method | path | purpose |
//! |---|---|---|
//! | POST | `/api/library` | upload a Goodreads CSV (multipart or raw body) |
//! | GET | `/api/library/{id}/scene` | current scene; `sort`, `encoding`, `shelves`, `width_mm`, `clearance_mm` update it |
//! | POST | `/api/library/{id}/move` | `{from, to, revision?}` drag-and-drop move |
//! | GET | `/api/library/{id}/book/{isbn13}` | full detail for the hover panel |
//! | GET | `/api/library/{id}/export.svg` | SVG blueprint, `labels=false` to omit titles |
//!
//! Every library lives in its own directory under the data root as
//! `records.json`, `volumes.json`, and `state.json`.

pub mod api;
pub mod state;
pub mod store;

pub use api::{router, AppState};
pub use state::{LibraryState, SceneResponse, ViewUpdate};
pub use store::LibraryStore;
