use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use librarylens::ingest::{IngestReport, RawRecord};
use librarylens::metadata::FetchFailure;
use librarylens::pipeline::Library;
use librarylens::shelf::{move_volume, pack, resort, Placement, SceneLayout, ShelfError, ShelfSpec, SortStrategy};
use librarylens::visual::{display_color, render_svg, EncodingMode, PaletteTable};
use librarylens::{Catalog, Isbn13, Rgb, Volume};
use serde::{Deserialize, Serialize};

const RECORDS_FILE: &str = "records.json";
const VOLUMES_FILE: &str = "volumes.json";
const STATE_FILE: &str = "state.json";

#[derive(Debug, thiserror::Error)]
pub enum StateError {
    #[error("stale revision {given}; current revision is {current}")]
    StaleRevision { given: u64, current: u64 },
    #[error(transparent)]
    Shelf(#[from] ShelfError),
}

#[derive(Debug, thiserror::Error)]
pub enum PersistError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
}

/// One uploaded library and its current view.
#[derive(Debug, Clone, PartialEq)]
pub struct LibraryState {
    pub library_id: String,
    pub records: Vec<RawRecord>,
    pub report: IngestReport,
    pub catalog: Catalog,
    pub fetch_failures: BTreeMap<Isbn13, FetchFailure>,
    pub layout: SceneLayout,
    pub strategy: SortStrategy,
    pub mode: EncodingMode,
    pub spec: ShelfSpec,
    pub revision: u64,
}

/// Requested view changes; `None` keeps the current value.
#[derive(Debug, Clone, Default)]
pub struct ViewUpdate {
    pub strategy: Option<SortStrategy>,
    pub mode: Option<EncodingMode>,
    pub spec: Option<ShelfSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenePlacement {
    pub isbn13: Isbn13,
    pub title: String,
    pub shelf_index: usize,
    pub x_offset_mm: f64,
    /// Horizontal space taken on the shelf.
    pub width_mm: f64,
    /// Drawn height above the baseline.
    pub height_mm: f64,
    pub orientation: librarylens::shelf::Orientation,
    pub color: Rgb,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverflowEntry {
    pub isbn13: Isbn13,
    pub title: String,
    pub height_mm: f64,
    pub spine_thickness_mm: f64,
    pub color: Rgb,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneResponse {
    pub library_id: String,
    pub revision: u64,
    pub sort: SortStrategy,
    pub encoding: EncodingMode,
    pub spec: ShelfSpec,
    pub manual: bool,
    /// Set when this request's re-sort threw away manual moves.
    pub manual_discarded: bool,
    pub order: Vec<Isbn13>,
    pub placements: Vec<ScenePlacement>,
    pub overflow: Vec<OverflowEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BookDetail {
    #[serde(flatten)]
    pub volume: Volume,
    pub display_color: Rgb,
    pub placement: Option<Placement>,
    pub in_overflow: bool,
    pub fetch_failure: Option<FetchFailure>,
}

#[derive(Serialize, Deserialize)]
struct RecordsFile {
    records: Vec<RawRecord>,
    report: IngestReport,
}

#[derive(Serialize, Deserialize)]
struct VolumesFile {
    catalog: Catalog,
    fetch_failures: BTreeMap<Isbn13, FetchFailure>,
}

#[derive(Serialize, Deserialize)]
struct StateFile {
    library_id: String,
    revision: u64,
    strategy: SortStrategy,
    mode: EncodingMode,
    spec: ShelfSpec,
    manual: bool,
    order: Vec<Isbn13>,
}

impl LibraryState {
    /// Default sort, default shelves, original colors.
    pub fn new(library_id: String, library: Library) -> Self {
        let strategy = SortStrategy::default();
        let spec = ShelfSpec::default();
        let order = librarylens::shelf::sort_volumes(&library.catalog, &strategy);
        let layout = pack(&order, &library.catalog, &spec);
        LibraryState {
            library_id,
            records: library.records,
            report: library.report,
            catalog: library.catalog,
            fetch_failures: library.fetch_failures,
            layout,
            strategy,
            mode: EncodingMode::default(),
            spec,
            revision: 1,
        }
    }

    /// Applies `update` and returns whether manual moves were discarded.
    ///
    /// A supplied sort re-sorts from scratch. A new shelf spec alone re-packs
    /// the current order, manual moves included. The revision advances only
    /// when something changed.
    pub fn apply_view(&mut self, update: &ViewUpdate) -> bool {
        let before = (self.layout.clone(), self.strategy.clone(), self.mode, self.spec);
        if let Some(spec) = update.spec {
            self.spec = spec;
        }
        if let Some(mode) = update.mode {
            self.mode = mode;
        }
        let mut discarded = false;
        if let Some(strategy) = &update.strategy {
            self.strategy = strategy.clone();
            let resorted = resort(&self.layout, &self.strategy, &self.catalog, &self.spec);
            discarded = resorted.discarded_manual;
            self.layout = resorted.layout;
        } else if update.spec.is_some() {
            let manual = self.layout.manual;
            self.layout = pack(&self.layout.order, &self.catalog, &self.spec);
            self.layout.manual = manual;
        }
        if before != (self.layout.clone(), self.strategy.clone(), self.mode, self.spec) {
            self.revision += 1;
        }
        discarded
    }

    /// Moves one volume in the linear order; rejects a stale `expected_revision`.
    pub fn apply_move(&mut self, from: usize, to: usize, expected_revision: Option<u64>) -> Result<(), StateError> {
        if let Some(given) = expected_revision {
            if given != self.revision {
                return Err(StateError::StaleRevision { given, current: self.revision });
            }
        }
        self.layout = move_volume(&self.layout, from, to, &self.catalog, &self.spec)?;
        self.revision += 1;
        Ok(())
    }

    pub fn scene(&self, palettes: &PaletteTable, manual_discarded: bool) -> SceneResponse {
        let color = |v: &Volume| display_color(v, self.mode, palettes);
        let placements = self
            .layout
            .placements
            .iter()
            .filter_map(|p| {
                let v = self.catalog.get(&p.isbn13)?;
                let height_mm = match p.orientation {
                    librarylens::shelf::Orientation::Upright => v.height_mm,
                    librarylens::shelf::Orientation::Flat => v.spine_thickness_mm,
                };
                Some(ScenePlacement {
                    isbn13: p.isbn13.clone(),
                    title: v.title.clone(),
                    shelf_index: p.shelf_index,
                    x_offset_mm: p.x_offset_mm,
                    width_mm: p.width_mm,
                    height_mm,
                    orientation: p.orientation,
                    color: color(v),
                })
            })
            .collect();
        let overflow = self
            .layout
            .overflow
            .iter()
            .filter_map(|i| {
                let v = self.catalog.get(i)?;
                Some(OverflowEntry {
                    isbn13: i.clone(),
                    title: v.title.clone(),
                    height_mm: v.height_mm,
                    spine_thickness_mm: v.spine_thickness_mm,
                    color: color(v),
                })
            })
            .collect();
        SceneResponse {
            library_id: self.library_id.clone(),
            revision: self.revision,
            sort: self.strategy.clone(),
            encoding: self.mode,
            spec: self.spec,
            manual: self.layout.manual,
            manual_discarded,
            order: self.layout.order.clone(),
            placements,
            overflow,
        }
    }

    pub fn detail(&self, isbn: &Isbn13, palettes: &PaletteTable) -> Option<BookDetail> {
        let volume = self.catalog.get(isbn)?;
        Some(BookDetail {
            display_color: display_color(volume, self.mode, palettes),
            placement: self.layout.placement(isbn).cloned(),
            in_overflow: self.layout.overflow.contains(isbn),
            fetch_failure: self.fetch_failures.get(isbn).cloned(),
            volume: volume.clone(),
        })
    }

    pub fn export_svg(&self, palettes: &PaletteTable, labels: bool) -> String {
        render_svg(&self.layout, &self.catalog, &self.spec, self.mode, palettes, labels)
    }

    /// Writes every file of the library directory.
    pub fn save(&self, dir: &Path) -> Result<(), PersistError> {
        fs::create_dir_all(dir).map_err(|source| PersistError::Io { path: dir.display().to_string(), source })?;
        write_json(
            &dir.join(RECORDS_FILE),
            &RecordsFile { records: self.records.clone(), report: self.report.clone() },
        )?;
        write_json(
            &dir.join(VOLUMES_FILE),
            &VolumesFile { catalog: self.catalog.clone(), fetch_failures: self.fetch_failures.clone() },
        )?;
        self.save_view(dir)
    }

    /// Writes only the mutable view (order, strategy, mode, spec, revision).
    pub fn save_view(&self, dir: &Path) -> Result<(), PersistError> {
        write_json(
            &dir.join(STATE_FILE),
            &StateFile {
                library_id: self.library_id.clone(),
                revision: self.revision,
                strategy: self.strategy.clone(),
                mode: self.mode,
                spec: self.spec,
                manual: self.layout.manual,
                order: self.layout.order.clone(),
            },
        )
    }

    /// Reads a library directory and re-packs the stored order.
    pub fn load(dir: &Path) -> Result<Self, PersistError> {
        let records: RecordsFile = read_json(&dir.join(RECORDS_FILE))?;
        let volumes: VolumesFile = read_json(&dir.join(VOLUMES_FILE))?;
        let state: StateFile = read_json(&dir.join(STATE_FILE))?;
        let mut layout = pack(&state.order, &volumes.catalog, &state.spec);
        layout.manual = state.manual;
        Ok(LibraryState {
            library_id: state.library_id,
            records: records.records,
            report: records.report,
            catalog: volumes.catalog,
            fetch_failures: volumes.fetch_failures,
            layout,
            strategy: state.strategy,
            mode: state.mode,
            spec: state.spec,
            revision: state.revision,
        })
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), PersistError> {
    let display = || path.display().to_string();
    let text = serde_json::to_string_pretty(value).map_err(|source| PersistError::Json { path: display(), source })?;
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, text).map_err(|source| PersistError::Io { path: display(), source })?;
    fs::rename(&tmp, path).map_err(|source| PersistError::Io { path: display(), source })
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, PersistError> {
    let display = || path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| PersistError::Io { path: display(), source })?;
    serde_json::from_str(&text).map_err(|source| PersistError::Json { path: display(), source })
}
