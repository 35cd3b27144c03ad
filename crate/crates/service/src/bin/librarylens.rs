use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use librarylens::pipeline::Enricher;
use librarylens::shelf::{ShelfSpec, SortStrategy};
use librarylens::visual::{EncodingMode, PaletteTable};
use librarylens_service::{router, AppState, LibraryState, LibraryStore, ViewUpdate};

#[derive(Parser)]
#[command(name = "librarylens", version, about = "Virtual bookshelves from a Goodreads export")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Directory holding one sub-directory per library.
    #[arg(long, env = "LIBRARYLENS_DATA_DIR", default_value = "librarylens-data")]
    data_dir: PathBuf,
    /// Use the bundled fixture metadata instead of the remote provider.
    #[arg(long)]
    offline: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest and enrich a CSV export into a new library; prints its id and report.
    Ingest {
        csv: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Render a stored library (id or directory) to an SVG blueprint.
    Render {
        library: String,
        #[arg(long)]
        sort: Option<SortStrategy>,
        #[arg(long)]
        encoding: Option<EncodingMode>,
        #[arg(long)]
        shelves: Option<usize>,
        #[arg(long)]
        width_mm: Option<f64>,
        #[arg(long)]
        clearance_mm: Option<f64>,
        #[arg(long)]
        out: PathBuf,
        /// Omit spine titles.
        #[arg(long)]
        no_labels: bool,
        /// Palette JSON file replacing the bundled colors.
        #[arg(long, env = "LIBRARYLENS_PALETTES")]
        palettes: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Built web UI bundle served at `/`.
        #[arg(long, env = "LIBRARYLENS_STATIC_DIR")]
        static_dir: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

type Failure = Box<dyn std::error::Error>;

fn enricher(common: &Common) -> Result<Enricher, Failure> {
    Ok(Enricher::from_env(common.offline, Some(&common.data_dir.join("cache")))?)
}

fn ingest(csv: &Path, common: &Common) -> Result<(), Failure> {
    let bytes = std::fs::read(csv).map_err(|e| format!("{}: {e}", csv.display()))?;
    let library = enricher(common)?.build_library(&bytes)?;
    let store = LibraryStore::open(&common.data_dir)?;
    let id = uuid::Uuid::new_v4().simple().to_string();
    let state = LibraryState::new(id.clone(), library);
    let report = state.report.clone();
    store.insert(state)?;
    let out = serde_json::json!({ "library_id": id, "ingest_report": report });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

struct RenderView {
    sort: Option<SortStrategy>,
    encoding: Option<EncodingMode>,
    shelves: Option<usize>,
    width_mm: Option<f64>,
    clearance_mm: Option<f64>,
}

fn render(
    library: &str,
    view: RenderView,
    out: &Path,
    labels: bool,
    palettes: Option<&Path>,
    common: &Common,
) -> Result<(), Failure> {
    let as_dir = Path::new(library);
    let dir = if as_dir.join("state.json").is_file() { as_dir.to_path_buf() } else { common.data_dir.join(library) };
    let mut state = LibraryState::load(&dir)?;
    let spec = if view.shelves.is_some() || view.width_mm.is_some() || view.clearance_mm.is_some() {
        let current = state.spec;
        Some(ShelfSpec::new(
            view.shelves.unwrap_or(current.shelf_count()),
            view.width_mm.unwrap_or(current.shelf_width_mm()),
            view.clearance_mm.unwrap_or(current.shelf_clearance_mm()),
        )?)
    } else {
        None
    };
    state.apply_view(&ViewUpdate { strategy: view.sort, mode: view.encoding, spec });
    let palettes = match palettes {
        Some(p) => PaletteTable::from_file(p)?,
        None => PaletteTable::default(),
    };
    std::fs::write(out, state.export_svg(&palettes, labels)).map_err(|e| format!("{}: {e}", out.display()))?;
    eprintln!("{}: {} placed, {} overflow", out.display(), state.layout.placements.len(), state.layout.overflow.len());
    Ok(())
}

fn serve(host: &str, port: u16, static_dir: Option<PathBuf>, common: &Common) -> Result<(), Failure> {
    let store = LibraryStore::open(&common.data_dir)?;
    let app = AppState::new(store, enricher(common)?, PaletteTable::from_env()?);
    let addr: SocketAddr = format!("{host}:{port}").parse()?;
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr).await?;
        log::info!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, router(app, static_dir)).await
    })?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ingest { csv, common } => ingest(&csv, &common),
        Command::Render {
            library,
            sort,
            encoding,
            shelves,
            width_mm,
            clearance_mm,
            out,
            no_labels,
            palettes,
            common,
        } => {
            let view = RenderView { sort, encoding, shelves, width_mm, clearance_mm };
            render(&library, view, &out, !no_labels, palettes.as_deref(), &common)
        }
        Command::Serve { port, host, static_dir, common } => serve(&host, port, static_dir, &common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
