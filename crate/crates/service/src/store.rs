use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use crate::state::{LibraryState, PersistError};

pub type SharedLibrary = Arc<Mutex<LibraryState>>;

/// All libraries, each behind its own lock so mutations on one library are
/// serialized while different libraries proceed independently.
pub struct LibraryStore {
    root: Option<PathBuf>,
    libraries: RwLock<HashMap<String, SharedLibrary>>,
}

impl LibraryStore {
    /// A store that never touches disk.
    pub fn in_memory() -> Self {
        LibraryStore { root: None, libraries: RwLock::default() }
    }

    /// Opens `root`, loading every library directory found there.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, PersistError> {
        let root = root.into();
        let io_err = |source| PersistError::Io { path: root.display().to_string(), source };
        std::fs::create_dir_all(&root).map_err(io_err)?;
        let mut libraries = HashMap::new();
        let mut entries: Vec<_> = std::fs::read_dir(&root)
            .map_err(io_err)?
            .filter_map(Result::ok)
            .map(|e| e.path())
            .filter(|p| p.join("state.json").is_file())
            .collect();
        entries.sort();
        for dir in entries {
            match LibraryState::load(&dir) {
                Ok(state) => {
                    libraries.insert(state.library_id.clone(), Arc::new(Mutex::new(state)));
                }
                Err(e) => log::warn!("skipping unreadable library: {e}"),
            }
        }
        log::info!("loaded {} libraries from {}", libraries.len(), root.display());
        Ok(LibraryStore { root: Some(root), libraries: RwLock::new(libraries) })
    }

    pub fn root(&self) -> Option<&Path> {
        self.root.as_deref()
    }

    pub fn library_dir(&self, id: &str) -> Option<PathBuf> {
        self.root.as_ref().map(|r| r.join(id))
    }

    pub fn insert(&self, state: LibraryState) -> Result<SharedLibrary, PersistError> {
        if let Some(dir) = self.library_dir(&state.library_id) {
            state.save(&dir)?;
        }
        let id = state.library_id.clone();
        let shared = Arc::new(Mutex::new(state));
        self.libraries.write().unwrap_or_else(|e| e.into_inner()).insert(id, shared.clone());
        Ok(shared)
    }

    pub fn get(&self, id: &str) -> Option<SharedLibrary> {
        self.libraries.read().unwrap_or_else(|e| e.into_inner()).get(id).cloned()
    }

    /// Persists the view of an already stored library.
    pub fn save_view(&self, state: &LibraryState) -> Result<(), PersistError> {
        match self.library_dir(&state.library_id) {
            Some(dir) => state.save_view(&dir),
            None => Ok(()),
        }
    }

    pub fn len(&self) -> usize {
        self.libraries.read().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
