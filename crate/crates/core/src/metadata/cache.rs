//! Append-only on-disk lookup cache, one JSON record per line.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use serde::{Deserialize, Serialize};

use super::provider::VolumeMeta;
use crate::ingest::Isbn13;

pub const CACHE_FILE_NAME: &str = "metadata.jsonl";

/// A cached lookup outcome. Transient failures are never cached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CachedLookup {
    Found { meta: VolumeMeta },
    NotFound,
}

#[derive(Serialize, Deserialize)]
struct CacheLine {
    isbn13: Isbn13,
    #[serde(flatten)]
    lookup: CachedLookup,
}

/// Many readers, one writer. Later lines for the same ISBN replace earlier ones.
pub struct MetadataCache {
    path: PathBuf,
    entries: RwLock<HashMap<Isbn13, CachedLookup>>,
    writer: Mutex<File>,
}

impl MetadataCache {
    pub fn open(dir: impl AsRef<Path>) -> io::Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        let path = dir.as_ref().join(CACHE_FILE_NAME);
        let mut entries = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for (n, line) in reader.lines().enumerate() {
                let line = match line {
                    Ok(l) => l,
                    Err(e) => {
                        log::warn!("{}:{}: unreadable cache line: {e}", path.display(), n + 1);
                        continue;
                    }
                };
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<CacheLine>(&line) {
                    Ok(entry) => {
                        entries.insert(entry.isbn13, entry.lookup);
                    }
                    Err(e) => log::warn!("{}:{}: skipping corrupt cache line: {e}", path.display(), n + 1),
                }
            }
        }
        let writer = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(MetadataCache { path, entries: RwLock::new(entries), writer: Mutex::new(writer) })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn get(&self, isbn: &Isbn13) -> Option<CachedLookup> {
        self.entries.read().expect("cache lock").get(isbn).cloned()
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn insert(&self, isbn: &Isbn13, lookup: CachedLookup) -> io::Result<()> {
        let line = serde_json::to_string(&CacheLine { isbn13: isbn.clone(), lookup: lookup.clone() })?;
        {
            let mut w = self.writer.lock().expect("cache writer");
            w.write_all(line.as_bytes())?;
            w.write_all(b"\n")?;
            w.flush()?;
        }
        self.entries.write().expect("cache lock").insert(isbn.clone(), lookup);
        Ok(())
    }
}
