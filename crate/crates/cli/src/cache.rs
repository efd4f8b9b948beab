//! On-disk result cache: one JSON file per canonical tuple holding one
//! polynomial per engine.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use hgd_core::{Engine, GenusPolynomial, ParamTuple};
use serde::{Deserialize, Serialize};

#[derive(Debug, Default, Serialize, Deserialize)]
struct Entry {
    tuple: String,
    results: BTreeMap<String, GenusPolynomial>,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    fn path(&self, canonical: &ParamTuple) -> PathBuf {
        self.dir.join(format!("H_{}.json", canonical.as_slice().iter().map(u32::to_string).collect::<Vec<_>>().join("_")))
    }

    fn read(path: &Path) -> Option<Entry> {
        let text = fs::read_to_string(path).ok()?;
        match serde_json::from_str(&text) {
            Ok(entry) => Some(entry),
            Err(e) => {
                eprintln!("warning: ignoring unreadable cache file {}: {e}", path.display());
                None
            }
        }
    }

    pub fn get(&self, params: &ParamTuple, engine: Engine) -> Option<GenusPolynomial> {
        let canonical = params.canonicalize();
        Self::read(&self.path(&canonical))?.results.get(engine.name()).cloned()
    }

    pub fn put(&self, params: &ParamTuple, engine: Engine, poly: &GenusPolynomial) -> io::Result<()> {
        let canonical = params.canonicalize();
        fs::create_dir_all(&self.dir)?;
        let path = self.path(&canonical);
        let mut entry = Self::read(&path).unwrap_or_default();
        entry.tuple = canonical.to_string();
        entry.results.insert(engine.name().to_string(), poly.clone());
        let tmp = path.with_extension(format!("json.tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_string_pretty(&entry)? + "\n")?;
        fs::rename(tmp, path)
    }
}
