//! Content-addressed result cache.
//!
//! A record is stored under the SHA-256 of its inputs. Writes go through a
//! temporary file in the cache directory and are renamed into place.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const ENV_VAR: &str = "VLAB_CACHE_DIR";
pub const DEFAULT_DIR: &str = ".vlab-cache";

/// Version string mixed into every key; bump to invalidate old records.
pub fn toolchain_version() -> String {
    format!("vlab-{}", env!("CARGO_PKG_VERSION"))
}

/// Flag, then environment variable, then the default directory.
pub fn resolve_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    match std::env::var_os(ENV_VAR) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from(DEFAULT_DIR),
    }
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
    version: String,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>, version: impl Into<String>) -> Self {
        Self { dir: dir.into(), version: version.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn key(&self, algebra_json: &str, prime: u64, degree: Option<u32>, op: &str) -> String {
        let material = json!({
            "algebra": algebra_json,
            "prime": prime,
            "degree": degree,
            "op": op,
            "version": self.version,
        });
        hex::encode(Sha256::digest(material.to_string().as_bytes()))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A stored record, or `None` on a miss. Unreadable or mismatched files
    /// count as misses and are reported.
    pub fn get(&self, key: &str) -> Option<Value> {
        let path = self.path(key);
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return None,
            Err(e) => {
                log::warn!("cache entry {} unreadable ({e}); recomputing", path.display());
                return None;
            }
        };
        let parsed: Option<Value> = serde_json::from_str::<Value>(&text).ok().and_then(|v| {
            let ok = v.get("key").and_then(Value::as_str) == Some(key)
                && v.get("version").and_then(Value::as_str) == Some(self.version.as_str());
            if ok {
                v.get("record").cloned()
            } else {
                None
            }
        });
        if parsed.is_none() {
            log::warn!("cache entry {} is corrupt; recomputing", path.display());
        }
        parsed
    }

    pub fn put(&self, key: &str, record: &Value) -> std::io::Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let body = json!({ "key": key, "version": self.version, "record": record });
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serde_json::to_string(&body).expect("serializable").as_bytes())?;
        tmp.flush()?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }
}
