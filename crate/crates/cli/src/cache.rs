//! Content-addressed report cache: entries are keyed by the hash of
//! (command, canonical params, code version) and written atomically.
//! Corrupt entries are evicted and recomputed.

use crate::report::Report;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

pub const CACHE_ENV: &str = "SYZYGY_CACHE_DIR";

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// Resolve the cache directory: the command-line flag wins, then the
    /// environment variable; absent both, caching is off.
    pub fn resolve(flag: Option<PathBuf>) -> Option<Cache> {
        let dir = flag.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))?;
        fs::create_dir_all(&dir).ok()?;
        Some(Cache { dir })
    }

    pub fn key(command: &str, params: &BTreeMap<String, serde_json::Value>) -> String {
        let mut hasher = Sha256::new();
        hasher.update(env!("CARGO_PKG_VERSION").as_bytes());
        hasher.update([0]);
        hasher.update(command.as_bytes());
        hasher.update([0]);
        hasher.update(serde_json::to_vec(params).expect("param serialization"));
        hex_string(&hasher.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn lookup(&self, key: &str) -> Option<Report> {
        let path = self.path(key);
        let bytes = fs::read(&path).ok()?;
        match serde_json::from_slice::<Report>(&bytes) {
            Ok(report) if report.schema_version == crate::report::SCHEMA_VERSION => Some(report),
            _ => {
                // corrupt or stale entry: evict so the caller recomputes
                let _ = fs::remove_file(&path);
                None
            }
        }
    }

    pub fn store(&self, key: &str, bytes: &[u8]) {
        let final_path = self.path(key);
        let tmp = self.dir.join(format!(".{key}.tmp"));
        if fs::write(&tmp, bytes).is_ok() {
            let _ = fs::rename(&tmp, &final_path);
        }
    }
}

fn hex_string(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}
