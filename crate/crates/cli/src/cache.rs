use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use ujac_core::ENGINE_VERSION;

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn sha256(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

/// Content-addressed store of rendered outputs. Entries carry their key and a
/// digest of the payload; anything that fails to verify is treated as a miss.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    digest: String,
    payload: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
    Corrupt,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Key over the command, the type, the degree, the format, the plugin
    /// contents and the engine version.
    pub fn key(parts: &[&str]) -> String {
        let mut text = String::from(ENGINE_VERSION);
        for p in parts {
            text.push('\u{1f}');
            text.push_str(p);
        }
        sha256(text.as_bytes())
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> (Lookup, Option<String>) {
        let Ok(bytes) = fs::read(self.path(key)) else {
            return (Lookup::Miss, None);
        };
        match serde_json::from_slice::<Entry>(&bytes) {
            Ok(e) if e.key == key && e.digest == sha256(e.payload.as_bytes()) => (Lookup::Hit, Some(e.payload)),
            _ => (Lookup::Corrupt, None),
        }
    }

    /// Writes through a temporary file and a rename, so concurrent writers of
    /// the same key leave a complete entry.
    pub fn put(&self, key: &str, payload: &str) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = Entry { key: key.to_string(), digest: sha256(payload.as_bytes()), payload: payload.to_string() };
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(&entry)?)?;
        fs::rename(tmp, self.path(key))
    }

    pub fn get_or_compute<E>(&self, key: &str, compute: impl FnOnce() -> Result<String, E>) -> Result<(String, Lookup), E> {
        let (lookup, hit) = self.get(key);
        if let Some(payload) = hit {
            return Ok((payload, lookup));
        }
        let payload = compute()?;
        // A read-only or full cache directory only costs a recomputation.
        let _ = self.put(key, &payload);
        Ok((payload, lookup))
    }
}
