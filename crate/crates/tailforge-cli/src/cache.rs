//! Flat content-addressed result cache: one JSON file per
//! (diagram, command, parameters) key.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

static TMP_SEQ: AtomicU64 = AtomicU64::new(0);

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

/// Canonical key text; `params` must already be in a stable order.
pub fn key_material(diagram_pd: &str, command: &str, params: &Value) -> String {
    format!("{diagram_pd}\n{command}\n{params}")
}

impl Cache {
    pub fn open(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    fn path(&self, material: &str) -> PathBuf {
        let h = hex::encode(Sha256::digest(material.as_bytes()));
        self.dir.join(format!("{h}.json"))
    }

    pub fn get(&self, material: &str) -> Option<Value> {
        let text = fs::read_to_string(self.path(material)).ok()?;
        let v: Value = serde_json::from_str(&text).ok()?;
        // a hash collision or a stale format reads as a miss
        (v.get("key")?.as_str()? == material).then(|| v.get("result").cloned()).flatten()
    }

    /// Writes through a temporary file and renames, so readers never see a
    /// partial entry.
    pub fn put(&self, material: &str, result: &Value) -> io::Result<()> {
        let target = self.path(material);
        let seq = TMP_SEQ.fetch_add(1, Ordering::Relaxed);
        let tmp = self.dir.join(format!(".tmp-{}-{seq}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(json!({ "key": material, "result": result }).to_string().as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_miss() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path()).unwrap();
        let k = key_material("X[1,1,2,2]", "jones", &json!({}));
        assert!(c.get(&k).is_none());
        c.put(&k, &json!({"a": [1, 2]})).unwrap();
        assert_eq!(c.get(&k), Some(json!({"a": [1, 2]})));
        assert!(c.get(&key_material("X[1,1,2,2]", "jones", &json!({"color": 2}))).is_none());
        let leftovers = fs::read_dir(dir.path()).unwrap().filter(|e| {
            e.as_ref().unwrap().file_name().to_string_lossy().starts_with(".tmp")
        });
        assert_eq!(leftovers.count(), 0);
    }
}
