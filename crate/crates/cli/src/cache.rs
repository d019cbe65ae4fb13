//! Content-addressed model cache: `<key>.json` holds the serialized model and
//! `<key>.sha256` the digest of its bytes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use stdgr::Caps;

pub struct Cache {
    dir: PathBuf,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Key of the canonical request.
pub fn request_key(p: u64, n: u32, m: u64, caps: &Caps, seed: u64) -> String {
    let canonical = serde_json::json!({
        "p": p,
        "n": n,
        "m": m,
        "caps": [caps.max_m, caps.max_d, caps.max_n],
        "seed": seed,
    });
    digest(canonical.to_string().as_bytes())
}

pub enum Lookup {
    Hit(String),
    Miss,
    /// Present but the stored digest does not match the content.
    Corrupt,
}

impl Cache {
    pub fn new(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Cache {
            dir: dir.to_path_buf(),
        })
    }

    fn paths(&self, key: &str) -> (PathBuf, PathBuf) {
        (
            self.dir.join(format!("{key}.json")),
            self.dir.join(format!("{key}.sha256")),
        )
    }

    pub fn get(&self, key: &str) -> Lookup {
        let (body, sum) = self.paths(key);
        let (Ok(content), Ok(stored)) = (fs::read_to_string(&body), fs::read_to_string(&sum))
        else {
            return Lookup::Miss;
        };
        if stored.trim() == digest(content.as_bytes()) {
            Lookup::Hit(content)
        } else {
            Lookup::Corrupt
        }
    }

    /// Writes through temporary files renamed into place, body first.
    pub fn put(&self, key: &str, content: &str) -> std::io::Result<()> {
        let (body, sum) = self.paths(key);
        self.atomic_write(&body, content.as_bytes())?;
        self.atomic_write(&sum, digest(content.as_bytes()).as_bytes())
    }

    fn atomic_write(&self, target: &Path, bytes: &[u8]) -> std::io::Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(bytes)?;
        tmp.as_file().sync_all()?;
        tmp.persist(target).map_err(|e| e.error)?;
        Ok(())
    }
}
