//! A directory of named JSON objects with a manifest of kinds and hashes.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const MANIFEST: &str = "manifest.json";

/// Sorted keys, two-space indentation and a trailing newline.
pub fn canonical(v: &Value) -> String {
    // serde_json's default map is ordered, so keys come out sorted
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub kind: String,
    pub file: String,
    pub sha256: String,
}

#[derive(Clone, Debug)]
pub struct Workspace {
    dir: PathBuf,
    entries: BTreeMap<String, Entry>,
}

fn check_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && name != MANIFEST.trim_end_matches(".json")
        && !name.starts_with('.')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'));
    if ok {
        Ok(())
    } else {
        Err(Error::Workspace(format!("invalid object name {name:?}")))
    }
}

impl Workspace {
    /// Opens `dir`, creating it and an empty manifest if needed.
    pub fn open(dir: impl AsRef<Path>) -> Result<Workspace> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        let path = dir.join(MANIFEST);
        let entries = if path.exists() {
            serde_json::from_str(&fs::read_to_string(&path)?)?
        } else {
            BTreeMap::new()
        };
        Ok(Workspace { dir, entries })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn entries(&self) -> &BTreeMap<String, Entry> {
        &self.entries
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    fn write_manifest(&self) -> Result<()> {
        let v = serde_json::to_value(&self.entries)?;
        fs::write(self.dir.join(MANIFEST), canonical(&v))?;
        Ok(())
    }

    /// Stores `value` under `name`, replacing any earlier object.
    pub fn save(&mut self, name: &str, kind: &str, value: &Value) -> Result<Entry> {
        check_name(name)?;
        let text = canonical(value);
        let file = format!("{name}.json");
        fs::write(self.dir.join(&file), &text)?;
        let entry = Entry {
            kind: kind.to_string(),
            file,
            sha256: sha256_hex(text.as_bytes()),
        };
        self.entries.insert(name.to_string(), entry.clone());
        self.write_manifest()?;
        Ok(entry)
    }

    /// The stored kind and value, after checking the file against its hash.
    pub fn load(&self, name: &str) -> Result<(String, Value)> {
        let entry = self
            .entries
            .get(name)
            .ok_or_else(|| Error::Workspace(format!("no object named {name:?}")))?;
        let text = fs::read_to_string(self.dir.join(&entry.file))?;
        if sha256_hex(text.as_bytes()) != entry.sha256 {
            return Err(Error::Workspace(format!("{name}: contents do not match the manifest hash")));
        }
        Ok((entry.kind.clone(), serde_json::from_str(&text)?))
    }
}
