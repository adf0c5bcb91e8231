//! Versioned on-disk cache of extracted invariants.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliResult;

/// Bumped on any change to the entry schema or payload meaning.
pub const FORMAT_VERSION: u32 = 1;

pub const CACHE_ENV: &str = "MIRROR_GW_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub n: usize,
    pub a: usize,
    pub series_id: String,
    pub u_order: usize,
    pub format_version: u32,
}

impl CacheKey {
    pub fn new(n: usize, a: usize, series_id: &str, u_order: usize) -> Self {
        Self {
            n,
            a,
            series_id: series_id.to_string(),
            u_order,
            format_version: FORMAT_VERSION,
        }
    }

    fn file_name(&self) -> String {
        format!("{}-n{}-a{}-u{}-v{}.json", self.series_id, self.n, self.a, self.u_order, self.format_version)
    }
}

/// Payload values are exact rationals as `num/den` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: CacheKey,
    pub payload: BTreeMap<String, String>,
    pub digest: String,
}

fn digest(payload: &BTreeMap<String, String>) -> String {
    let bytes = serde_json::to_vec(payload).expect("string maps serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl CacheEntry {
    pub fn new(key: CacheKey, payload: BTreeMap<String, String>) -> Self {
        let digest = digest(&payload);
        Self { key, payload, digest }
    }

    pub fn is_valid(&self) -> bool {
        self.key.format_version == FORMAT_VERSION && self.digest == digest(&self.payload)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CacheStat {
    pub dir: PathBuf,
    pub format_version: u32,
    pub entries: usize,
    pub invalid: usize,
    pub bytes: u64,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// `--cache-dir`, else `$MIRROR_GW_CACHE`, else the user cache directory.
    pub fn resolve(flag: Option<&Path>) -> Self {
        let dir = flag
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .or_else(|| std::env::var_os("XDG_CACHE_HOME").map(|d| PathBuf::from(d).join("mirror-gw")))
            .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("mirror-gw")))
            .unwrap_or_else(|| std::env::temp_dir().join("mirror-gw"));
        Self { dir }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// The payload under `key`, if present and intact.
    pub fn load(&self, key: &CacheKey) -> Option<BTreeMap<String, String>> {
        let text = fs::read_to_string(self.dir.join(key.file_name())).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.is_valid() && &entry.key == key).then_some(entry.payload)
    }

    /// Writes through a temporary file and a rename, so readers never see a partial entry.
    pub fn store(&self, key: &CacheKey, payload: BTreeMap<String, String>) -> CliResult<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = CacheEntry::new(key.clone(), payload);
        let target = self.dir.join(key.file_name());
        let tmp = self.dir.join(format!(".{}.{}.tmp", key.file_name(), std::process::id()));
        fs::write(&tmp, serde_json::to_vec_pretty(&entry)?)?;
        fs::rename(&tmp, &target)?;
        Ok(())
    }

    fn entries(&self) -> CliResult<Vec<PathBuf>> {
        if !self.dir.exists() {
            return Ok(Vec::new());
        }
        let mut out: Vec<PathBuf> = fs::read_dir(&self.dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Removes every entry; returns how many were removed.
    pub fn clear(&self) -> CliResult<usize> {
        let entries = self.entries()?;
        for p in &entries {
            fs::remove_file(p)?;
        }
        Ok(entries.len())
    }

    pub fn stat(&self) -> CliResult<CacheStat> {
        let mut stat = CacheStat {
            dir: self.dir.clone(),
            format_version: FORMAT_VERSION,
            entries: 0,
            invalid: 0,
            bytes: 0,
        };
        for p in self.entries()? {
            stat.entries += 1;
            stat.bytes += fs::metadata(&p)?.len();
            let ok = fs::read_to_string(&p)
                .ok()
                .and_then(|t| serde_json::from_str::<CacheEntry>(&t).ok())
                .is_some_and(|e| e.is_valid());
            if !ok {
                stat.invalid += 1;
            }
        }
        Ok(stat)
    }
}
