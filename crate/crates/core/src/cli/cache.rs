//! On-disk spectrum cache. One JSON file per `(p, r, m, mode)` carrying a
//! SHA-256 checksum of its key and payload.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::budget::Budget;
use crate::error::{GrmError, Result};
use crate::spectrum::{
    enumerate_reduced, enumerate_spectrum, CodeParams, EnumerationMode, SpectrumDocument,
    WeightSpectrum,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum CachePolicy {
    /// Load when present, compute and store when missing; a corrupt file is
    /// an error.
    #[default]
    Use,
    /// Always recompute and overwrite.
    Refresh,
    /// No file access.
    Off,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub p: u32,
    pub r: u32,
    pub m: usize,
    pub mode: EnumerationMode,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: CacheKey,
    pub payload: SpectrumDocument,
    pub checksum: String,
}

#[derive(Serialize)]
struct Checked<'a> {
    key: &'a CacheKey,
    payload: &'a SpectrumDocument,
}

fn checksum(key: &CacheKey, payload: &SpectrumDocument) -> String {
    let bytes = serde_json::to_vec(&Checked { key, payload }).expect("cache entry serializes");
    hex::encode(Sha256::digest(bytes))
}

impl CacheEntry {
    pub fn new(s: &WeightSpectrum) -> Self {
        let key = CacheKey {
            p: u32::from(s.params.p()),
            r: s.params.r,
            m: s.params.m,
            mode: s.mode,
            tool_version: s.tool_version.clone(),
        };
        let payload = SpectrumDocument::from(s);
        let checksum = checksum(&key, &payload);
        CacheEntry {
            key,
            payload,
            checksum,
        }
    }

    pub fn verify(&self) -> bool {
        checksum(&self.key, &self.payload) == self.checksum
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumCache {
    dir: PathBuf,
}

impl SpectrumCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        SpectrumCache { dir: dir.into() }
    }

    /// `$GRM_CACHE`, or `./.grm-cache`.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os("GRM_CACHE").map_or_else(|| PathBuf::from(".grm-cache"), PathBuf::from))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// `grm_p{p}_r{r}_m{m}.json` for full spectra; reduced runs add a
    /// `_symmetry-reduced` suffix so the two never collide.
    pub fn path(&self, params: CodeParams, mode: EnumerationMode) -> PathBuf {
        let suffix = match mode {
            EnumerationMode::Full => String::new(),
            other => format!("_{}", other.as_str()),
        };
        self.dir.join(format!(
            "grm_p{}_r{}_m{}{suffix}.json",
            params.p(),
            params.r,
            params.m
        ))
    }

    /// Writes through a temporary file in the cache directory and renames it
    /// into place.
    pub fn store(&self, s: &WeightSpectrum) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.dir)?;
        let path = self.path(s.params, s.mode);
        let mut text = serde_json::to_string_pretty(&CacheEntry::new(s))
            .map_err(|e| GrmError::Internal(e.to_string()))?;
        text.push('\n');
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(text.as_bytes())?;
        tmp.persist(&path).map_err(|e| GrmError::Io(e.to_string()))?;
        Ok(path)
    }

    /// `Ok(None)` when the file is missing or was written by another tool
    /// version; an error when it is unreadable or fails its checksum.
    pub fn load(&self, params: CodeParams, mode: EnumerationMode) -> Result<Option<WeightSpectrum>> {
        let path = self.path(params, mode);
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let entry: CacheEntry = serde_json::from_str(&text)
            .map_err(|e| GrmError::Cache(format!("{}: {e}", path.display())))?;
        if !entry.verify() {
            return Err(GrmError::Cache(format!("{}: checksum mismatch", path.display())));
        }
        if entry.key.tool_version != crate::TOOL_VERSION {
            return Ok(None);
        }
        let expected = CacheKey {
            p: u32::from(params.p()),
            r: params.r,
            m: params.m,
            mode,
            tool_version: crate::TOOL_VERSION.to_string(),
        };
        let payload_key = (entry.payload.p, entry.payload.r, entry.payload.m, entry.payload.mode);
        if entry.key != expected || payload_key != (expected.p, expected.r, expected.m, expected.mode) {
            return Err(GrmError::Cache(format!("{}: key does not match file name", path.display())));
        }
        WeightSpectrum::try_from(entry.payload).map(Some)
    }
}

fn compute(params: CodeParams, mode: EnumerationMode, budget: &Budget, workers: usize) -> Result<WeightSpectrum> {
    match mode {
        EnumerationMode::Full => enumerate_spectrum(params, budget, workers),
        EnumerationMode::SymmetryReduced => enumerate_reduced(params, budget, workers),
    }
}

/// Spectrum of `params` under the given cache policy.
pub fn cached_spectrum(
    cache: &SpectrumCache,
    policy: CachePolicy,
    params: CodeParams,
    mode: EnumerationMode,
    budget: &Budget,
    workers: usize,
) -> Result<WeightSpectrum> {
    match policy {
        CachePolicy::Off => compute(params, mode, budget, workers),
        CachePolicy::Refresh => {
            let s = compute(params, mode, budget, workers)?;
            cache.store(&s)?;
            Ok(s)
        }
        CachePolicy::Use => {
            if let Some(s) = cache.load(params, mode)? {
                return Ok(s);
            }
            let s = compute(params, mode, budget, workers)?;
            cache.store(&s)?;
            Ok(s)
        }
    }
}
