//! On-disk cache of enumerated tiling stores.
//!
//! Each spec gets two files: `T_n_m_r.bin` holding the store's records as
//! little-endian `u64` words, and `T_n_m_r.json` recording the spec, record
//! count, widths, code version and the SHA-256 of the binary file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::tiling::{enumerate_tilings, EnumerateOptions, TilingStore};
use crate::torus::{Torus, TorusSpec};

/// Bumped whenever the record layout or enumeration order changes.
pub const CACHE_VERSION: &str = concat!("qtorus-core/", env!("CARGO_PKG_VERSION"), "/1");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheSidecar {
    pub spec: TorusSpec,
    pub count: usize,
    pub edge_count: usize,
    pub width: usize,
    pub checksum: String,
    pub version: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CacheStatus {
    /// Loaded from a valid cache.
    Hit,
    /// No usable cache; enumerated and written.
    Miss,
    /// The cache failed its integrity check; enumerated and rewritten.
    Regenerated,
}

fn stem(spec: TorusSpec) -> String {
    format!("T_{}_{}_{}", spec.n(), spec.m(), spec.r())
}

pub fn cache_paths(dir: &Path, spec: TorusSpec) -> (PathBuf, PathBuf) {
    let s = stem(spec);
    (dir.join(format!("{s}.bin")), dir.join(format!("{s}.json")))
}

fn encode(store: &TilingStore) -> Vec<u8> {
    store
        .raw_words()
        .iter()
        .flat_map(|w| w.to_le_bytes())
        .collect()
}

fn checksum(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn write_cache(dir: &Path, spec: TorusSpec, store: &TilingStore) -> Result<()> {
    fs::create_dir_all(dir)?;
    let (bin, json) = cache_paths(dir, spec);
    let bytes = encode(store);
    let sidecar = CacheSidecar {
        spec,
        count: store.len(),
        edge_count: store.edge_count(),
        width: store.width(),
        checksum: checksum(&bytes),
        version: CACHE_VERSION.to_string(),
    };
    fs::write(&bin, &bytes)?;
    fs::write(&json, serde_json::to_string_pretty(&sidecar)? + "\n")?;
    Ok(())
}

/// Reads a cached store. `Ok(None)` when no cache exists or it was written
/// by another code version; `Err(CacheCorrupt)` when it fails verification.
pub fn read_cache(dir: &Path, spec: TorusSpec) -> Result<Option<TilingStore>> {
    let (bin, json) = cache_paths(dir, spec);
    if !bin.exists() || !json.exists() {
        return Ok(None);
    }
    let corrupt = |reason: String| Error::CacheCorrupt { spec, reason };
    let sidecar: CacheSidecar = serde_json::from_slice(&fs::read(&json)?)
        .map_err(|e| corrupt(format!("unreadable sidecar: {e}")))?;
    if sidecar.version != CACHE_VERSION {
        return Ok(None);
    }
    if sidecar.spec != spec || sidecar.edge_count != spec.edge_count() {
        return Err(corrupt("sidecar describes a different torus".into()));
    }
    let bytes = fs::read(&bin)?;
    if checksum(&bytes) != sidecar.checksum {
        return Err(corrupt("checksum mismatch".into()));
    }
    if bytes.len() != sidecar.count * sidecar.width * 8 {
        return Err(corrupt(format!(
            "{} bytes for {} records of width {}",
            bytes.len(),
            sidecar.count,
            sidecar.width
        )));
    }
    let words: Vec<u64> = bytes
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().expect("chunk of 8 bytes")))
        .collect();
    let store = TilingStore::from_raw(spec.edge_count(), words).map_err(corrupt)?;
    if store.width() != sidecar.width {
        return Err(corrupt("record width mismatch".into()));
    }
    Ok(Some(store))
}

/// Cached store for `torus`, enumerating (and caching) on a miss or when
/// the cache is corrupt.
pub fn load_or_enumerate(
    torus: &Torus,
    dir: &Path,
    opts: EnumerateOptions,
) -> Result<(TilingStore, CacheStatus)> {
    let spec = torus.spec();
    let status = match read_cache(dir, spec) {
        Ok(Some(store)) => return Ok((store, CacheStatus::Hit)),
        Ok(None) => CacheStatus::Miss,
        Err(Error::CacheCorrupt { .. }) => CacheStatus::Regenerated,
        Err(e) => return Err(e),
    };
    let store = enumerate_tilings(torus, opts)?;
    write_cache(dir, spec, &store)?;
    Ok((store, status))
}
