//! On-disk cache of vertex enumerations, keyed by the sha256 of the
//! canonical triangulation text and the coordinate mode.
//!
//! The directory is taken from `KNOTGLUE_CACHE_DIR`, falling back to
//! `$XDG_CACHE_HOME/knotglue` and then `$HOME/.cache/knotglue`. Entries whose
//! format version or triangulation text do not match are ignored and
//! recomputed. A cached enumeration is complete, so the ray cap only applies
//! when an entry has to be computed.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::normal::{
    enumerate_vertex_surfaces_with, CoordMode, EnumerationOptions, NormalCoordinateVector, NormalError,
};
use crate::triangulation::Triangulation;

pub const CACHE_ENV: &str = "KNOTGLUE_CACHE_DIR";
pub const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Entry {
    format_version: u32,
    mode: CoordMode,
    triangulation: String,
    vectors: Vec<Vec<u64>>,
}

#[derive(Clone, Debug)]
pub struct EnumerationCache {
    dir: PathBuf,
}

/// The cache directory from the environment, if one can be determined.
pub fn default_cache_dir() -> Option<PathBuf> {
    if let Some(d) = std::env::var_os(CACHE_ENV) {
        return Some(PathBuf::from(d));
    }
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(d).join("knotglue"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("knotglue"))
}

fn mode_name(mode: CoordMode) -> &'static str {
    match mode {
        CoordMode::Normal => "normal",
        CoordMode::Octagonal => "octagonal",
    }
}

impl EnumerationCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        EnumerationCache { dir: dir.into() }
    }

    pub fn from_env() -> Option<Self> {
        default_cache_dir().map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(tri: &Triangulation, mode: CoordMode) -> String {
        let mut h = Sha256::new();
        h.update(tri.to_text().as_bytes());
        h.update(b"\0");
        h.update(mode_name(mode).as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, tri: &Triangulation, mode: CoordMode) -> PathBuf {
        self.dir.join(format!("{}.json", Self::key(tri, mode)))
    }

    pub fn load(&self, tri: &Triangulation, mode: CoordMode) -> Option<Vec<NormalCoordinateVector>> {
        let text = fs::read_to_string(self.path(tri, mode)).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        if entry.format_version != CACHE_FORMAT_VERSION || entry.mode != mode || entry.triangulation != tri.to_text() {
            return None;
        }
        let block = mode.block() * tri.tet_count();
        if entry.vectors.iter().any(|v| v.len() != block) {
            return None;
        }
        Some(
            entry
                .vectors
                .into_iter()
                .map(|c| NormalCoordinateVector::new(mode, c))
                .collect(),
        )
    }

    /// Writes through a temporary file so readers never see partial entries.
    pub fn store(&self, tri: &Triangulation, mode: CoordMode, vectors: &[NormalCoordinateVector]) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = Entry {
            format_version: CACHE_FORMAT_VERSION,
            mode,
            triangulation: tri.to_text(),
            vectors: vectors.iter().map(|v| v.coords.clone()).collect(),
        };
        let path = self.path(tri, mode);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_string(&entry)?)?;
        fs::rename(tmp, path)
    }

    /// Cached enumeration, computing and storing it on a miss. Failure to
    /// write the cache is not an error.
    pub fn enumerate(
        &self,
        tri: &Triangulation,
        mode: CoordMode,
        options: &EnumerationOptions,
    ) -> Result<Vec<NormalCoordinateVector>, NormalError> {
        if let Some(v) = self.load(tri, mode) {
            return Ok(v);
        }
        let v = enumerate_vertex_surfaces_with(tri, mode, options)?;
        let _ = self.store(tri, mode, &v);
        Ok(v)
    }
}
