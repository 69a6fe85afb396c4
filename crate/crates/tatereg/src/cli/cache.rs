//! Content-addressed disk cache of series.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use log::warn;
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::padic::RingParams;
use crate::series::LaurentSeries;

/// Bumped whenever a generator changes its output.
pub const GENERATOR_VERSION: u32 = 1;

/// Identity of a cached series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheKey {
    pub name: String,
    pub ring: RingParams,
    pub order: i64,
    pub version: u32,
}

impl CacheKey {
    pub fn new(name: &str, ring: RingParams, order: i64) -> Self {
        CacheKey { name: name.to_string(), ring, order, version: GENERATOR_VERSION }
    }

    pub fn digest(&self) -> String {
        let text = format!(
            "{}|p={}|d={}|M={}|N={}|v={}",
            self.name, self.ring.p, self.ring.d, self.ring.m, self.order, self.version
        );
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

/// A cache directory; concurrent writers are safe via write-then-rename.
#[derive(Clone, Debug)]
pub struct SeriesCache {
    dir: PathBuf,
}

impl SeriesCache {
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(SeriesCache { dir: dir.to_path_buf() })
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.series", key.digest()))
    }

    /// A hit only when the stored header matches the key; anything else,
    /// including a corrupt file, is a miss.
    pub fn load(&self, key: &CacheKey) -> Option<LaurentSeries> {
        let path = self.path(key);
        let bytes = fs::read(&path).ok()?;
        match LaurentSeries::from_bytes(&bytes) {
            Ok(s) if s.ring().params() == key.ring && s.order() == key.order => Some(s),
            Ok(_) => {
                warn!("cache entry {} has a mismatched header; ignoring it", path.display());
                None
            }
            Err(e) => {
                warn!("cache entry {} is corrupt ({e}); ignoring it", path.display());
                None
            }
        }
    }

    pub fn store(&self, key: &CacheKey, series: &LaurentSeries) -> Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(&series.to_bytes())?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }

    /// Loads `key` or computes and stores it.
    pub fn get_or_compute(
        &self,
        key: &CacheKey,
        compute: impl FnOnce() -> Result<LaurentSeries>,
    ) -> Result<LaurentSeries> {
        if let Some(s) = self.load(key) {
            return Ok(s);
        }
        let s = compute()?;
        self.store(key, &s)?;
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::make_ring;
    use crate::qexp::{level1_series, Level1};

    #[test]
    fn round_trip_and_misses() {
        let dir = tempfile::tempdir().unwrap();
        let cache = SeriesCache::open(dir.path()).unwrap();
        let ring = make_ring(7, 1, 4).unwrap();
        let j = level1_series(&ring, Level1::J, 20);
        let key = CacheKey::new("j", ring.params(), 20);
        assert!(cache.load(&key).is_none());
        cache.store(&key, &j).unwrap();
        assert_eq!(cache.load(&key).unwrap(), j);
        let other_m = CacheKey::new("j", make_ring(7, 1, 5).unwrap().params(), 20);
        assert!(cache.load(&other_m).is_none());
        let bumped = CacheKey { version: GENERATOR_VERSION + 1, ..key.clone() };
        assert_ne!(bumped.digest(), key.digest());
        assert!(cache.load(&bumped).is_none());
        fs::write(cache.path(&key), b"{not json\n").unwrap();
        assert!(cache.load(&key).is_none());
    }
}
