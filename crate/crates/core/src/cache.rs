//! On-disk cache of GET results with a time-to-live.
//!
//! Each URL maps to two files named by the lowercase hex SHA-256 of the URL:
//! `<hash>.json` holds the envelope (`url`, `status`, `fetched_at`,
//! `ttl_seconds`) and `<hash>.body` the raw body. Both are written through a
//! temporary file and renamed into place.

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::http::{Fetch, Response, TransportError};

pub const CACHE_DIR_ENV: &str = "CRATE2BIB_CACHE_DIR";
pub const DEFAULT_TTL: Duration = Duration::from_secs(24 * 60 * 60);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CacheMode {
    #[default]
    Online,
    /// Never touch the network; a missing or stale record is an error.
    Offline,
}

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("offline mode and no fresh cache record for {0}")]
    OfflineMiss(String),
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error("cache i/o on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

/// A stored outcome. Only 200 with a body and 404 without one are cacheable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheRecord {
    pub url: String,
    pub status: u16,
    pub body: Vec<u8>,
    pub fetched_at: DateTime<Utc>,
    pub ttl: Duration,
}

impl CacheRecord {
    /// `None` when the outcome is not cacheable.
    pub fn new(
        url: &str,
        status: u16,
        body: Vec<u8>,
        fetched_at: DateTime<Utc>,
        ttl: Duration,
    ) -> Option<Self> {
        let cacheable = match status {
            200 => !body.is_empty(),
            404 => body.is_empty(),
            _ => false,
        };
        cacheable.then(|| Self {
            url: url.to_string(),
            status,
            body,
            fetched_at,
            ttl,
        })
    }

    pub fn is_fresh_at(&self, now: DateTime<Utc>) -> bool {
        chrono::Duration::from_std(self.ttl)
            .ok()
            .and_then(|ttl| self.fetched_at.checked_add_signed(ttl))
            .is_some_and(|expiry| expiry > now)
    }
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    url: String,
    status: u16,
    fetched_at: DateTime<Utc>,
    ttl_seconds: u64,
}

/// Result of [`Cache::get_or_fetch`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fetched {
    pub status: u16,
    pub body: Vec<u8>,
    pub from_cache: bool,
}

/// Cache handle. Cheap to clone; a handle without a directory stores nothing.
#[derive(Debug, Clone)]
pub struct Cache {
    dir: Option<PathBuf>,
    ttl: Duration,
    mode: CacheMode,
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, CacheError> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|source| CacheError::Io {
            path: dir.clone(),
            source,
        })?;
        Ok(Self {
            dir: Some(dir),
            ttl: DEFAULT_TTL,
            mode: CacheMode::Online,
        })
    }

    pub fn disabled() -> Self {
        Self {
            dir: None,
            ttl: DEFAULT_TTL,
            mode: CacheMode::Online,
        }
    }

    pub fn with_ttl(mut self, ttl: Duration) -> Self {
        self.ttl = ttl;
        self
    }

    pub fn with_mode(mut self, mode: CacheMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn ttl(&self) -> Duration {
        self.ttl
    }

    pub fn mode(&self) -> CacheMode {
        self.mode
    }

    /// Explicit flag, then `$CRATE2BIB_CACHE_DIR`, then the platform cache
    /// home.
    pub fn resolve_dir(explicit: Option<&Path>) -> Option<PathBuf> {
        if let Some(dir) = explicit {
            return Some(dir.to_path_buf());
        }
        if let Some(dir) = std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()) {
            return Some(PathBuf::from(dir));
        }
        dirs::cache_dir().map(|d| d.join("crate2bib"))
    }

    fn paths(&self, url: &str) -> Option<(PathBuf, PathBuf)> {
        let dir = self.dir.as_ref()?;
        let hash = hex::encode(Sha256::digest(url.as_bytes()));
        Some((
            dir.join(format!("{hash}.json")),
            dir.join(format!("{hash}.body")),
        ))
    }

    /// Reads the record for `url`, fresh or not. Unreadable or mismatched
    /// files count as absent.
    pub fn read(&self, url: &str) -> Option<CacheRecord> {
        let (env_path, body_path) = self.paths(url)?;
        let envelope: Envelope = serde_json::from_slice(&std::fs::read(env_path).ok()?).ok()?;
        if envelope.url != url {
            return None;
        }
        let body = std::fs::read(body_path).ok()?;
        CacheRecord::new(
            url,
            envelope.status,
            body,
            envelope.fetched_at,
            Duration::from_secs(envelope.ttl_seconds),
        )
    }

    /// Writes `record`. A no-op for a handle without a directory.
    pub fn store(&self, record: &CacheRecord) -> Result<(), CacheError> {
        let Some((env_path, body_path)) = self.paths(&record.url) else {
            return Ok(());
        };
        let envelope = Envelope {
            url: record.url.clone(),
            status: record.status,
            fetched_at: record.fetched_at,
            ttl_seconds: record.ttl.as_secs(),
        };
        let json = serde_json::to_vec_pretty(&envelope).expect("envelope serializes");
        write_atomic(&body_path, &record.body)?;
        write_atomic(&env_path, &json)
    }

    /// Serves a fresh record if there is one. Otherwise, online, calls
    /// `fetch` and stores cacheable outcomes; offline, fails with
    /// [`CacheError::OfflineMiss`] without calling `fetch`.
    pub fn get_or_fetch(
        &self,
        url: &str,
        fetch: impl FnOnce(&str) -> Result<Response, TransportError>,
        ttl: Duration,
        mode: CacheMode,
    ) -> Result<Fetched, CacheError> {
        let now = Utc::now();
        if let Some(record) = self.read(url).filter(|r| r.is_fresh_at(now)) {
            return Ok(Fetched {
                status: record.status,
                body: record.body,
                from_cache: true,
            });
        }
        if mode == CacheMode::Offline {
            return Err(CacheError::OfflineMiss(url.to_string()));
        }
        let Response { status, mut body } = fetch(url)?;
        // 404 bodies are host error pages; only the status is kept.
        if status == 404 {
            body.clear();
        }
        if let Some(record) = CacheRecord::new(url, status, body.clone(), Utc::now(), ttl) {
            self.store(&record)?;
        }
        Ok(Fetched {
            status,
            body,
            from_cache: false,
        })
    }

    /// [`Cache::get_or_fetch`] with this handle's TTL and mode.
    pub fn fetch_with(&self, url: &str, fetcher: &dyn Fetch) -> Result<Fetched, CacheError> {
        self.get_or_fetch(url, |u| fetcher.get(u), self.ttl, self.mode)
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CacheError> {
    let io_err = |source| CacheError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cell::Cell;

    const URL: &str = "https://crates.io/api/v1/crates/demo";
    const HOUR: Duration = Duration::from_secs(3600);

    fn ok(body: &str) -> Result<Response, TransportError> {
        Ok(Response {
            status: 200,
            body: body.as_bytes().to_vec(),
        })
    }

    fn seeded(dir: &Path, age: chrono::Duration, ttl: Duration) -> Cache {
        let cache = Cache::open(dir).unwrap();
        let record = CacheRecord::new(URL, 200, b"cached".to_vec(), Utc::now() - age, ttl).unwrap();
        cache.store(&record).unwrap();
        cache
    }

    #[test]
    fn fresh_hit_offline() {
        let tmp = tempfile::tempdir().unwrap();
        let cache = seeded(tmp.path(), chrono::Duration::seconds(10), HOUR);
        let got = cache
            .get_or_fetch(URL, |_| panic!("must not fetch"), HOUR, CacheMode::Offline)
            .unwrap();
        assert_eq!(got.body, b"cached");
        assert!(got.from_cache);
    }

    #[test]
    fn uncached_offline_is_miss() {
        let tmp = tempfile::tempdir().unwrap();
        let cache = Cache::open(tmp.path()).unwrap();
        let err = cache
            .get_or_fetch(URL, |_| panic!("must not fetch"), HOUR, CacheMode::Offline)
            .unwrap_err();
        assert!(matches!(err, CacheError::OfflineMiss(u) if u == URL));
    }

    #[test]
    fn expired_online_refetches_once_and_replaces() {
        let tmp = tempfile::tempdir().unwrap();
        let cache = seeded(tmp.path(), chrono::Duration::seconds(7200), HOUR);
        let calls = Cell::new(0);
        let got = cache
            .get_or_fetch(
                URL,
                |_| {
                    calls.set(calls.get() + 1);
                    ok("fresh")
                },
                HOUR,
                CacheMode::Online,
            )
            .unwrap();
        assert_eq!(calls.get(), 1);
        assert_eq!(got.body, b"fresh");
        assert!(!got.from_cache);
        assert_eq!(cache.read(URL).unwrap().body, b"fresh");

        let again = cache
            .get_or_fetch(URL, |_| panic!("fresh now"), HOUR, CacheMode::Online)
            .unwrap();
        assert!(again.from_cache);
    }

    #[test]
    fn transport_errors_are_not_cached() {
        let tmp = tempfile::tempdir().unwrap();
        let cache = Cache::open(tmp.path()).unwrap();
        let err = cache.get_or_fetch(
            URL,
            |u| {
                Err(TransportError {
                    url: u.into(),
                    reason: "boom".into(),
                })
            },
            HOUR,
            CacheMode::Online,
        );
        assert!(matches!(err, Err(CacheError::Transport(_))));
        assert!(cache.read(URL).is_none());
        let calls = Cell::new(0);
        cache
            .get_or_fetch(
                URL,
                |_| {
                    calls.set(1);
                    ok("x")
                },
                HOUR,
                CacheMode::Online,
            )
            .unwrap();
        assert_eq!(calls.get(), 1);
    }

    #[test]
    fn negative_caching_and_uncacheable_statuses() {
        let tmp = tempfile::tempdir().unwrap();
        let cache = Cache::open(tmp.path()).unwrap();
        let nf = || {
            Ok(Response {
                status: 404,
                body: b"404: Not Found".to_vec(),
            })
        };
        assert_eq!(cache.get_or_fetch(URL, |_| nf(), HOUR, CacheMode::Online).unwrap().status, 404);
        let hit = cache.get_or_fetch(URL, |_| panic!(), HOUR, CacheMode::Online).unwrap();
        assert_eq!((hit.status, hit.from_cache), (404, true));

        let other = "https://crates.io/api/v1/crates/limited";
        for status in [429u16, 500, 301] {
            let got = cache
                .get_or_fetch(
                    other,
                    |_| Ok(Response { status, body: b"x".to_vec() }),
                    HOUR,
                    CacheMode::Online,
                )
                .unwrap();
            assert_eq!(got.status, status);
            assert!(cache.read(other).is_none());
        }
    }

    #[test]
    fn record_invariants() {
        let now = Utc::now();
        assert!(CacheRecord::new(URL, 200, vec![], now, HOUR).is_none());
        assert!(CacheRecord::new(URL, 404, b"x".to_vec(), now, HOUR).is_none());
        assert!(CacheRecord::new(URL, 500, vec![], now, HOUR).is_none());
    }

    #[test]
    fn envelope_layout() {
        let tmp = tempfile::tempdir().unwrap();
        seeded(tmp.path(), chrono::Duration::zero(), HOUR);
        let hash = hex::encode(Sha256::digest(URL.as_bytes()));
        let json: serde_json::Value =
            serde_json::from_slice(&std::fs::read(tmp.path().join(format!("{hash}.json"))).unwrap())
                .unwrap();
        let mut keys: Vec<_> = json.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["fetched_at", "status", "ttl_seconds", "url"]);
        assert_eq!(json["ttl_seconds"], 3600);
        assert_eq!(std::fs::read(tmp.path().join(format!("{hash}.body"))).unwrap(), b"cached");
    }

    #[test]
    fn disabled_cache_stores_nothing() {
        let cache = Cache::disabled();
        let calls = Cell::new(0);
        for _ in 0..2 {
            cache
                .get_or_fetch(
                    URL,
                    |_| {
                        calls.set(calls.get() + 1);
                        ok("x")
                    },
                    HOUR,
                    CacheMode::Online,
                )
                .unwrap();
        }
        assert_eq!(calls.get(), 2);
    }

    #[test]
    fn zero_ttl_is_never_fresh() {
        let r = CacheRecord::new(URL, 200, b"x".to_vec(), Utc::now(), Duration::ZERO).unwrap();
        assert!(!r.is_fresh_at(Utc::now()));
    }
}
