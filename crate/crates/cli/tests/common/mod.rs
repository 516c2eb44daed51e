#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Duration;

use chrono::Utc;
use crate2bib::cache::CacheRecord;
use crate2bib::Cache;

pub const BIBFORGE_CFF_MAIN: &str =
    "https://raw.githubusercontent.com/example-org/bibforge/main/CITATION.cff";

/// Fixtures are shared with the library crate.
pub fn fixture_path(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(rel)
}

pub fn fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture_path(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

/// Writes the bibforge registry responses (as served from `registry`) and its
/// CITATION.cff into the cache at `dir`.
pub fn populate_cache(dir: &Path, registry: &str) {
    let cache = Cache::open(dir).unwrap();
    let entries = [
        (format!("{registry}/api/v1/crates/bibforge"), fixture("registry/bibforge.json")),
        (
            format!("{registry}/api/v1/crates/bibforge/versions"),
            fixture("registry/bibforge_versions.json"),
        ),
        (BIBFORGE_CFF_MAIN.to_string(), fixture("pipeline/CITATION.cff")),
    ];
    for (url, body) in entries {
        let record = CacheRecord::new(&url, 200, body.into_bytes(), Utc::now(), Duration::from_secs(3600))
            .unwrap();
        cache.store(&record).unwrap();
    }
}

pub fn crate2bib(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crate2bib"))
        .args(args)
        .env_remove("CRATE2BIB_CACHE_DIR")
        .output()
        .expect("run crate2bib")
}
