#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use crate2bib::http::FixtureFetcher;
use crate2bib::{Cache, Client, ClientConfig};

pub const REGISTRY: &str = "https://crates.io";
pub const BIBFORGE_CFF_MAIN: &str =
    "https://raw.githubusercontent.com/example-org/bibforge/main/CITATION.cff";
pub const BIBFORGE_CFF_MASTER: &str =
    "https://raw.githubusercontent.com/example-org/bibforge/master/CITATION.cff";

pub fn fixture_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

pub fn fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture_path(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

/// Registry responses for `name`, taken from `registry/<name>.json` and
/// `registry/<name>_versions.json`.
pub fn with_package(f: FixtureFetcher, name: &str) -> FixtureFetcher {
    f.with(
        &format!("{REGISTRY}/api/v1/crates/{name}"),
        200,
        fixture(&format!("registry/{name}.json")),
    )
    .with(
        &format!("{REGISTRY}/api/v1/crates/{name}/versions"),
        200,
        fixture(&format!("registry/{name}_versions.json")),
    )
}

/// bibforge registry data plus, optionally, a CITATION.cff on `main`.
pub fn bibforge(cff: Option<&str>) -> FixtureFetcher {
    let f = with_package(FixtureFetcher::new(), "bibforge");
    match cff {
        Some(text) => f.with(BIBFORGE_CFF_MAIN, 200, text),
        None => f,
    }
}

pub fn client(fetcher: Arc<FixtureFetcher>) -> Client {
    Client::with_fetcher(ClientConfig::default(), Cache::disabled(), fetcher)
}
