//! Bibliography entries for packages published on crates.io.
//!
//! Given a package name and an optional version request, [`gather_candidates`]
//! reads the registry metadata, resolves the version, looks for a
//! `CITATION.cff` file in the package's repository (GitHub or Codeberg) and
//! returns one BibTeX [`Candidate`] per source it found: the registry entry
//! always, then the CFF software entry and the CFF preferred citation when
//! present.
//!
//! ```no_run
//! use crate2bib::{gather_candidates, render_candidates, Cache, Client, ClientConfig};
//!
//! let config = ClientConfig::new("my-tool (me@example.org)")?;
//! let client = Client::new(config, Cache::disabled())?;
//! let candidates =
//!     gather_candidates(&client, "serde", &"latest".parse()?, &Default::default())?;
//! print!("{}", render_candidates(&candidates));
//! # Ok::<(), crate2bib::Error>(())
//! ```
//!
//! Requests to one host are spaced by [`ClientConfig::min_request_interval`]
//! and every GET goes through the on-disk [`Cache`].

pub mod bib;
pub mod cache;
pub mod cff;
mod client;
pub mod convert;
mod error;
pub mod http;
pub mod registry;
pub mod repo;
pub mod version;

pub use bib::{escape_bibtex, generate_key, parse_entry, BibEntry};
pub use cache::{Cache, CacheMode};
pub use cff::{parse_cff, CffDocument};
pub use client::Client;
pub use convert::{
    cff_to_bib, gather_candidates, package_to_bib, render_candidates, Candidate, GatherOptions,
    Origin, OriginKind,
};
pub use error::{Error, Result};
pub use http::ClientConfig;
pub use registry::{PackageMeta, VersionInfo};
pub use version::{resolve_version, VersionRequest};
