//! Turning registry metadata and CFF documents into BibTeX candidates.

use std::collections::BTreeSet;
use std::fmt;

use chrono::Datelike;

use crate::bib::{escape_bibtex, generate_key, is_well_formed_tex, BibEntry};
use crate::cff::{parse_cff, CffAuthor, CffDocument, PreferredCitation};
use crate::client::Client;
use crate::error::Result;
use crate::registry::{self, PackageMeta, Publisher, VersionInfo};
use crate::repo::{self, Host};
use crate::version::{resolve_version, VersionRequest};

pub const CRATES_IO_PAGE: &str = "https://crates.io/crates";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OriginKind {
    RegistryMetadata,
    CitationCff,
    CffPreferredCitation,
}

impl OriginKind {
    /// Short label used in output comments: `registry`, `cff`,
    /// `cff-preferred`.
    pub fn label(self) -> &'static str {
        match self {
            Self::RegistryMetadata => "registry",
            Self::CitationCff => "cff",
            Self::CffPreferredCitation => "cff-preferred",
        }
    }
}

impl fmt::Display for OriginKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Origin {
    pub kind: OriginKind,
    pub source_url: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub entry: BibEntry,
    pub origin: Origin,
    pub warnings: Vec<String>,
}

impl Candidate {
    /// `% origin: <kind> <url>` followed by the serialized entry.
    pub fn render(&self) -> String {
        format!(
            "% origin: {} {}\n{}",
            self.origin.kind.label(),
            self.origin.source_url,
            self.entry.to_bibtex()
        )
    }
}

/// All candidates, separated by blank lines.
pub fn render_candidates(candidates: &[Candidate]) -> String {
    candidates
        .iter()
        .map(Candidate::render)
        .collect::<Vec<_>>()
        .join("\n")
}

/// An entry plus anything worth telling the user about it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub entry: BibEntry,
    pub warnings: Vec<String>,
}

/// Entries derived from one CFF document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CffEntries {
    pub software: BibEntry,
    pub preferred: Option<BibEntry>,
    pub warnings: Vec<String>,
}

impl CffEntries {
    pub fn into_entries(self) -> Vec<BibEntry> {
        std::iter::once(self.software).chain(self.preferred).collect()
    }
}

/// Picks a key from the first usable stem.
fn make_key(stems: &[&str], year: i32, taken: &mut BTreeSet<String>) -> String {
    let key = stems
        .iter()
        .find_map(|stem| generate_key(stem, year, taken).ok())
        .or_else(|| generate_key("entry", year.clamp(1000, 9999), taken).ok())
        .expect("fallback stem is keyable");
    taken.insert(key.clone());
    key
}

/// Values of verbatim fields (`url`, `doi`) are kept as-is when they are
/// already well-formed.
fn verbatim(value: &str) -> String {
    if is_well_formed_tex(value) {
        value.to_string()
    } else {
        escape_bibtex(value)
    }
}

fn set(entry: &mut BibEntry, name: &str, value: String) {
    entry.set(name, value).expect("field names are static and values well-formed");
}

fn publisher_author(p: &Publisher) -> String {
    let family = escape_bibtex(p.family_name());
    match p.given_names() {
        Some(given) => format!("{family}, {}", escape_bibtex(given)),
        None => family,
    }
}

fn cff_author(a: &CffAuthor) -> String {
    match a {
        CffAuthor::Person {
            given_names: Some(given),
            ..
        } => format!("{}, {}", escape_bibtex(&a.primary_name()), escape_bibtex(given)),
        CffAuthor::Person { .. } => escape_bibtex(&a.primary_name()),
        CffAuthor::Entity { name, .. } => format!("{{{}}}", escape_bibtex(name)),
    }
}

/// BibTeX author list: `Family, Given and Family, Given`, entities braced.
pub fn format_authors(authors: &[CffAuthor]) -> String {
    authors.iter().map(cff_author).collect::<Vec<_>>().join(" and ")
}

/// The `@software` entry for one published version, from registry data only.
/// A version without publisher record yields no `author` and a warning.
pub fn package_to_bib(
    meta: &PackageMeta,
    version: &VersionInfo,
    taken: &mut BTreeSet<String>,
) -> Generated {
    package_to_bib_with(meta, version, None, taken)
}

/// Like [`package_to_bib`], using `fallback_authors` when the version has
/// no publisher record.
pub fn package_to_bib_with(
    meta: &PackageMeta,
    version: &VersionInfo,
    fallback_authors: Option<&[CffAuthor]>,
    taken: &mut BTreeSet<String>,
) -> Generated {
    let mut warnings = Vec::new();
    let year = version.published_at.year();

    let (author, stem) = match (&version.published_by, fallback_authors) {
        (Some(p), _) => (Some(publisher_author(p)), Some(p.family_name().to_string())),
        (None, Some(authors)) if !authors.is_empty() => {
            warnings.push(format!(
                "no publisher recorded for {} {}; authors taken from CITATION.cff",
                meta.name, version.semver
            ));
            (Some(format_authors(authors)), Some(authors[0].primary_name()))
        }
        (None, _) => {
            warnings.push(format!(
                "no publisher recorded for {} {}; entry has no author",
                meta.name, version.semver
            ));
            (None, None)
        }
    };

    let stems: Vec<&str> = stem.as_deref().into_iter().chain([meta.name.as_str()]).collect();
    let key = make_key(&stems, year, taken);
    let mut entry = BibEntry::new("software", &key).expect("generated key is valid");
    if let Some(author) = author {
        set(&mut entry, "author", author);
    }
    set(&mut entry, "title", escape_bibtex(&meta.name));
    set(&mut entry, "version", escape_bibtex(&version.semver.to_string()));
    set(&mut entry, "year", year.to_string());
    set(&mut entry, "month", version.published_at.month().to_string());
    set(
        &mut entry,
        "url",
        verbatim(&format!("{CRATES_IO_PAGE}/{}", meta.name)),
    );
    if let Some(license) = &version.license {
        set(&mut entry, "license", escape_bibtex(license));
    }
    Generated { entry, warnings }
}

/// BibTeX entry type for a CFF reference type.
pub fn map_entry_kind(cff_type: &str) -> &'static str {
    match cff_type {
        "article" => "article",
        "conference-paper" => "inproceedings",
        "software" => "software",
        _ => "misc",
    }
}

/// The `@software` entry from the CFF top level, plus an entry for the
/// preferred citation when there is one.
///
/// The CFF `version` takes precedence over `resolved_version`; a difference
/// is reported as a warning.
pub fn cff_to_bib(
    cff: &CffDocument,
    package_name: &str,
    resolved_version: &VersionInfo,
    taken: &mut BTreeSet<String>,
) -> CffEntries {
    let mut warnings = cff.warnings();
    let resolved = resolved_version.semver.to_string();
    let version = match &cff.version {
        Some(v) => {
            if *v != resolved {
                warnings.push(format!(
                    "CITATION.cff declares version {v} but the registry resolved {resolved}; using {v}"
                ));
            }
            v.clone()
        }
        None => resolved,
    };

    let fallback_year = resolved_version.published_at.year();
    let year = cff.date_released.map(|d| d.year()).unwrap_or(fallback_year);
    let first = cff.authors[0].primary_name();
    let key = make_key(&[&first, package_name], year, taken);

    let mut software = BibEntry::new("software", &key).expect("generated key is valid");
    set(&mut software, "author", format_authors(&cff.authors));
    set(&mut software, "title", escape_bibtex(&cff.title));
    set(&mut software, "version", escape_bibtex(&version));
    if let Some(date) = cff.date_released {
        set(&mut software, "year", date.year().to_string());
        set(&mut software, "month", date.month().to_string());
    }
    if let Some(doi) = &cff.doi {
        set(&mut software, "doi", verbatim(doi));
    }
    if let Some(url) = cff.url.as_ref().or(cff.repository_code.as_ref()) {
        set(&mut software, "url", verbatim(url));
    }
    if let Some(license) = &cff.license {
        set(&mut software, "license", escape_bibtex(license));
    }

    let preferred = cff
        .preferred_citation
        .as_ref()
        .map(|p| preferred_to_bib(p, year, package_name, taken));

    CffEntries {
        software,
        preferred,
        warnings,
    }
}

fn preferred_to_bib(
    p: &PreferredCitation,
    fallback_year: i32,
    package_name: &str,
    taken: &mut BTreeSet<String>,
) -> BibEntry {
    let entry_type = map_entry_kind(&p.entry_kind);
    let first = p.authors[0].primary_name();
    let key = make_key(&[&first, package_name], p.year.unwrap_or(fallback_year), taken);
    let mut entry = BibEntry::new(entry_type, &key).expect("generated key is valid");
    set(&mut entry, "author", format_authors(&p.authors));
    set(&mut entry, "title", escape_bibtex(&p.title));
    if let Some(year) = p.year {
        set(&mut entry, "year", year.to_string());
    }
    if let Some(journal) = &p.journal {
        let field = if entry_type == "inproceedings" {
            "booktitle"
        } else {
            "journal"
        };
        set(&mut entry, field, escape_bibtex(journal));
    }
    if let Some(volume) = &p.volume {
        set(&mut entry, "volume", escape_bibtex(volume));
    }
    if let Some(pages) = &p.pages {
        set(&mut entry, "pages", escape_bibtex(pages));
    }
    if let Some(doi) = &p.doi {
        set(&mut entry, "doi", verbatim(doi));
    }
    if let Some(url) = &p.url {
        set(&mut entry, "url", verbatim(url));
    }
    entry
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GatherOptions {
    /// Look for `CITATION.cff` in the repository.
    pub probe_cff: bool,
    /// Branches probed before `main` and `master`.
    pub extra_branches: Vec<String>,
}

impl Default for GatherOptions {
    fn default() -> Self {
        Self {
            probe_cff: true,
            extra_branches: Vec::new(),
        }
    }
}

/// Runs the whole pipeline for one package.
///
/// The registry candidate always comes first. Any problem finding or
/// parsing `CITATION.cff` is reported as a warning on it and the CFF
/// candidates are skipped.
pub fn gather_candidates(
    client: &Client,
    name: &str,
    request: &VersionRequest,
    options: &GatherOptions,
) -> Result<Vec<Candidate>> {
    registry::validate_name(name)?;
    let meta = client.fetch_package_meta(name)?;
    let resolved = resolve_version(request, &meta.versions)?;

    let mut registry_warnings: Vec<String> = resolved.warning.into_iter().collect();
    let cff = if options.probe_cff {
        probe_cff(client, &meta, options, &mut registry_warnings)
    } else {
        None
    };

    let mut taken = BTreeSet::new();
    let fallback = cff.as_ref().map(|(doc, _)| doc.authors.as_slice());
    let generated = package_to_bib_with(&meta, &resolved.info, fallback, &mut taken);
    registry_warnings.extend(generated.warnings);

    let mut candidates = vec![Candidate {
        entry: generated.entry,
        origin: Origin {
            kind: OriginKind::RegistryMetadata,
            source_url: registry::package_api_url(client.config().base_url(), &meta.name),
        },
        warnings: registry_warnings,
    }];

    if let Some((doc, source_url)) = cff {
        let entries = cff_to_bib(&doc, &meta.name, &resolved.info, &mut taken);
        candidates.push(Candidate {
            entry: entries.software,
            origin: Origin {
                kind: OriginKind::CitationCff,
                source_url: source_url.clone(),
            },
            warnings: entries.warnings,
        });
        if let Some(entry) = entries.preferred {
            candidates.push(Candidate {
                entry,
                origin: Origin {
                    kind: OriginKind::CffPreferredCitation,
                    source_url,
                },
                warnings: Vec::new(),
            });
        }
    }
    Ok(candidates)
}

fn probe_cff(
    client: &Client,
    meta: &PackageMeta,
    options: &GatherOptions,
    warnings: &mut Vec<String>,
) -> Option<(CffDocument, String)> {
    let url = meta.repository_url.as_deref()?;
    let locator = match repo::parse_repo_url(url) {
        Ok(l) if l.host != Host::Unsupported => l,
        Ok(_) => {
            warnings.push(format!(
                "repository {url} is not on a supported host; CITATION.cff not searched"
            ));
            return None;
        }
        Err(e) => {
            warnings.push(format!("{e}; CITATION.cff not searched"));
            return None;
        }
    };
    let branches = repo::probe_branches(&options.extra_branches);
    let found = match repo::fetch_citation_cff_on(client, &locator, &branches) {
        Ok(Some(found)) => found,
        Ok(None) => return None,
        Err(e) => {
            warnings.push(format!("CITATION.cff lookup failed: {e}"));
            return None;
        }
    };
    match parse_cff(&found.raw_text) {
        Ok(doc) => Some((doc, found.fetched_from)),
        Err(e) => {
            warnings.push(format!(
                "ignoring CITATION.cff at {}: {}: {e}",
                found.fetched_from,
                e.kind()
            ));
            None
        }
    }
}
