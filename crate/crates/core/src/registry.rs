//! crates.io-style registry API: package summary and version list.

use chrono::{DateTime, Utc};
use semver::Version;
use serde::Deserialize;

use crate::client::Client;
use crate::error::{Error, Result};

/// Who published a version, as reported by the registry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Publisher {
    pub name: String,
    pub email: Option<String>,
}

impl Publisher {
    /// `Family, Given` is taken at the comma; otherwise the last word of
    /// the display name is the family name.
    pub fn family_name(&self) -> &str {
        self.split().0
    }

    pub fn given_names(&self) -> Option<&str> {
        self.split().1
    }

    fn split(&self) -> (&str, Option<&str>) {
        let name = self.name.trim();
        if let Some((family, given)) = name.split_once(',') {
            let given = given.trim();
            return (family.trim(), (!given.is_empty()).then_some(given));
        }
        match name.rsplit_once(char::is_whitespace) {
            Some((given, family)) => (family, Some(given.trim_end())),
            None => (name, None),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VersionInfo {
    pub semver: Version,
    pub yanked: bool,
    pub license: Option<String>,
    pub published_at: DateTime<Utc>,
    pub published_by: Option<Publisher>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackageMeta {
    pub name: String,
    pub description: Option<String>,
    pub repository_url: Option<String>,
    pub homepage_url: Option<String>,
    /// Newest first; never empty.
    pub versions: Vec<VersionInfo>,
}

/// Lowercase ASCII letters, digits, `-` and `_`.
pub fn validate_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && name
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-' || b == b'_');
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidName(name.to_string()))
    }
}

pub fn package_api_url(base_url: &str, name: &str) -> String {
    format!("{base_url}/api/v1/crates/{name}")
}

pub fn versions_api_url(base_url: &str, name: &str) -> String {
    format!("{base_url}/api/v1/crates/{name}/versions")
}

#[derive(Deserialize)]
struct CrateResponse {
    #[serde(rename = "crate")]
    krate: CrateData,
}

#[derive(Deserialize)]
struct CrateData {
    name: String,
    description: Option<String>,
    repository: Option<String>,
    homepage: Option<String>,
}

#[derive(Deserialize)]
struct VersionsResponse {
    versions: Vec<VersionData>,
    #[serde(default)]
    meta: Option<VersionsMeta>,
}

#[derive(Deserialize)]
struct VersionsMeta {
    next_page: Option<String>,
}

#[derive(Deserialize)]
struct VersionData {
    num: String,
    #[serde(default)]
    yanked: bool,
    license: Option<String>,
    created_at: DateTime<Utc>,
    published_by: Option<UserData>,
}

#[derive(Deserialize)]
struct UserData {
    login: String,
    name: Option<String>,
}

const MAX_VERSION_PAGES: usize = 100;

/// Fetches the package summary, then every page of its version list.
pub fn fetch_package_meta(client: &Client, name: &str) -> Result<PackageMeta> {
    validate_name(name)?;
    let base = client.config().base_url();

    let url = package_api_url(base, name);
    let summary: CrateResponse = get_json(client, &url, name)?;

    let mut versions = Vec::new();
    let first = versions_api_url(base, name);
    let mut next = Some(first.clone());
    let mut pages = 0;
    while let Some(url) = next.take() {
        pages += 1;
        if pages > MAX_VERSION_PAGES {
            return Err(malformed(&first, "too many version pages"));
        }
        let page: VersionsResponse = get_json(client, &url, name)?;
        for v in page.versions {
            versions.push(convert_version(v, &url)?);
        }
        next = page
            .meta
            .and_then(|m| m.next_page)
            .filter(|q| !q.is_empty())
            .map(|q| format!("{first}{q}"));
    }

    build_meta(summary.krate, versions, &first)
}

fn get_json<T: serde::de::DeserializeOwned>(client: &Client, url: &str, name: &str) -> Result<T> {
    let fetched = client.get(url)?;
    match fetched.status {
        200 => serde_json::from_slice(&fetched.body).map_err(|e| malformed(url, &e.to_string())),
        404 => Err(Error::NotFound(name.to_string())),
        429 => Err(Error::RateLimited {
            url: url.to_string(),
        }),
        other => Err(Error::Network(format!("{url} answered with status {other}"))),
    }
}

fn malformed(url: &str, reason: &str) -> Error {
    Error::Malformed {
        url: url.to_string(),
        reason: reason.to_string(),
    }
}

fn convert_version(v: VersionData, url: &str) -> Result<VersionInfo> {
    let semver = Version::parse(&v.num)
        .map_err(|e| malformed(url, &format!("version {:?}: {e}", v.num)))?;
    let published_by = v.published_by.map(|u| {
        let name = u.name.filter(|n| !n.trim().is_empty()).unwrap_or(u.login);
        Publisher { name, email: None }
    });
    Ok(VersionInfo {
        semver,
        yanked: v.yanked,
        license: v.license.filter(|l| !l.trim().is_empty()),
        published_at: v.created_at,
        published_by,
    })
}

fn build_meta(krate: CrateData, mut versions: Vec<VersionInfo>, url: &str) -> Result<PackageMeta> {
    if krate.name.is_empty() || krate.name.contains(char::is_whitespace) {
        return Err(malformed(url, "invalid package name in response"));
    }
    if versions.is_empty() {
        return Err(malformed(url, "package has no published versions"));
    }
    let now = Utc::now();
    if let Some(v) = versions.iter().find(|v| v.published_at > now) {
        return Err(malformed(url, &format!("version {} is dated in the future", v.semver)));
    }
    versions.sort_by(|a, b| {
        b.published_at
            .cmp(&a.published_at)
            .then_with(|| b.semver.cmp(&a.semver))
    });
    let mut seen = std::collections::HashSet::new();
    if let Some(dup) = versions.iter().find(|v| !seen.insert(&v.semver)) {
        return Err(malformed(url, &format!("duplicate version {}", dup.semver)));
    }
    let nonblank = |s: Option<String>| s.filter(|s| !s.trim().is_empty());
    Ok(PackageMeta {
        name: krate.name,
        description: nonblank(krate.description),
        repository_url: nonblank(krate.repository),
        homepage_url: nonblank(krate.homepage),
        versions,
    })
}
