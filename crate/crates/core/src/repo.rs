//! Locating `CITATION.cff` in a package's source repository.

use std::fmt;

use crate::client::Client;
use crate::error::Error;

pub const DEFAULT_BRANCHES: [&str; 2] = ["main", "master"];
pub const CFF_PATH: &str = "CITATION.cff";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Host {
    GitHub,
    Codeberg,
    Unsupported,
}

impl fmt::Display for Host {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Host::GitHub => "github.com",
            Host::Codeberg => "codeberg.org",
            Host::Unsupported => "unsupported host",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepoLocator {
    pub host: Host,
    pub owner: String,
    pub repo: String,
    pub source_url: String,
}

impl RepoLocator {
    /// Raw-file URL of `CITATION.cff` on `branch`; `None` for unsupported
    /// hosts.
    pub fn raw_cff_url(&self, branch: &str) -> Option<String> {
        let (owner, repo) = (&self.owner, &self.repo);
        match self.host {
            Host::GitHub => Some(format!(
                "https://raw.githubusercontent.com/{owner}/{repo}/{branch}/{CFF_PATH}"
            )),
            Host::Codeberg => Some(format!(
                "https://codeberg.org/{owner}/{repo}/raw/branch/{branch}/{CFF_PATH}"
            )),
            Host::Unsupported => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CffFetchResult {
    pub raw_text: String,
    pub branch: String,
    pub path: String,
    pub fetched_from: String,
}

#[derive(Debug, thiserror::Error)]
pub enum RepoError {
    #[error("malformed repository url {0:?}")]
    MalformedUrl(String),
    #[error("repository host of {0:?} is not supported")]
    Unsupported(String),
    #[error("probing {url} failed: {reason}")]
    Network { url: String, reason: String },
    #[error("offline mode and no fresh cache record for {0}")]
    OfflineMiss(String),
}

/// Classifies the host and takes owner/repo from the first two path
/// segments. A trailing `.git` on the repository is dropped; deeper
/// segments, query and fragment are ignored.
pub fn parse_repo_url(url: &str) -> Result<RepoLocator, RepoError> {
    let malformed = || RepoError::MalformedUrl(url.to_string());
    let parsed = url::Url::parse(url.trim()).map_err(|_| malformed())?;
    if !matches!(parsed.scheme(), "http" | "https") {
        return Err(malformed());
    }
    let hostname = parsed.host_str().ok_or_else(malformed)?.to_ascii_lowercase();
    let host = match hostname.strip_prefix("www.").unwrap_or(&hostname) {
        "github.com" => Host::GitHub,
        "codeberg.org" => Host::Codeberg,
        _ => Host::Unsupported,
    };
    let mut segments = parsed
        .path_segments()
        .into_iter()
        .flatten()
        .filter(|s| !s.is_empty());
    let owner = segments.next().unwrap_or_default().to_string();
    let repo = segments.next().unwrap_or_default();
    let repo = repo.strip_suffix(".git").unwrap_or(repo).to_string();

    if host != Host::Unsupported && (owner.is_empty() || repo.is_empty()) {
        return Err(malformed());
    }
    Ok(RepoLocator {
        host,
        owner,
        repo,
        source_url: url.to_string(),
    })
}

/// `extra` first, then `main` and `master`, without duplicates.
pub fn probe_branches(extra: &[String]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for b in extra.iter().map(String::as_str).chain(DEFAULT_BRANCHES) {
        if !b.is_empty() && !out.iter().any(|o| o == b) {
            out.push(b.to_string());
        }
    }
    out
}

/// Probes `CITATION.cff` on `main` then `master` and returns the first hit.
/// `Ok(None)` means every probe was a clean 404.
pub fn fetch_citation_cff(
    client: &Client,
    locator: &RepoLocator,
) -> Result<Option<CffFetchResult>, RepoError> {
    fetch_citation_cff_on(client, locator, &probe_branches(&[]))
}

/// Like [`fetch_citation_cff`] with an explicit branch order.
pub fn fetch_citation_cff_on(
    client: &Client,
    locator: &RepoLocator,
    branches: &[String],
) -> Result<Option<CffFetchResult>, RepoError> {
    if locator.host == Host::Unsupported {
        return Err(RepoError::Unsupported(locator.source_url.clone()));
    }
    for branch in branches {
        let url = locator.raw_cff_url(branch).expect("supported host");
        let fetched = client.get(&url).map_err(|e| match e {
            Error::OfflineMiss(u) => RepoError::OfflineMiss(u),
            other => RepoError::Network {
                url: url.clone(),
                reason: other.to_string(),
            },
        })?;
        match fetched.status {
            200 => {
                let text = String::from_utf8(fetched.body).map_err(|_| RepoError::Network {
                    url: url.clone(),
                    reason: "body is not valid UTF-8".into(),
                })?;
                let text = text.strip_prefix('\u{feff}').unwrap_or(&text);
                if text.trim().is_empty() {
                    continue;
                }
                return Ok(Some(CffFetchResult {
                    raw_text: text.to_string(),
                    branch: branch.clone(),
                    path: CFF_PATH.to_string(),
                    fetched_from: url,
                }));
            }
            404 => continue,
            other => {
                return Err(RepoError::Network {
                    url,
                    reason: format!("unexpected status {other}"),
                })
            }
        }
    }
    Ok(None)
}
