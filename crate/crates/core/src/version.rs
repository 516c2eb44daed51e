//! Picking one published version out of a package's version list.

use std::fmt;
use std::str::FromStr;

use semver::Version;

use crate::registry::VersionInfo;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VersionError {
    #[error("no published version matches {0}")]
    NoMatch(String),
    #[error("every version matching {0} has been yanked")]
    AllYanked(String),
    #[error("invalid version request {0:?}: expected `latest`, `X`, `X.Y` or a full version")]
    InvalidRequest(String),
}

/// What the user asked for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VersionRequest {
    /// Highest stable, non-yanked version.
    Latest,
    /// That exact version, yanked or not, pre-release or not.
    Exact(Version),
    /// Highest stable, non-yanked version whose major (and minor, if
    /// given) components match.
    Partial { major: u64, minor: Option<u64> },
}

impl FromStr for VersionRequest {
    type Err = VersionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s.eq_ignore_ascii_case("latest") {
            return Ok(Self::Latest);
        }
        if let Ok(v) = Version::parse(s) {
            return Ok(Self::Exact(v));
        }
        let invalid = || VersionError::InvalidRequest(s.to_string());
        let number = |part: &str| -> Result<u64, VersionError> {
            if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(invalid());
            }
            part.parse().map_err(|_| invalid())
        };
        let mut parts = s.split('.');
        let major = number(parts.next().unwrap_or_default())?;
        let minor = parts.next().map(number).transpose()?;
        if parts.next().is_some() {
            return Err(invalid());
        }
        Ok(Self::Partial { major, minor })
    }
}

impl fmt::Display for VersionRequest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Latest => f.write_str("latest"),
            Self::Exact(v) => write!(f, "{v}"),
            Self::Partial { major, minor: None } => write!(f, "{major}"),
            Self::Partial {
                major,
                minor: Some(minor),
            } => write!(f, "{major}.{minor}"),
        }
    }
}

impl VersionRequest {
    fn admits(&self, v: &Version) -> bool {
        match self {
            Self::Latest => v.pre.is_empty(),
            Self::Exact(want) => {
                (want.major, want.minor, want.patch, &want.pre) == (v.major, v.minor, v.patch, &v.pre)
            }
            Self::Partial { major, minor } => {
                v.pre.is_empty() && v.major == *major && minor.is_none_or(|m| v.minor == m)
            }
        }
    }
}

/// The chosen version plus a warning when it was yanked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedVersion {
    pub info: VersionInfo,
    pub warning: Option<String>,
}

/// Resolves `request` against the published versions.
///
/// Yanked versions are only ever returned for an exact request, and then
/// carry a warning.
pub fn resolve_version(
    request: &VersionRequest,
    available: &[VersionInfo],
) -> Result<ResolvedVersion, VersionError> {
    let mut matching = available.iter().filter(|v| request.admits(&v.semver)).peekable();
    if matching.peek().is_none() {
        return Err(VersionError::NoMatch(request.to_string()));
    }

    if let VersionRequest::Exact(_) = request {
        let info = matching.max_by(|a, b| a.semver.cmp(&b.semver)).cloned().expect("non-empty");
        let warning = info
            .yanked
            .then(|| format!("version {} has been yanked by its owners", info.semver));
        return Ok(ResolvedVersion { info, warning });
    }

    matching
        .filter(|v| !v.yanked)
        .max_by(|a, b| a.semver.cmp(&b.semver))
        .cloned()
        .map(|info| ResolvedVersion { info, warning: None })
        .ok_or_else(|| VersionError::AllYanked(request.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::{TimeZone, Utc};

    fn info(v: &str, yanked: bool) -> VersionInfo {
        VersionInfo {
            semver: Version::parse(v).unwrap(),
            yanked,
            license: None,
            published_at: Utc.with_ymd_and_hms(2024, 1, 1, 0, 0, 0).unwrap(),
            published_by: None,
        }
    }

    fn resolve(req: &str, versions: &[(&str, bool)]) -> Result<ResolvedVersion, VersionError> {
        let available: Vec<_> = versions.iter().map(|(v, y)| info(v, *y)).collect();
        resolve_version(&req.parse().unwrap(), &available)
    }

    #[test]
    fn latest_uses_semver_order_not_lexical() {
        let r = resolve("latest", &[("1.2.3", false), ("1.10.0", false), ("0.9.0", false)]).unwrap();
        assert_eq!(r.info.semver.to_string(), "1.10.0");
        assert!(r.warning.is_none());
    }

    #[test]
    fn exact_single() {
        let r = resolve("1.2.3", &[("1.2.3", false)]).unwrap();
        assert_eq!(r.info.semver.to_string(), "1.2.3");
    }

    #[test]
    fn partial_excludes_prerelease() {
        assert_eq!(
            resolve("2", &[("1.9.9", false), ("2.0.0-rc.1", false)]),
            Err(VersionError::NoMatch("2".into()))
        );
    }

    #[test]
    fn exact_yanked_warns() {
        let r = resolve("1.0.0", &[("1.0.0", true), ("1.0.1", false)]).unwrap();
        assert_eq!(r.info.semver.to_string(), "1.0.0");
        assert!(r.warning.unwrap().contains("yanked"));
    }

    #[test]
    fn exact_prerelease() {
        let r = resolve("2.0.0-rc.1", &[("1.9.9", false), ("2.0.0-rc.1", false)]).unwrap();
        assert_eq!(r.info.semver.to_string(), "2.0.0-rc.1");
    }

    #[test]
    fn all_yanked() {
        assert_eq!(
            resolve("latest", &[("1.0.0", true), ("0.1.0", true)]),
            Err(VersionError::AllYanked("latest".into()))
        );
        assert_eq!(
            resolve("1.2", &[("1.2.0", true), ("1.3.0", false)]),
            Err(VersionError::AllYanked("1.2".into()))
        );
    }

    #[test]
    fn latest_skips_yanked_and_prerelease() {
        let r = resolve(
            "latest",
            &[("3.0.0-alpha", false), ("2.1.0", true), ("2.0.5", false)],
        )
        .unwrap();
        assert_eq!(r.info.semver.to_string(), "2.0.5");
    }

    #[test]
    fn partial_minor() {
        let r = resolve("1.2", &[("1.2.9", false), ("1.20.0", false), ("1.3.0", false)]).unwrap();
        assert_eq!(r.info.semver.to_string(), "1.2.9");
    }

    #[test]
    fn request_parsing() {
        assert_eq!("".parse::<VersionRequest>().unwrap(), VersionRequest::Latest);
        assert_eq!("Latest".parse::<VersionRequest>().unwrap(), VersionRequest::Latest);
        assert_eq!(
            "3".parse::<VersionRequest>().unwrap(),
            VersionRequest::Partial { major: 3, minor: None }
        );
        assert_eq!(
            "3.14".parse::<VersionRequest>().unwrap(),
            VersionRequest::Partial { major: 3, minor: Some(14) }
        );
        for bad in ["^1.2", "1.2.3.4", "x", "1.", ".1", "1.-2", "~1"] {
            assert!(bad.parse::<VersionRequest>().is_err(), "{bad}");
        }
    }

    #[test]
    fn empty_list_is_no_match() {
        assert!(matches!(
            resolve_version(&VersionRequest::Latest, &[]),
            Err(VersionError::NoMatch(_))
        ));
    }
}
