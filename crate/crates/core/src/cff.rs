//! `CITATION.cff` parsing, limited to the fields needed for bibliography
//! output. Unknown keys are ignored.

use chrono::NaiveDate;
use serde::Serialize;
use serde_yaml::{Mapping, Value};

/// CFF schema versions this parser knows about. Others are accepted with a
/// warning.
pub const KNOWN_CFF_VERSIONS: [&str; 4] = ["1.2.0", "1.1.0", "1.0.3", "1.0.2"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CffError {
    #[error("not a YAML mapping: {0}")]
    NotYaml(String),
    #[error("schema violation: {0}")]
    SchemaViolation(String),
    #[error("bad date {0:?}: expected YYYY-MM-DD")]
    BadDate(String),
}

impl CffError {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::NotYaml(_) => "NotYaml",
            Self::SchemaViolation(_) => "SchemaViolation",
            Self::BadDate(_) => "BadDate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CffAuthor {
    Person {
        family_names: String,
        given_names: Option<String>,
        name_particle: Option<String>,
        orcid: Option<String>,
    },
    Entity {
        name: String,
        orcid: Option<String>,
    },
}

impl CffAuthor {
    /// Family name including any particle (`van der Berg`), or the entity
    /// name.
    pub fn primary_name(&self) -> String {
        match self {
            Self::Person {
                family_names,
                name_particle: Some(p),
                ..
            } => format!("{p} {family_names}"),
            Self::Person { family_names, .. } => family_names.clone(),
            Self::Entity { name, .. } => name.clone(),
        }
    }

    pub fn orcid(&self) -> Option<&str> {
        match self {
            Self::Person { orcid, .. } | Self::Entity { orcid, .. } => orcid.as_deref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferredCitation {
    /// CFF `type`, e.g. `article` or `conference-paper`.
    pub entry_kind: String,
    pub title: String,
    pub authors: Vec<CffAuthor>,
    pub year: Option<i32>,
    pub doi: Option<String>,
    pub journal: Option<String>,
    pub volume: Option<String>,
    /// `start--end` (or `start`) from the CFF `start`/`end` keys.
    pub pages: Option<String>,
    pub url: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CffDocument {
    pub cff_version: String,
    pub message: String,
    pub title: String,
    pub authors: Vec<CffAuthor>,
    pub version: Option<String>,
    pub doi: Option<String>,
    pub date_released: Option<NaiveDate>,
    pub url: Option<String>,
    pub repository_code: Option<String>,
    pub license: Option<String>,
    pub preferred_citation: Option<PreferredCitation>,
}

impl CffDocument {
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !KNOWN_CFF_VERSIONS.contains(&self.cff_version.as_str()) {
            out.push(format!(
                "unrecognized cff-version {:?}; parsed as 1.2.0",
                self.cff_version
            ));
        }
        out
    }

    /// Emits the recognized fields as CFF YAML.
    pub fn to_yaml(&self) -> String {
        serde_yaml::to_string(&YamlDoc::from(self)).expect("plain data serializes")
    }
}

/// Parses CFF text. Pure; performs no I/O.
pub fn parse_cff(raw_text: &str) -> Result<CffDocument, CffError> {
    let value: Value =
        serde_yaml::from_str(raw_text).map_err(|e| CffError::NotYaml(e.to_string()))?;
    let Value::Mapping(map) = value else {
        return Err(CffError::NotYaml("top level is not a mapping".into()));
    };
    let root = Fields::new(&map, "");

    let cff_version = root.required_text("cff-version")?;
    let message = root.required_text("message")?;
    let title = root.required_text("title")?;
    let authors = parse_authors(root.get("authors"), "authors")?;
    let date_released = root
        .optional_text("date-released")?
        .map(|d| parse_date(&d))
        .transpose()?;
    let preferred_citation = match root.get("preferred-citation") {
        None | Some(Value::Null) => None,
        Some(Value::Mapping(m)) => Some(parse_preferred(m)?),
        Some(_) => return Err(violation("preferred-citation must be a mapping")),
    };

    Ok(CffDocument {
        cff_version,
        message,
        title,
        authors,
        version: root.optional_text("version")?,
        doi: root.optional_text("doi")?,
        date_released,
        url: root.optional_text("url")?,
        repository_code: root.optional_text("repository-code")?,
        license: root.license()?,
        preferred_citation,
    })
}

fn violation(msg: impl Into<String>) -> CffError {
    CffError::SchemaViolation(msg.into())
}

fn parse_date(text: &str) -> Result<NaiveDate, CffError> {
    let bad = || CffError::BadDate(text.to_string());
    let b = text.as_bytes();
    let shape_ok = b.len() == 10
        && b[4] == b'-'
        && b[7] == b'-'
        && b.iter()
            .enumerate()
            .all(|(i, c)| i == 4 || i == 7 || c.is_ascii_digit());
    if !shape_ok {
        return Err(bad());
    }
    NaiveDate::parse_from_str(text, "%Y-%m-%d").map_err(|_| bad())
}

struct Fields<'a> {
    map: &'a Mapping,
    context: &'a str,
}

impl<'a> Fields<'a> {
    fn new(map: &'a Mapping, context: &'a str) -> Self {
        Self { map, context }
    }

    fn get(&self, key: &str) -> Option<&'a Value> {
        self.map.get(key)
    }

    fn path(&self, key: &str) -> String {
        if self.context.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.context)
        }
    }

    /// Strings, and numbers/booleans rendered as text. `None` for absent or
    /// null.
    fn optional_scalar(&self, key: &str) -> Result<Option<String>, CffError> {
        match self.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(Value::Number(n)) => Ok(Some(n.to_string())),
            Some(Value::Bool(b)) => Ok(Some(b.to_string())),
            Some(_) => Err(violation(format!("{} must be a scalar", self.path(key)))),
        }
    }

    fn optional_text(&self, key: &str) -> Result<Option<String>, CffError> {
        Ok(self
            .optional_scalar(key)?
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty()))
    }

    /// A non-empty string. Numbers are not accepted here.
    fn required_text(&self, key: &str) -> Result<String, CffError> {
        match self.get(key) {
            Some(Value::String(s)) if !s.trim().is_empty() => Ok(s.trim().to_string()),
            Some(Value::String(_)) => Err(violation(format!("{} is empty", self.path(key)))),
            None | Some(Value::Null) => Err(violation(format!("missing {}", self.path(key)))),
            Some(_) => Err(violation(format!("{} must be a string", self.path(key)))),
        }
    }

    /// A single SPDX id, or a list joined with ` OR `.
    fn license(&self) -> Result<Option<String>, CffError> {
        match self.get("license") {
            Some(Value::Sequence(items)) => {
                let ids = items
                    .iter()
                    .map(|v| match v {
                        Value::String(s) if !s.trim().is_empty() => Ok(s.trim().to_string()),
                        _ => Err(violation("license entries must be strings")),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((!ids.is_empty()).then(|| ids.join(" OR ")))
            }
            _ => self.optional_text("license"),
        }
    }
}

fn parse_authors(value: Option<&Value>, context: &str) -> Result<Vec<CffAuthor>, CffError> {
    let items = match value {
        Some(Value::Sequence(items)) if !items.is_empty() => items,
        Some(Value::Sequence(_)) => return Err(violation(format!("{context} is empty"))),
        None | Some(Value::Null) => return Err(violation(format!("missing {context}"))),
        Some(_) => return Err(violation(format!("{context} must be a list"))),
    };
    items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let Value::Mapping(map) = item else {
                return Err(violation(format!("{context}[{i}] must be a mapping")));
            };
            let ctx = format!("{context}[{i}]");
            let f = Fields::new(map, &ctx);
            let orcid = f.optional_text("orcid")?;
            if f.get("family-names").is_some() {
                let family_names = f.required_text("family-names")?;
                Ok(CffAuthor::Person {
                    family_names,
                    given_names: f.optional_text("given-names")?,
                    name_particle: f.optional_text("name-particle")?,
                    orcid,
                })
            } else if f.get("name").is_some() {
                Ok(CffAuthor::Entity {
                    name: f.required_text("name")?,
                    orcid,
                })
            } else {
                Err(violation(format!("{ctx} has neither family-names nor name")))
            }
        })
        .collect()
}

fn parse_preferred(map: &Mapping) -> Result<PreferredCitation, CffError> {
    let f = Fields::new(map, "preferred-citation");
    let entry_kind = f.required_text("type")?;
    let title = f.required_text("title")?;
    let authors = parse_authors(f.get("authors"), "preferred-citation.authors")?;
    let year = match f.optional_text("year")? {
        None => None,
        Some(y) => Some(
            y.parse::<i32>()
                .map_err(|_| violation(format!("preferred-citation.year {y:?} is not an integer")))?,
        ),
    };
    let pages = match (f.optional_text("start")?, f.optional_text("end")?) {
        (Some(s), Some(e)) => Some(format!("{s}--{e}")),
        (Some(s), None) => Some(s),
        (None, _) => None,
    };
    let journal = match f.optional_text("journal")? {
        Some(j) => Some(j),
        None => f.optional_text("collection-title")?,
    };
    Ok(PreferredCitation {
        entry_kind,
        title,
        authors,
        year,
        doi: f.optional_text("doi")?,
        journal,
        volume: f.optional_text("volume")?,
        pages,
        url: f.optional_text("url")?,
    })
}

#[derive(Serialize)]
#[serde(rename_all = "kebab-case")]
struct YamlDoc {
    cff_version: String,
    message: String,
    title: String,
    authors: Vec<YamlAuthor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    version: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    doi: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    date_released: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    url: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    repository_code: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    license: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    preferred_citation: Option<YamlPreferred>,
}

#[derive(Serialize)]
#[serde(rename_all = "kebab-case")]
struct YamlAuthor {
    #[serde(skip_serializing_if = "Option::is_none")]
    family_names: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    given_names: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    name_particle: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    orcid: Option<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "kebab-case")]
struct YamlPreferred {
    #[serde(rename = "type")]
    kind: String,
    title: String,
    authors: Vec<YamlAuthor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    year: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    doi: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    journal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    volume: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    start: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    end: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    url: Option<String>,
}

impl From<&CffAuthor> for YamlAuthor {
    fn from(a: &CffAuthor) -> Self {
        match a.clone() {
            CffAuthor::Person {
                family_names,
                given_names,
                name_particle,
                orcid,
            } => Self {
                family_names: Some(family_names),
                given_names,
                name_particle,
                name: None,
                orcid,
            },
            CffAuthor::Entity { name, orcid } => Self {
                family_names: None,
                given_names: None,
                name_particle: None,
                name: Some(name),
                orcid,
            },
        }
    }
}

impl From<&CffDocument> for YamlDoc {
    fn from(d: &CffDocument) -> Self {
        Self {
            cff_version: d.cff_version.clone(),
            message: d.message.clone(),
            title: d.title.clone(),
            authors: d.authors.iter().map(YamlAuthor::from).collect(),
            version: d.version.clone(),
            doi: d.doi.clone(),
            date_released: d.date_released.map(|x| x.format("%Y-%m-%d").to_string()),
            url: d.url.clone(),
            repository_code: d.repository_code.clone(),
            license: d.license.clone(),
            preferred_citation: d.preferred_citation.as_ref().map(|p| {
                let (start, end) = match p.pages.as_deref().map(|s| s.split_once("--")) {
                    Some(Some((s, e))) => (Some(s.to_string()), Some(e.to_string())),
                    Some(None) => (p.pages.clone(), None),
                    None => (None, None),
                };
                YamlPreferred {
                    kind: p.entry_kind.clone(),
                    title: p.title.clone(),
                    authors: p.authors.iter().map(YamlAuthor::from).collect(),
                    year: p.year,
                    doi: p.doi.clone(),
                    journal: p.journal.clone(),
                    volume: p.volume.clone(),
                    start,
                    end,
                    url: p.url.clone(),
                }
            }),
        }
    }
}
