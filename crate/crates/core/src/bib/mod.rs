//! BibTeX entry model and its byte-exact text form.
//!
//! Field values held by a [`BibEntry`] are TeX source: they are emitted
//! between braces exactly as stored. Plain text should go through
//! [`BibEntry::set_text`], which applies [`escape_bibtex`] first.

mod escape;
mod key;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

pub use escape::{escape_bibtex, unescape_bibtex};
pub use key::{generate_key, key_stem, KeyError};
pub use parse::{parse_entry, ParseError};

/// Fields that are emitted first, in this order. Everything else follows
/// alphabetically.
pub const CANONICAL_FIELD_ORDER: [&str; 12] = [
    "author", "title", "version", "year", "month", "journal", "volume", "pages", "doi", "url",
    "license", "note",
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EntryError {
    #[error("invalid entry type {0:?}: expected lowercase ASCII letters")]
    InvalidType(String),
    #[error("invalid citation key {0:?}")]
    InvalidKey(String),
    #[error("invalid field name {0:?}: expected lowercase ASCII")]
    InvalidFieldName(String),
    #[error("value of field {field:?} is not well-formed TeX (unbalanced braces or dangling backslash)")]
    MalformedValue { field: String },
}

/// A single BibTeX entry: `@type{key, name = {value}, ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BibEntry {
    entry_type: String,
    key: String,
    fields: BTreeMap<String, String>,
}

impl BibEntry {
    pub fn new(entry_type: &str, key: &str) -> Result<Self, EntryError> {
        if !is_valid_entry_type(entry_type) {
            return Err(EntryError::InvalidType(entry_type.to_string()));
        }
        if !is_valid_key(key) {
            return Err(EntryError::InvalidKey(key.to_string()));
        }
        Ok(Self {
            entry_type: entry_type.to_string(),
            key: key.to_string(),
            fields: BTreeMap::new(),
        })
    }

    pub fn entry_type(&self) -> &str {
        &self.entry_type
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn set_key(&mut self, key: &str) -> Result<(), EntryError> {
        if !is_valid_key(key) {
            return Err(EntryError::InvalidKey(key.to_string()));
        }
        self.key = key.to_string();
        Ok(())
    }

    /// Stores a TeX value verbatim. Replaces any previous value of `name`.
    pub fn set(&mut self, name: &str, tex_value: impl Into<String>) -> Result<(), EntryError> {
        if !is_valid_field_name(name) {
            return Err(EntryError::InvalidFieldName(name.to_string()));
        }
        let value = tex_value.into();
        if !is_well_formed_tex(&value) {
            return Err(EntryError::MalformedValue {
                field: name.to_string(),
            });
        }
        self.fields.insert(name.to_string(), value);
        Ok(())
    }

    /// Escapes `text` and stores it. Only fails on an invalid field name.
    pub fn set_text(&mut self, name: &str, text: &str) -> Result<(), EntryError> {
        self.set(name, escape_bibtex(text))
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.fields.get(name).map(String::as_str)
    }

    pub fn remove(&mut self, name: &str) -> Option<String> {
        self.fields.remove(name)
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    /// Fields in canonical serialization order.
    pub fn fields(&self) -> impl Iterator<Item = (&str, &str)> {
        let known = CANONICAL_FIELD_ORDER
            .iter()
            .filter_map(|name| self.fields.get_key_value(*name));
        let rest = self
            .fields
            .iter()
            .filter(|(name, _)| !CANONICAL_FIELD_ORDER.contains(&name.as_str()));
        known
            .chain(rest)
            .map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Byte-deterministic BibTeX text, terminated by a newline.
    pub fn to_bibtex(&self) -> String {
        let mut out = format!("@{}{{{},\n", self.entry_type, self.key);
        for (name, value) in self.fields() {
            out.push_str("  ");
            out.push_str(name);
            out.push_str(" = {");
            out.push_str(value);
            out.push_str("},\n");
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for BibEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bibtex())
    }
}

/// Free-function form of [`BibEntry::to_bibtex`].
pub fn serialize(entry: &BibEntry) -> String {
    entry.to_bibtex()
}

fn is_valid_entry_type(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_lowercase())
}

pub(crate) fn is_valid_key(s: &str) -> bool {
    let mut bytes = s.bytes();
    match bytes.next() {
        Some(b) if b.is_ascii_alphabetic() => {}
        _ => return false,
    }
    bytes.all(|b| b.is_ascii_alphanumeric() || matches!(b, b':' | b'_' | b'-'))
}

fn is_valid_field_name(s: &str) -> bool {
    let mut bytes = s.bytes();
    match bytes.next() {
        Some(b) if b.is_ascii_lowercase() => {}
        _ => return false,
    }
    bytes.all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || matches!(b, b'_' | b'-'))
}

/// Braces balance once backslash-escaped characters are skipped, and no
/// backslash is left dangling at the end.
pub(crate) fn is_well_formed_tex(s: &str) -> bool {
    let mut depth: usize = 0;
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => {
                if chars.next().is_none() {
                    return false;
                }
            }
            '{' => depth += 1,
            '}' => {
                if depth == 0 {
                    return false;
                }
                depth -= 1;
            }
            _ => {}
        }
    }
    depth == 0
}
