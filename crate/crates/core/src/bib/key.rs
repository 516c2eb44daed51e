use std::collections::BTreeSet;

use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KeyError {
    /// Nothing usable is left of the name once it is reduced to ASCII
    /// letters and digits. Callers fall back to the package name.
    #[error("cannot derive a citation key from {0:?}")]
    Unkeyable(String),
    #[error("year {0} is not a four-digit year")]
    BadYear(i32),
}

/// Reduces a name to `[A-Za-z0-9]`, dropping diacritics via decomposition.
pub fn key_stem(name: &str) -> String {
    name.nfd().filter(char::is_ascii_alphanumeric).collect()
}

/// `FamilyYear`, with `a`, `b`, ... `z`, `aa`, ... appended until the key is
/// not in `taken`.
pub fn generate_key(
    primary_family_name: &str,
    year: i32,
    taken: &BTreeSet<String>,
) -> Result<String, KeyError> {
    if !(1000..=9999).contains(&year) {
        return Err(KeyError::BadYear(year));
    }
    let stem = key_stem(primary_family_name);
    if !stem.starts_with(|c: char| c.is_ascii_alphabetic()) {
        return Err(KeyError::Unkeyable(primary_family_name.to_string()));
    }
    let base = format!("{stem}{year}");
    if !taken.contains(&base) {
        return Ok(base);
    }
    (1..)
        .map(|n| format!("{base}{}", alpha_suffix(n)))
        .find(|k| !taken.contains(k))
        .ok_or_else(|| KeyError::Unkeyable(primary_family_name.to_string()))
}

/// Bijective base-26: 1 → a, 26 → z, 27 → aa.
fn alpha_suffix(mut n: u64) -> String {
    let mut out = Vec::new();
    while n > 0 {
        n -= 1;
        out.push(b'a' + (n % 26) as u8);
        n /= 26;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}
