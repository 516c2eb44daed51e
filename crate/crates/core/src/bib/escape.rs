/// Escapes plain text for use inside a brace-delimited BibTeX value.
///
/// `& % $ # _ { }` get a leading backslash; `~`, `^` and `\` become
/// `\textasciitilde{}`, `\textasciicircum{}` and `\textbackslash{}`.
/// Everything else, including non-ASCII text, passes through.
pub fn escape_bibtex(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '&' | '%' | '$' | '#' | '_' | '{' | '}' => {
                out.push('\\');
                out.push(c);
            }
            '~' => out.push_str(r"\textasciitilde{}"),
            '^' => out.push_str(r"\textasciicircum{}"),
            '\\' => out.push_str(r"\textbackslash{}"),
            _ => out.push(c),
        }
    }
    out
}

const CONTROL_WORDS: [(&str, char); 3] = [
    (r"\textasciitilde{}", '~'),
    (r"\textasciicircum{}", '^'),
    (r"\textbackslash{}", '\\'),
];

/// Inverse of [`escape_bibtex`] on its image. Other TeX markup is left alone.
pub fn unescape_bibtex(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    let mut rest = value;
    while let Some(pos) = rest.find('\\') {
        out.push_str(&rest[..pos]);
        rest = &rest[pos..];
        if let Some((word, c)) = CONTROL_WORDS.iter().find(|(w, _)| rest.starts_with(w)) {
            out.push(*c);
            rest = &rest[word.len()..];
            continue;
        }
        let mut it = rest[1..].chars();
        match it.next() {
            Some(c @ ('&' | '%' | '$' | '#' | '_' | '{' | '}')) => {
                out.push(c);
                rest = &rest[2..];
            }
            _ => {
                out.push('\\');
                rest = &rest[1..];
            }
        }
    }
    out.push_str(rest);
    out
}
