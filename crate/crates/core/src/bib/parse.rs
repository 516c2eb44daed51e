use super::{BibEntry, EntryError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {position}: {reason}")]
    Syntax { position: usize, reason: String },
}

/// Parses text holding exactly one entry. Values are returned as TeX
/// source, without unescaping, so `parse_entry(&e.to_bibtex()) == e`.
///
/// Accepts brace-delimited, quote-delimited and bare (alphanumeric) values;
/// entry types and field names are case-folded to lowercase.
pub fn parse_entry(text: &str) -> Result<BibEntry, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let entry = p.entry()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("trailing content after entry"));
    }
    Ok(entry)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, reason: &str) -> ParseError {
        ParseError::Syntax {
            position: self.pos,
            reason: reason.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(_) => Err(self.error(&format!("expected {want:?}"))),
            None => Err(self.error(&format!("unexpected end of input, expected {want:?}"))),
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(&pred) {
            self.bump();
        }
        &self.src[start..self.pos]
    }

    fn entry(&mut self) -> Result<BibEntry, ParseError> {
        self.expect('@')?;
        let ty = self.take_while(|c| c.is_ascii_alphabetic());
        if ty.is_empty() {
            return Err(self.error("missing entry type"));
        }
        let ty = ty.to_ascii_lowercase();
        self.expect('{')?;
        self.skip_ws();
        let key_start = self.pos;
        let key = self.take_while(|c| !c.is_whitespace() && !matches!(c, ',' | '{' | '}'));
        if key.is_empty() {
            return Err(self.error("missing citation key"));
        }
        let mut entry = BibEntry::new(&ty, key).map_err(|e| ParseError::Syntax {
            position: key_start,
            reason: e.to_string(),
        })?;
        self.expect(',')?;

        loop {
            self.skip_ws();
            match self.peek() {
                Some('}') => {
                    self.bump();
                    return Ok(entry);
                }
                None => return Err(self.error("unexpected end of input inside entry")),
                _ => {}
            }
            let name_start = self.pos;
            let name = self.take_while(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-'));
            if name.is_empty() {
                return Err(self.error("expected field name"));
            }
            let name = name.to_ascii_lowercase();
            self.expect('=')?;
            self.skip_ws();
            let value = self.value()?;
            if entry.get(&name).is_some() {
                return Err(ParseError::Syntax {
                    position: name_start,
                    reason: format!("duplicate field {name:?}"),
                });
            }
            entry.set(&name, value).map_err(|e| ParseError::Syntax {
                position: name_start,
                reason: match e {
                    EntryError::InvalidFieldName(n) => format!("invalid field name {n:?}"),
                    other => other.to_string(),
                },
            })?;
            self.skip_ws();
            match self.peek() {
                Some(',') => {
                    self.bump();
                }
                Some('}') => {}
                Some(_) => return Err(self.error("expected ',' or '}' after field value")),
                None => return Err(self.error("unexpected end of input after field value")),
            }
        }
    }

    fn value(&mut self) -> Result<&'a str, ParseError> {
        match self.peek() {
            Some('{') => {
                self.bump();
                self.delimited(None)
            }
            Some('"') => {
                self.bump();
                self.delimited(Some('"'))
            }
            Some(c) if c.is_ascii_alphanumeric() => Ok(self.take_while(|c| c.is_ascii_alphanumeric())),
            Some(_) => Err(self.error("expected field value")),
            None => Err(self.error("unexpected end of input, expected field value")),
        }
    }

    /// Reads up to the matching close brace (or `quote` at depth zero) and
    /// consumes the delimiter. Backslash escapes one character.
    fn delimited(&mut self, quote: Option<char>) -> Result<&'a str, ParseError> {
        let start = self.pos;
        let mut depth = 0usize;
        loop {
            let here = self.pos;
            match self.bump() {
                None => return Err(self.error("unterminated value")),
                Some('\\') => {
                    if self.bump().is_none() {
                        return Err(self.error("unterminated value"));
                    }
                }
                Some('{') => depth += 1,
                Some('}') if depth == 0 => {
                    if quote.is_some() {
                        return Err(self.error("unbalanced '}' in quoted value"));
                    }
                    return Ok(&self.src[start..here]);
                }
                Some('}') => depth -= 1,
                Some(c) if Some(c) == quote && depth == 0 => return Ok(&self.src[start..here]),
                Some(_) => {}
            }
        }
    }
}
