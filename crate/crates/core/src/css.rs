//! Locates `@import` targets and `url(...)` tokens in CSS text.
//!
//! This is a tokenizer-level pass, not a parser: comments and strings are
//! skipped so that look-alikes inside them are ignored, and every URL comes
//! back with the byte span of its text (inside quotes or parentheses).

use alloc::vec::Vec;

use crate::html::ParseWarning;
use crate::scan::ByteSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CssUrlKind {
    Import,
    Url,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CssUrl {
    pub kind: CssUrlKind,
    pub span: ByteSpan,
    /// For imports: the whole `@import ...;` statement.
    pub rule: Option<ByteSpan>,
}

pub fn find_urls(css: &str) -> (Vec<CssUrl>, Vec<ParseWarning>) {
    let mut scanner = Scanner { bytes: css.as_bytes(), urls: Vec::new(), warnings: Vec::new() };
    scanner.run();
    (scanner.urls, scanner.warnings)
}

struct Scanner<'a> {
    bytes: &'a [u8],
    urls: Vec<CssUrl>,
    warnings: Vec<ParseWarning>,
}

fn is_ident(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'-' || b == b'_' || b >= 0x80
}

fn is_space(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\n' | b'\r' | 0x0c)
}

impl Scanner<'_> {
    fn warn(&mut self, offset: usize, message: &str) {
        self.warnings.push(ParseWarning { offset, message: message.into() });
    }

    fn starts_with_ci(&self, at: usize, word: &[u8]) -> bool {
        self.bytes.get(at..at + word.len()).is_some_and(|s| s.eq_ignore_ascii_case(word))
    }

    fn run(&mut self) {
        let mut i = 0;
        while i < self.bytes.len() {
            let b = self.bytes[i];
            i = match b {
                b'/' if self.bytes.get(i + 1) == Some(&b'*') => self.skip_comment(i),
                b'"' | b'\'' => self.skip_string(i).1,
                b'\\' => i + 2,
                b'@' if self.starts_with_ci(i + 1, b"import")
                    && !self.bytes.get(i + 7).copied().is_some_and(is_ident) =>
                {
                    self.import(i)
                }
                b'u' | b'U'
                    if self.starts_with_ci(i, b"url(") && (i == 0 || !is_ident(self.bytes[i - 1])) =>
                {
                    match self.url_function(i, CssUrlKind::Url, None) {
                        Some(next) => next,
                        None => i + 4,
                    }
                }
                _ => i + 1,
            };
        }
    }

    fn skip_comment(&mut self, start: usize) -> usize {
        match self.bytes[start + 2..].windows(2).position(|w| w == b"*/") {
            Some(rel) => start + 2 + rel + 2,
            None => {
                self.warn(start, "unterminated comment");
                self.bytes.len()
            }
        }
    }

    /// Returns the span inside the quotes and the offset after the string.
    fn skip_string(&mut self, start: usize) -> (ByteSpan, usize) {
        let quote = self.bytes[start];
        let mut i = start + 1;
        while i < self.bytes.len() {
            match self.bytes[i] {
                b'\\' => i += 2,
                b if b == quote => return (ByteSpan::new(start + 1, i), i + 1),
                b'\n' => {
                    self.warn(start, "unterminated string");
                    return (ByteSpan::new(start + 1, i), i);
                }
                _ => i += 1,
            }
        }
        self.warn(start, "unterminated string");
        let end = self.bytes.len();
        (ByteSpan::new(start + 1, end.max(start + 1)), end)
    }

    fn skip_space_and_comments(&mut self, mut i: usize) -> usize {
        loop {
            while self.bytes.get(i).copied().is_some_and(is_space) {
                i += 1;
            }
            if self.bytes.get(i) == Some(&b'/') && self.bytes.get(i + 1) == Some(&b'*') {
                i = self.skip_comment(i);
            } else {
                return i;
            }
        }
    }

    fn import(&mut self, start: usize) -> usize {
        let rule_end = self.statement_end(start);
        let at = self.skip_space_and_comments(start + 7);
        match self.bytes.get(at) {
            Some(b'"' | b'\'') => {
                let (span, _) = self.skip_string(at);
                self.push(CssUrlKind::Import, span, Some(ByteSpan::new(start, rule_end)));
            }
            Some(b'u' | b'U') if self.starts_with_ci(at, b"url(") => {
                self.url_function(at, CssUrlKind::Import, Some(ByteSpan::new(start, rule_end)));
            }
            _ => self.warn(start, "@import without a URL"),
        }
        rule_end
    }

    /// Offset just past the `;` ending the statement at `start`, or the
    /// offset of a closing `}` / end of input.
    fn statement_end(&mut self, start: usize) -> usize {
        let mut i = start;
        while i < self.bytes.len() {
            match self.bytes[i] {
                b';' => return i + 1,
                b'}' => return i,
                b'"' | b'\'' => i = self.skip_string_quiet(i),
                b'\\' => i += 2,
                b'/' if self.bytes.get(i + 1) == Some(&b'*') => {
                    i = match self.bytes[i + 2..].windows(2).position(|w| w == b"*/") {
                        Some(rel) => i + 2 + rel + 2,
                        None => self.bytes.len(),
                    }
                }
                _ => i += 1,
            }
        }
        self.bytes.len()
    }

    fn skip_string_quiet(&self, start: usize) -> usize {
        let quote = self.bytes[start];
        let mut i = start + 1;
        while i < self.bytes.len() {
            match self.bytes[i] {
                b'\\' => i += 2,
                b if b == quote => return i + 1,
                b'\n' => return i,
                _ => i += 1,
            }
        }
        self.bytes.len()
    }

    /// Parses `url(` at `start`; returns the offset after `)`.
    fn url_function(&mut self, start: usize, kind: CssUrlKind, rule: Option<ByteSpan>) -> Option<usize> {
        let open = start + 4;
        let mut i = open;
        while self.bytes.get(i).copied().is_some_and(is_space) {
            i += 1;
        }
        let span = match self.bytes.get(i) {
            Some(b'"' | b'\'') => {
                let (span, after) = self.skip_string(i);
                i = after;
                span
            }
            _ => {
                let value_start = i;
                while let Some(&b) = self.bytes.get(i) {
                    if b == b')' || is_space(b) {
                        break;
                    }
                    if b == b'\\' {
                        i += 1;
                    }
                    i += 1;
                }
                ByteSpan::new(value_start, i.min(self.bytes.len()))
            }
        };
        while self.bytes.get(i).copied().is_some_and(is_space) {
            i += 1;
        }
        let end = match self.bytes.get(i) {
            Some(b')') => i + 1,
            _ => {
                self.warn(start, "unterminated url()");
                self.bytes.len().min(i.max(span.end))
            }
        };
        self.push(kind, span, rule);
        Some(end)
    }

    fn push(&mut self, kind: CssUrlKind, span: ByteSpan, rule: Option<ByteSpan>) {
        if !span.is_empty() {
            self.urls.push(CssUrl { kind, span, rule });
        }
    }
}
