//! Lenient, span-preserving HTML tokenizer.
//!
//! Only the structure the bundler needs is recovered: start tags with their
//! attributes, end tags, comments, and the raw contents of elements such as
//! `<script>` and `<style>`. Nothing is reserialized; every token carries
//! byte offsets into the input so callers can splice the original text.
//! Malformed markup yields warnings and a best-effort token stream.

use alloc::borrow::Cow;
use alloc::string::String;
use alloc::vec::Vec;

use crate::scan::ByteSpan;

/// Elements whose content is not markup.
const RAW_TEXT_ELEMENTS: &[&str] = &[
    "script", "style", "textarea", "title", "xmp", "iframe", "noembed", "noframes", "noscript",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttrValue<'a> {
    pub raw: &'a str,
    /// Span of the value without surrounding quotes.
    pub span: ByteSpan,
    pub quote: Option<char>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute<'a> {
    pub name: &'a str,
    /// From the first byte of the name through the closing quote (or the
    /// last byte of an unquoted value).
    pub span: ByteSpan,
    pub value: Option<AttrValue<'a>>,
}

impl Attribute<'_> {
    pub fn is(&self, name: &str) -> bool {
        self.name.eq_ignore_ascii_case(name)
    }
}

/// Contents of a raw-text element, attached to its start tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawContent {
    pub content: ByteSpan,
    /// Missing when the element runs to the end of the document.
    pub end_tag: Option<ByteSpan>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StartTag<'a> {
    pub name: &'a str,
    /// From `<` through `>`.
    pub span: ByteSpan,
    pub attrs: Vec<Attribute<'a>>,
    pub self_closing: bool,
    pub raw: Option<RawContent>,
}

impl<'a> StartTag<'a> {
    pub fn is(&self, name: &str) -> bool {
        self.name.eq_ignore_ascii_case(name)
    }

    pub fn attr(&self, name: &str) -> Option<&Attribute<'a>> {
        self.attrs.iter().find(|a| a.is(name))
    }

    pub fn attr_value(&self, name: &str) -> Option<&AttrValue<'a>> {
        self.attr(name).and_then(|a| a.value.as_ref())
    }

    /// End of the whole element when it has raw content, otherwise end of
    /// the start tag.
    pub fn element_end(&self) -> usize {
        match &self.raw {
            Some(RawContent { end_tag: Some(end), .. }) => end.end,
            Some(RawContent { content, .. }) => content.end,
            None => self.span.end,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token<'a> {
    Start(StartTag<'a>),
    End { name: &'a str, span: ByteSpan },
    Comment { span: ByteSpan },
    /// Doctype, processing instruction, CDATA and other `<!`/`<?` forms.
    Declaration { span: ByteSpan },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub offset: usize,
    pub message: String,
}

/// Tokenizes `html`, returning the tokens in document order and any
/// warnings about malformed markup.
pub fn tokenize(html: &str) -> (Vec<Token<'_>>, Vec<ParseWarning>) {
    let mut t = Tokenizer { src: html, bytes: html.as_bytes(), pos: 0, tokens: Vec::new(), warnings: Vec::new() };
    t.run();
    (t.tokens, t.warnings)
}

struct Tokenizer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    tokens: Vec<Token<'a>>,
    warnings: Vec<ParseWarning>,
}

fn is_space(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\n' | b'\r' | 0x0c)
}

impl<'a> Tokenizer<'a> {
    fn warn(&mut self, offset: usize, message: &str) {
        self.warnings.push(ParseWarning { offset, message: message.into() });
    }

    fn peek(&self, at: usize) -> Option<u8> {
        self.bytes.get(at).copied()
    }

    fn find(&self, from: usize, needle: &[u8]) -> Option<usize> {
        self.bytes[from..].windows(needle.len()).position(|w| w == needle).map(|i| i + from)
    }

    fn run(&mut self) {
        while let Some(rel) = self.bytes[self.pos..].iter().position(|&b| b == b'<') {
            let start = self.pos + rel;
            match (self.peek(start + 1), self.peek(start + 2)) {
                (Some(b'!'), _) if self.bytes[start..].starts_with(b"<!--") => self.comment(start),
                (Some(b'!'), _) | (Some(b'?'), _) => self.declaration(start),
                (Some(b'/'), Some(c)) if c.is_ascii_alphabetic() => self.end_tag(start),
                (Some(b'/'), Some(b'>')) => self.pos = start + 3,
                (Some(b'/'), Some(_)) => self.declaration(start),
                (Some(c), _) if c.is_ascii_alphabetic() => self.start_tag(start),
                _ => self.pos = start + 1,
            }
        }
        self.pos = self.bytes.len();
    }

    fn comment(&mut self, start: usize) {
        let body = start + 4;
        let end = if self.bytes[body..].starts_with(b">") {
            body + 1
        } else if self.bytes[body..].starts_with(b"->") {
            body + 2
        } else {
            match (self.find(body, b"-->"), self.find(body, b"--!>")) {
                (Some(a), Some(b)) if b < a => b + 4,
                (Some(a), _) => a + 3,
                (None, Some(b)) => b + 4,
                (None, None) => {
                    self.warn(start, "unterminated comment runs to end of document");
                    self.bytes.len()
                }
            }
        };
        self.tokens.push(Token::Comment { span: ByteSpan::new(start, end) });
        self.pos = end;
    }

    fn declaration(&mut self, start: usize) {
        let end = match self.find(start, b">") {
            Some(gt) => gt + 1,
            None => {
                self.warn(start, "unterminated declaration");
                self.bytes.len()
            }
        };
        self.tokens.push(Token::Declaration { span: ByteSpan::new(start, end) });
        self.pos = end;
    }

    fn end_tag(&mut self, start: usize) {
        let name_start = start + 2;
        let name_end = self.scan_name(name_start);
        let end = match self.find(name_end, b">") {
            Some(gt) => gt + 1,
            None => {
                self.warn(start, "unterminated end tag");
                self.bytes.len()
            }
        };
        self.tokens.push(Token::End { name: &self.src[name_start..name_end], span: ByteSpan::new(start, end) });
        self.pos = end;
    }

    fn scan_name(&self, mut at: usize) -> usize {
        while let Some(b) = self.peek(at) {
            if is_space(b) || b == b'/' || b == b'>' {
                break;
            }
            at += 1;
        }
        at
    }

    fn skip_space(&self, mut at: usize) -> usize {
        while self.peek(at).is_some_and(is_space) {
            at += 1;
        }
        at
    }

    fn start_tag(&mut self, start: usize) {
        let name_start = start + 1;
        let name_end = self.scan_name(name_start);
        let name = &self.src[name_start..name_end];
        let mut attrs = Vec::new();
        let mut self_closing = false;
        let mut at = name_end;
        let end = loop {
            while let Some(b) = self.peek(at) {
                if is_space(b) {
                    at += 1;
                } else if b == b'/' {
                    self_closing = self.peek(at + 1) == Some(b'>');
                    at += 1;
                } else {
                    break;
                }
            }
            match self.peek(at) {
                None => {
                    self.warn(start, "unterminated start tag");
                    break self.bytes.len();
                }
                Some(b'>') => break at + 1,
                Some(_) => {
                    self_closing = false;
                    let (attr, next) = self.attribute(at);
                    attrs.push(attr);
                    at = next;
                }
            }
        };
        let mut tag = StartTag { name, span: ByteSpan::new(start, end), attrs, self_closing, raw: None };
        self.pos = end;
        if RAW_TEXT_ELEMENTS.iter().any(|raw| tag.is(raw)) {
            tag.raw = Some(self.raw_content(name, end));
        }
        self.tokens.push(Token::Start(tag));
    }

    fn attribute(&mut self, start: usize) -> (Attribute<'a>, usize) {
        // The first character may be `=`; after that it terminates the name.
        let mut at = start + 1;
        while let Some(b) = self.peek(at) {
            if is_space(b) || b == b'/' || b == b'>' || b == b'=' {
                break;
            }
            at += 1;
        }
        let name = &self.src[start..at];
        let after_name = self.skip_space(at);
        if self.peek(after_name) != Some(b'=') {
            return (Attribute { name, span: ByteSpan::new(start, at), value: None }, at);
        }
        let value_start = self.skip_space(after_name + 1);
        let (value, end) = match self.peek(value_start) {
            Some(q @ (b'"' | b'\'')) => {
                let inner = value_start + 1;
                match self.find(inner, &[q]) {
                    Some(close) => (
                        AttrValue { raw: &self.src[inner..close], span: ByteSpan::new(inner, close), quote: Some(q as char) },
                        close + 1,
                    ),
                    None => {
                        self.warn(value_start, "unterminated quoted attribute value");
                        let close = self.bytes.len();
                        (
                            AttrValue { raw: &self.src[inner..close], span: ByteSpan::new(inner, close), quote: Some(q as char) },
                            close,
                        )
                    }
                }
            }
            _ => {
                let mut close = value_start;
                while let Some(b) = self.peek(close) {
                    if is_space(b) || b == b'>' {
                        break;
                    }
                    close += 1;
                }
                (AttrValue { raw: &self.src[value_start..close], span: ByteSpan::new(value_start, close), quote: None }, close)
            }
        };
        (Attribute { name, span: ByteSpan::new(start, end), value: Some(value) }, end)
    }

    fn raw_content(&mut self, name: &str, content_start: usize) -> RawContent {
        let mut at = content_start;
        while let Some(rel) = self.bytes[at..].windows(2).position(|w| w == b"</") {
            let candidate = at + rel;
            let name_start = candidate + 2;
            let name_end = name_start + name.len();
            let matches_name = self.bytes.get(name_start..name_end).is_some_and(|n| n.eq_ignore_ascii_case(name.as_bytes()));
            let terminated = matches!(self.peek(name_end), None | Some(b'>' | b'/') ) || self.peek(name_end).is_some_and(is_space);
            if matches_name && terminated {
                let end = match self.find(name_end, b">") {
                    Some(gt) => gt + 1,
                    None => {
                        self.warn(candidate, "unterminated end tag");
                        self.bytes.len()
                    }
                };
                self.pos = end;
                return RawContent { content: ByteSpan::new(content_start, candidate), end_tag: Some(ByteSpan::new(candidate, end)) };
            }
            at = candidate + 2;
        }
        self.warn(content_start, "element content runs to end of document");
        self.pos = self.bytes.len();
        RawContent { content: ByteSpan::new(content_start, self.bytes.len()), end_tag: None }
    }
}

/// Decodes the character references that realistically appear in URL-valued
/// attributes. Unknown references are left as written.
pub fn decode_entities(raw: &str) -> Cow<'_, str> {
    if !raw.contains('&') {
        return Cow::Borrowed(raw);
    }
    let mut out = String::with_capacity(raw.len());
    let mut rest = raw;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        rest = &rest[amp..];
        let Some(semi) = rest[1..].find(';').map(|i| i + 1).filter(|&i| i <= 10) else {
            out.push('&');
            rest = &rest[1..];
            continue;
        };
        let entity = &rest[1..semi];
        let decoded = match entity {
            "amp" => Some('&'),
            "quot" => Some('"'),
            "apos" => Some('\''),
            "lt" => Some('<'),
            "gt" => Some('>'),
            _ => entity
                .strip_prefix("#x")
                .or_else(|| entity.strip_prefix("#X"))
                .and_then(|hex| u32::from_str_radix(hex, 16).ok())
                .or_else(|| entity.strip_prefix('#').and_then(|dec| dec.parse().ok()))
                .and_then(char::from_u32),
        };
        match decoded {
            Some(c) => {
                out.push(c);
                rest = &rest[semi + 1..];
            }
            None => {
                out.push('&');
                rest = &rest[1..];
            }
        }
    }
    out.push_str(rest);
    Cow::Owned(out)
}
