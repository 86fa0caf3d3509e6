//! Asset reference discovery for HTML and CSS documents.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::Serialize;

use crate::css::{self, CssUrlKind};
use crate::html::{self, StartTag, Token};

/// Half-open byte range `[start, end)` into a source document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ByteSpan {
    pub start: usize,
    pub end: usize,
}

impl ByteSpan {
    pub const fn new(start: usize, end: usize) -> Self {
        ByteSpan { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn slice<'a>(&self, text: &'a str) -> &'a str {
        &text[self.start..self.end]
    }

    pub fn shift(self, by: usize) -> Self {
        ByteSpan::new(self.start + by, self.end + by)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssetKind {
    Script,
    Stylesheet,
    Image,
    Font,
    Icon,
    Media,
    CssImport,
    CssUrl,
    AssetMapEntry,
}

impl AssetKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AssetKind::Script => "script",
            AssetKind::Stylesheet => "stylesheet",
            AssetKind::Image => "image",
            AssetKind::Font => "font",
            AssetKind::Icon => "icon",
            AssetKind::Media => "media",
            AssetKind::CssImport => "css-import",
            AssetKind::CssUrl => "css-url",
            AssetKind::AssetMapEntry => "asset-map-entry",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UrlClass {
    Relative,
    AbsoluteRemote,
    DataUri,
    FragmentOnly,
    ProtocolRelative,
}

impl UrlClass {
    pub fn is_remote(self) -> bool {
        matches!(self, UrlClass::AbsoluteRemote | UrlClass::ProtocolRelative)
    }

    /// Data URIs and in-document fragments never need inlining.
    pub fn is_self_contained(self) -> bool {
        matches!(self, UrlClass::DataUri | UrlClass::FragmentOnly)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceKind {
    Html,
    Css,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RefSource {
    pub kind: SourceKind,
    pub path: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssetRef {
    pub kind: AssetKind,
    pub url: String,
    pub url_class: UrlClass,
    pub source: RefSource,
    pub byte_span: ByteSpan,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScanResult {
    pub refs: Vec<AssetRef>,
    pub parse_warnings: Vec<(usize, String)>,
}

pub fn classify_url(url: &str) -> UrlClass {
    let bytes = url.as_bytes();
    if bytes.len() >= 5 && bytes[..5].eq_ignore_ascii_case(b"data:") {
        return UrlClass::DataUri;
    }
    if url.starts_with('#') {
        return UrlClass::FragmentOnly;
    }
    if url.starts_with("//") {
        return UrlClass::ProtocolRelative;
    }
    if let Some(colon) = url.find("://") {
        let scheme = &bytes[..colon];
        let valid = scheme.first().is_some_and(u8::is_ascii_alphabetic)
            && scheme.iter().all(|b| b.is_ascii_alphanumeric() || matches!(b, b'+' | b'-' | b'.'));
        if valid {
            return UrlClass::AbsoluteRemote;
        }
    }
    UrlClass::Relative
}

/// One URL-valued attribute occurrence inside a start tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct TagUrl {
    pub kind: AssetKind,
    pub span: ByteSpan,
}

fn rel_tokens<'a>(tag: &'a StartTag<'_>) -> impl Iterator<Item = &'a str> {
    tag.attr_value("rel").map(|v| v.raw).unwrap_or("").split_ascii_whitespace()
}

/// URL-bearing attributes of the covered element kinds, in attribute order,
/// regardless of URL class.
pub(crate) fn tag_urls(tag: &StartTag<'_>) -> Vec<TagUrl> {
    let mut out = Vec::new();
    let single = |name: &str, kind: AssetKind, out: &mut Vec<TagUrl>| {
        if let Some(value) = tag.attr_value(name) {
            let span = trim_span(value.raw, value.span);
            if !span.is_empty() {
                out.push(TagUrl { kind, span });
            }
        }
    };
    if tag.is("script") {
        single("src", AssetKind::Script, &mut out);
    } else if tag.is("link") {
        if rel_tokens(tag).any(|t| t.eq_ignore_ascii_case("stylesheet")) {
            single("href", AssetKind::Stylesheet, &mut out);
        } else if rel_tokens(tag).any(|t| t.eq_ignore_ascii_case("icon")) {
            single("href", AssetKind::Icon, &mut out);
        }
    } else if tag.is("img") || tag.is("source") {
        // Attribute order decides document order when both are present.
        for attr in &tag.attrs {
            let Some(value) = &attr.value else { continue };
            if attr.is("src") {
                let kind = if tag.is("img") { AssetKind::Image } else { AssetKind::Media };
                let span = trim_span(value.raw, value.span);
                if !span.is_empty() {
                    out.push(TagUrl { kind, span });
                }
            } else if attr.is("srcset") {
                out.extend(
                    srcset_candidates(value.raw)
                        .into_iter()
                        .map(|span| TagUrl { kind: AssetKind::Image, span: span.shift(value.span.start) }),
                );
            }
        }
    } else if tag.is("video") {
        single("poster", AssetKind::Image, &mut out);
    }
    out
}

fn trim_span(raw: &str, span: ByteSpan) -> ByteSpan {
    let is_ws = |c: char| matches!(c, ' ' | '\t' | '\n' | '\r' | '\x0c');
    let lead = raw.len() - raw.trim_start_matches(is_ws).len();
    let trail = raw.len() - raw.trim_end_matches(is_ws).len();
    if lead == raw.len() {
        return ByteSpan::new(span.start, span.start);
    }
    ByteSpan::new(span.start + lead, span.end - trail)
}

/// Spans (relative to `value`) of each candidate URL in a `srcset` value,
/// following the comma-separated candidate grammar: a URL is a run of
/// non-whitespace with trailing commas removed; descriptors run to the next
/// comma outside parentheses.
pub(crate) fn srcset_candidates(value: &str) -> Vec<ByteSpan> {
    let bytes = value.as_bytes();
    let is_ws = |b: u8| matches!(b, b' ' | b'\t' | b'\n' | b'\r' | 0x0c);
    let mut out = Vec::new();
    let mut i = 0;
    loop {
        while i < bytes.len() && (is_ws(bytes[i]) || bytes[i] == b',') {
            i += 1;
        }
        if i >= bytes.len() {
            break;
        }
        let start = i;
        while i < bytes.len() && !is_ws(bytes[i]) {
            i += 1;
        }
        let mut end = i;
        let had_trailing_comma = bytes[start..end].ends_with(b",");
        while end > start && bytes[end - 1] == b',' {
            end -= 1;
        }
        if end > start {
            out.push(ByteSpan::new(start, end));
        }
        if had_trailing_comma {
            continue;
        }
        let mut depth = 0usize;
        while i < bytes.len() {
            match bytes[i] {
                b'(' => depth += 1,
                b')' => depth = depth.saturating_sub(1),
                b',' if depth == 0 => break,
                _ => {}
            }
            i += 1;
        }
    }
    out
}

fn make_ref(kind: AssetKind, url: &str, span: ByteSpan, source_kind: SourceKind, path: &str) -> Option<AssetRef> {
    let url_class = classify_url(url);
    if url_class.is_self_contained() {
        return None;
    }
    Some(AssetRef {
        kind,
        url: url.to_string(),
        url_class,
        source: RefSource { kind: source_kind, path: path.to_string() },
        byte_span: span,
    })
}

/// Extracts asset references from an HTML document.
///
/// Covered: `script[src]`, `link[rel~=stylesheet][href]`,
/// `link[rel~=icon][href]`, `img[src]`, `img[srcset]`, `source[src]`,
/// `source[srcset]`, `video[poster]`, and everything [`scan_css`] finds in
/// inline `<style>` elements. Data URIs and fragment-only URLs are skipped.
/// Spans are offsets into `html`.
pub fn scan_html(html: &str, source_path: &str) -> ScanResult {
    let (tokens, warnings) = html::tokenize(html);
    let mut result = ScanResult {
        refs: Vec::new(),
        parse_warnings: warnings.into_iter().map(|w| (w.offset, w.message)).collect(),
    };
    for token in &tokens {
        let Token::Start(tag) = token else { continue };
        for tag_url in tag_urls(tag) {
            let url = tag_url.span.slice(html);
            result.refs.extend(make_ref(tag_url.kind, url, tag_url.span, SourceKind::Html, source_path));
        }
        if tag.is("use") {
            for attr in tag.attrs.iter().filter(|a| a.is("href") || a.is("xlink:href")) {
                let Some(value) = &attr.value else { continue };
                let url = value.raw.trim();
                if !url.is_empty() && !classify_url(url).is_self_contained() {
                    result.parse_warnings.push((
                        value.span.start,
                        format!("SVG <use> references external file `{url}`; it is not inlined"),
                    ));
                }
            }
        }
        if tag.is("style") {
            if let Some(raw) = &tag.raw {
                let inner = scan_css(raw.content.slice(html), source_path);
                result.refs.extend(inner.refs.into_iter().map(|mut r| {
                    r.byte_span = r.byte_span.shift(raw.content.start);
                    r
                }));
                result
                    .parse_warnings
                    .extend(inner.parse_warnings.into_iter().map(|(o, m)| (o + raw.content.start, m)));
            }
        }
    }
    result.parse_warnings.sort_by_key(|(offset, _)| *offset);
    result
}

/// Extracts `@import` targets and `url(...)` references from CSS text.
pub fn scan_css(css: &str, source_path: &str) -> ScanResult {
    let (urls, warnings) = css::find_urls(css);
    let refs = urls
        .into_iter()
        .filter_map(|u| {
            let kind = match u.kind {
                CssUrlKind::Import => AssetKind::CssImport,
                CssUrlKind::Url => AssetKind::CssUrl,
            };
            make_ref(kind, u.span.slice(css), u.span, SourceKind::Css, source_path)
        })
        .collect();
    ScanResult { refs, parse_warnings: warnings.into_iter().map(|w| (w.offset, w.message)).collect() }
}
