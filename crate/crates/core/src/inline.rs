//! Single-file bundling and the self-containment check.
//!
//! [`bundle`] never reserializes markup. It collects byte-span edits against
//! the entry document (replace a `<script src>` element, swap a URL for a
//! data URI, insert the bootstrap marker) and splices them in one pass, so
//! every byte outside an edit passes through unchanged.

use alloc::borrow::Cow;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use base64::engine::general_purpose::STANDARD;
use base64::Engine as _;
use percent_encoding::{utf8_percent_encode, AsciiSet, CONTROLS};

use crate::config::BundleConfig;
use crate::css::{self, CssUrlKind};
use crate::html::{self, decode_entities, StartTag, Token};
use crate::json::JsonValue;
use crate::mime::{lookup_mime, FALLBACK_MIME};
use crate::path::{PathError, RelPath};
use crate::protocol::head_insertion_point;
use crate::provider::{FileError, FileProvider};
use crate::report::{
    BundleReport, ExternalReason, InlinedAsset, KeptExternal, Location, Violation, ViolationRule,
};
use crate::scan::{classify_url, scan_html, tag_urls, AssetKind, ByteSpan, UrlClass};
use crate::{ASSETS_GLOBAL, BOOTSTRAP_MARKER};

pub const ASSET_MAP_ID: &str = "nova-asset-map";
pub const FETCH_SHIM_ID: &str = "nova-fetch-shim";
pub const CYCLE_PLACEHOLDER: &str = "/*nova:cycle*/";

/// Bytes of an inlined script inspected for relative ES-module imports.
const IMPORT_SNIFF_BYTES: usize = 4096;
const BYTES_PER_MB: f64 = 1024.0 * 1024.0;

/// Serves `fetch()` calls for exactly-matching asset map keys (optionally
/// written with a leading `./`) from `window.__NOVA_ASSETS__`; everything
/// else goes to the native `fetch`.
pub const FETCH_SHIM: &str = "(function () { \
var assets = window.__NOVA_ASSETS__ || {}; \
var nativeFetch = window.fetch; \
if (typeof nativeFetch !== \"function\") { return; } \
window.fetch = function (input, init) { \
var key = typeof input === \"string\" ? input : null; \
if (key !== null && key.slice(0, 2) === \"./\") { key = key.slice(2); } \
if (key !== null && Object.prototype.hasOwnProperty.call(assets, key)) { \
return nativeFetch.call(window, assets[key], init); \
} \
return nativeFetch.call(window, input, init); \
}; \
})();";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BundleError {
    #[error("cannot read entry document `{path}`: {source}")]
    Entry { path: RelPath, source: FileError },
    #[error("`{path}` (referenced as `{url}` at {}:{}) does not exist", .location.path, .location.offset)]
    MissingAsset { path: RelPath, url: String, location: Location },
    #[error("`{url}` (at {}:{}) resolves outside the project root", .location.path, .location.offset)]
    OutsideRoot { url: String, location: Location },
    #[error("could not read `{path}`: {source}")]
    Read { path: RelPath, source: FileError },
    #[error("`{0}` is not valid UTF-8 text")]
    NotUtf8(RelPath),
    #[error("asset map entry `{0}` does not exist")]
    MissingAssetMapEntry(RelPath),
}

/// A bundled document and what it took to produce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundle {
    pub html: String,
    pub report: BundleReport,
}

/// `data:<mime>;base64,<payload>` with standard, unwrapped base64.
pub fn to_data_uri(bytes: &[u8], mime: &str) -> String {
    let mut out = String::with_capacity(mime.len() + 13 + bytes.len().div_ceil(3) * 4);
    out.push_str("data:");
    out.push_str(mime);
    out.push_str(";base64,");
    STANDARD.encode_string(bytes, &mut out);
    out
}

/// Characters that cannot appear literally in a CSS data URI inside a
/// quoted string: URL delimiters, CSS string syntax, and `<`/`>` so that the
/// text never forms `</style`.
const CSS_URI_QUOTED: &AsciiSet = &CONTROLS.add(b'%').add(b'#').add(b'"').add(b'\'').add(b'\\').add(b'<').add(b'>');
const CSS_URI_UNQUOTED: &AsciiSet = &CSS_URI_QUOTED.add(b' ').add(b'(').add(b')');

/// `data:text/css;charset=utf-8,<text>` with minimal percent-encoding.
/// Imported sheets often carry base64 data URIs of their own; percent
/// encoding leaves those nearly untouched where a second base64 pass would
/// grow them by another third.
pub fn css_data_uri(css: &str, quoted: bool) -> String {
    let set = if quoted { CSS_URI_QUOTED } else { CSS_URI_UNQUOTED };
    let mut out = String::from("data:text/css;charset=utf-8,");
    out.extend(utf8_percent_encode(css, set));
    out
}

/// Every reference in `html` (including inline `<style>` contents) that is
/// not a data URI or fragment and is not covered by an allowlisted prefix.
pub fn check<S: AsRef<str>>(html: &str, allow_external: &[S]) -> Vec<Violation> {
    scan_html(html, "")
        .refs
        .into_iter()
        .filter(|r| !is_allowlisted(&r.url, allow_external))
        .map(|r| Violation { rule: violation_rule(r.kind, &r.url), location: r.byte_span.start, url: r.url })
        .collect()
}

fn is_allowlisted<S: AsRef<str>>(url: &str, allow_external: &[S]) -> bool {
    allow_external.iter().any(|p| !p.as_ref().is_empty() && url.starts_with(p.as_ref()))
}

fn violation_rule(kind: AssetKind, url: &str) -> ViolationRule {
    match kind {
        AssetKind::Script => ViolationRule::ExternalScript,
        AssetKind::Stylesheet | AssetKind::CssImport => ViolationRule::ExternalStylesheet,
        AssetKind::Image | AssetKind::Icon => ViolationRule::ExternalImage,
        AssetKind::Font => ViolationRule::ExternalFont,
        AssetKind::CssUrl => match asset_kind_for_mime(lookup_mime(url_path(url))) {
            AssetKind::Font => ViolationRule::ExternalFont,
            AssetKind::Image => ViolationRule::ExternalImage,
            _ => ViolationRule::ExternalOther,
        },
        AssetKind::Media | AssetKind::AssetMapEntry => ViolationRule::ExternalOther,
    }
}

fn asset_kind_for_mime(mime: Option<&str>) -> AssetKind {
    match mime {
        Some(m) if m.starts_with("font/") => AssetKind::Font,
        Some(m) if m.starts_with("image/") => AssetKind::Image,
        _ => AssetKind::CssUrl,
    }
}

/// The part of a URL before any query or fragment.
fn url_path(url: &str) -> &str {
    let end = url.find(['?', '#']).unwrap_or(url.len());
    &url[..end]
}

fn fragment(url: &str) -> Option<&str> {
    url.find('#').map(|i| &url[i..]).filter(|f| f.len() > 1)
}

fn contains_ignore_case(haystack: &str, needle: &str) -> bool {
    haystack.as_bytes().windows(needle.len()).any(|w| w.eq_ignore_ascii_case(needle.as_bytes()))
}

/// Heuristic for scripts that still import sibling modules and so were not
/// pre-bundled.
fn has_relative_import(script: &str) -> bool {
    let mut end = script.len().min(IMPORT_SNIFF_BYTES);
    while !script.is_char_boundary(end) {
        end -= 1;
    }
    let head = &script[..end];
    let Some(first_import) = head.find("import") else { return false };
    head[first_import..].match_indices("from").any(|(i, _)| {
        let rest = head[first_import + i + 4..].trim_start();
        let mut chars = rest.chars();
        matches!(chars.next(), Some('"' | '\'' | '`'))
            && (chars.as_str().starts_with("./") || chars.as_str().starts_with("../"))
    })
}

struct Edit {
    span: ByteSpan,
    text: String,
}

fn splice(source: &str, mut edits: Vec<Edit>) -> String {
    edits.sort_by_key(|e| (e.span.start, e.span.end));
    let mut out = String::with_capacity(source.len() + edits.iter().map(|e| e.text.len()).sum::<usize>());
    let mut cursor = 0;
    for edit in edits {
        debug_assert!(edit.span.start >= cursor, "overlapping edits");
        out.push_str(&source[cursor..edit.span.start]);
        out.push_str(&edit.text);
        cursor = edit.span.end;
    }
    out.push_str(&source[cursor..]);
    out
}

struct Bundler<'a, P: FileProvider> {
    config: &'a BundleConfig,
    files: &'a P,
    report: BundleReport,
}

impl<P: FileProvider> Bundler<'_, P> {
    fn location(path: &RelPath, offset: usize) -> Location {
        Location { path: path.to_string(), offset }
    }

    fn note_remote(&mut self, url: &str, location: Location) {
        if is_allowlisted(url, &self.config.allow_external) {
            self.report.kept_external.push(KeptExternal { url: url.to_string(), reason: ExternalReason::Allowlisted });
        } else {
            self.report
                .kept_external
                .push(KeptExternal { url: url.to_string(), reason: ExternalReason::RemoteNotAllowlisted });
            self.report.warn(
                "remote-not-allowlisted",
                format!("remote reference `{url}` is not in allow_external and was left as is"),
                Some(location),
            );
        }
    }

    /// Maps a relative URL, as written in `base`, to a project file.
    fn resolve(&self, base: &RelPath, raw_url: &str, location: &Location, in_html: bool) -> Result<RelPath, BundleError> {
        let decoded_entities: Cow<'_, str> = if in_html { decode_entities(raw_url) } else { Cow::Borrowed(raw_url) };
        let path = url_path(&decoded_entities);
        let decoded = percent_encoding::percent_decode_str(path).decode_utf8_lossy();
        base.resolve(&decoded).map_err(|e| match e {
            PathError::EscapesRoot(_) | PathError::Absolute(_) => {
                BundleError::OutsideRoot { url: raw_url.to_string(), location: location.clone() }
            }
            PathError::Empty => BundleError::MissingAsset {
                path: base.clone(),
                url: raw_url.to_string(),
                location: location.clone(),
            },
        })
    }

    fn read(&self, path: &RelPath, raw_url: &str, location: &Location) -> Result<Vec<u8>, BundleError> {
        self.files.read(path).map_err(|e| match e {
            FileError::NotFound(_) => BundleError::MissingAsset {
                path: path.clone(),
                url: raw_url.to_string(),
                location: location.clone(),
            },
            other => BundleError::Read { path: path.clone(), source: other },
        })
    }

    fn mime_for(&mut self, path: &RelPath, location: &Location) -> &'static str {
        match lookup_mime(path.as_str()) {
            Some(m) => m,
            None => {
                self.report.warn(
                    "unknown-mime",
                    format!("no MIME type known for `{path}`; using {FALLBACK_MIME}"),
                    Some(location.clone()),
                );
                FALLBACK_MIME
            }
        }
    }

    fn inlined(&mut self, path: &RelPath, kind: AssetKind, before: usize, after: usize) {
        self.report.inlined.push(InlinedAsset {
            path: path.to_string(),
            kind,
            bytes_before: before,
            bytes_after_encoding: after,
        });
    }

    /// Data URI for a binary asset, keeping any `#fragment` of the URL.
    fn asset_data_uri(&mut self, base: &RelPath, raw_url: &str, location: Location, in_html: bool, kind: AssetKind) -> Result<String, BundleError> {
        let path = self.resolve(base, raw_url, &location, in_html)?;
        let bytes = self.read(&path, raw_url, &location)?;
        let mime = self.mime_for(&path, &location);
        let mut uri = to_data_uri(&bytes, mime);
        if let Some(frag) = fragment(raw_url) {
            uri.push_str(frag);
        }
        let kind = if kind == AssetKind::CssUrl { asset_kind_for_mime(Some(mime)) } else { kind };
        self.inlined(&path, kind, bytes.len(), uri.len());
        Ok(uri)
    }

    /// Rewrites every local `@import` and `url()` in a stylesheet to a data
    /// URI, recursing into imported sheets. `chain` holds the sheets being
    /// processed above this one; importing one of them again is a cycle.
    fn process_css(&mut self, css: &str, path: &RelPath, chain: &mut Vec<RelPath>, report_parse: bool) -> Result<String, BundleError> {
        let (urls, warnings) = css::find_urls(css);
        if report_parse {
            for w in warnings {
                self.report.warn("css-parse", w.message, Some(Self::location(path, w.offset)));
            }
        }
        let mut edits = Vec::new();
        for u in urls {
            let raw = u.span.slice(css);
            let location = Self::location(path, u.span.start);
            let class = classify_url(raw);
            if class.is_self_contained() {
                continue;
            }
            if class.is_remote() {
                self.note_remote(raw, location);
                continue;
            }
            match u.kind {
                CssUrlKind::Import => {
                    let target = self.resolve(path, raw, &location, false)?;
                    if chain.contains(&target) {
                        self.report.warn(
                            "css-import-cycle",
                            format!("`@import` of `{target}` closes a cycle; the rule was dropped"),
                            Some(location),
                        );
                        let rule = u.rule.unwrap_or(u.span);
                        edits.push(Edit { span: rule, text: CYCLE_PLACEHOLDER.to_string() });
                        continue;
                    }
                    let bytes = self.read(&target, raw, &location)?;
                    let text = String::from_utf8(bytes).map_err(|_| BundleError::NotUtf8(target.clone()))?;
                    chain.push(target.clone());
                    let nested = self.process_css(&text, &target, chain, true)?;
                    chain.pop();
                    let quoted = u.span.start > 0 && matches!(css.as_bytes()[u.span.start - 1], b'"' | b'\'');
                    let uri = css_data_uri(&nested, quoted);
                    self.inlined(&target, AssetKind::CssImport, text.len(), uri.len());
                    edits.push(Edit { span: u.span, text: uri });
                }
                CssUrlKind::Url => {
                    let uri = self.asset_data_uri(path, raw, location, false, AssetKind::CssUrl)?;
                    edits.push(Edit { span: u.span, text: uri });
                }
            }
        }
        Ok(splice(css, edits))
    }

    /// Start tag text with `src`/`href` (`url_attr`) replaced by `new_url`
    /// and integrity metadata dropped; other attributes are copied verbatim.
    fn rebuild_tag(html: &str, tag: &StartTag<'_>, url_attr: &str, new_url: Option<&str>, drop: &[&str]) -> String {
        let mut out = String::from("<");
        out.push_str(tag.name);
        for attr in &tag.attrs {
            if attr.is("integrity") || attr.is("crossorigin") || drop.iter().any(|d| attr.is(d)) {
                continue;
            }
            if attr.is(url_attr) {
                if let Some(url) = new_url {
                    out.push(' ');
                    out.push_str(attr.name);
                    out.push_str("=\"");
                    out.push_str(url);
                    out.push('"');
                }
                continue;
            }
            out.push(' ');
            out.push_str(attr.span.slice(html));
        }
        out.push('>');
        out
    }

    fn script(&mut self, html: &str, entry: &RelPath, tag: &StartTag<'_>, edits: &mut Vec<Edit>) -> Result<(), BundleError> {
        let Some(src) = tag_urls(tag).into_iter().next() else { return Ok(()) };
        let raw = src.span.slice(html);
        let location = Self::location(entry, src.span.start);
        match classify_url(raw) {
            UrlClass::DataUri | UrlClass::FragmentOnly => return Ok(()),
            UrlClass::AbsoluteRemote | UrlClass::ProtocolRelative => {
                self.note_remote(raw, location);
                return Ok(());
            }
            UrlClass::Relative => {}
        }
        let path = self.resolve(entry, raw, &location, true)?;
        let bytes = self.read(&path, raw, &location)?;
        let is_module = tag.attr_value("type").is_some_and(|t| t.raw.trim().eq_ignore_ascii_case("module"));
        // An inline classic script cannot be deferred; a data-URI src keeps
        // defer/async semantics intact.
        let deferred_classic = !is_module && (tag.attr("defer").is_some() || tag.attr("async").is_some());
        let text = core::str::from_utf8(&bytes).ok();
        if let Some(text) = text {
            if has_relative_import(text) {
                self.report.warn(
                    "unbundled-module-import",
                    format!("`{path}` appears to import relative ES modules; run a module bundler first"),
                    Some(location.clone()),
                );
            }
        }
        let inline_text = text.filter(|t| {
            !deferred_classic && !contains_ignore_case(t, "</script") && !t.contains("<!--")
        });
        match inline_text {
            Some(text) => {
                let mut element = Self::rebuild_tag(html, tag, "src", None, &[]);
                element.push_str(text);
                element.push_str("</script>");
                self.inlined(&path, AssetKind::Script, bytes.len(), text.len());
                edits.push(Edit { span: ByteSpan::new(tag.span.start, tag.element_end()), text: element });
            }
            None => {
                let uri = to_data_uri(&bytes, "text/javascript");
                self.inlined(&path, AssetKind::Script, bytes.len(), uri.len());
                if !deferred_classic {
                    self.report.warn(
                        "script-data-uri",
                        format!("`{path}` contains `</script` or `<!--` (or is not UTF-8); embedded as a base64 data URI"),
                        Some(location),
                    );
                }
                edits.push(Edit { span: tag.span, text: Self::rebuild_tag(html, tag, "src", Some(&uri), &[]) });
            }
        }
        Ok(())
    }

    fn stylesheet(&mut self, html: &str, entry: &RelPath, tag: &StartTag<'_>, edits: &mut Vec<Edit>) -> Result<(), BundleError> {
        let Some(href) = tag_urls(tag).into_iter().next() else { return Ok(()) };
        let raw = href.span.slice(html);
        let location = Self::location(entry, href.span.start);
        match classify_url(raw) {
            UrlClass::DataUri | UrlClass::FragmentOnly => return Ok(()),
            UrlClass::AbsoluteRemote | UrlClass::ProtocolRelative => {
                self.note_remote(raw, location);
                return Ok(());
            }
            UrlClass::Relative => {}
        }
        let path = self.resolve(entry, raw, &location, true)?;
        let bytes = self.read(&path, raw, &location)?;
        let text = String::from_utf8(bytes).map_err(|_| BundleError::NotUtf8(path.clone()))?;
        let mut chain = alloc::vec![path.clone()];
        let css = self.process_css(&text, &path, &mut chain, true)?;
        if contains_ignore_case(&css, "</style") {
            let uri = to_data_uri(css.as_bytes(), "text/css");
            self.inlined(&path, AssetKind::Stylesheet, text.len(), uri.len());
            edits.push(Edit { span: tag.span, text: Self::rebuild_tag(html, tag, "href", Some(&uri), &[]) });
        } else {
            let mut element = String::from("<style");
            if let Some(media) = tag.attr("media") {
                element.push(' ');
                element.push_str(media.span.slice(html));
            }
            element.push('>');
            element.push_str(&css);
            element.push_str("</style>");
            self.inlined(&path, AssetKind::Stylesheet, text.len(), css.len());
            edits.push(Edit { span: tag.span, text: element });
        }
        Ok(())
    }

    fn asset_map_script(&mut self) -> Result<String, BundleError> {
        let mut members = Vec::with_capacity(self.config.asset_map.len());
        for path in &self.config.asset_map {
            let bytes = self.files.read(path).map_err(|e| match e {
                FileError::NotFound(_) => BundleError::MissingAssetMapEntry(path.clone()),
                other => BundleError::Read { path: path.clone(), source: other },
            })?;
            let location = Self::location(path, 0);
            let mime = self.mime_for(path, &location);
            let uri = to_data_uri(&bytes, mime);
            self.inlined(path, AssetKind::AssetMapEntry, bytes.len(), uri.len());
            members.push((path.to_string(), JsonValue::String(uri)));
        }
        let json = JsonValue::Object(members).to_script_json().expect("strings are always representable");
        Ok(format!("<script id=\"{ASSET_MAP_ID}\">window.{ASSETS_GLOBAL} = {json};</script>"))
    }

    fn run(mut self) -> Result<Bundle, BundleError> {
        let entry = &self.config.entry;
        let bytes = self
            .files
            .read(entry)
            .map_err(|source| BundleError::Entry { path: entry.clone(), source })?;
        let html = String::from_utf8(bytes).map_err(|_| BundleError::NotUtf8(entry.clone()))?;

        for (offset, message) in scan_html(&html, entry.as_str()).parse_warnings {
            self.report.warn("html-parse", message, Some(Self::location(entry, offset)));
        }

        let (tokens, _) = html::tokenize(&html);
        let mut edits = Vec::new();
        let mut has_asset_map = false;
        let mut has_shim = false;
        let mut html_tag_end = None;
        for token in &tokens {
            let Token::Start(tag) = token else { continue };
            let id = tag.attr_value("id").map(|v| v.raw);
            if tag.is("html") && html_tag_end.is_none() {
                html_tag_end = Some(tag.span.end);
            } else if tag.is("script") && id == Some(ASSET_MAP_ID) {
                has_asset_map = true;
            } else if tag.is("script") && id == Some(FETCH_SHIM_ID) {
                has_shim = true;
            }

            if tag.is("script") {
                self.script(&html, entry, tag, &mut edits)?;
            } else if tag.is("link") && tag_urls(tag).first().is_some_and(|u| u.kind == AssetKind::Stylesheet) {
                self.stylesheet(&html, entry, tag, &mut edits)?;
            } else if tag.is("style") {
                if let Some(raw) = &tag.raw {
                    let css = raw.content.slice(&html);
                    let mut chain = Vec::new();
                    let processed = self.process_css_at(css, entry, raw.content.start, &mut chain)?;
                    if processed != css {
                        edits.push(Edit { span: raw.content, text: processed });
                    }
                }
            } else {
                for tag_url in tag_urls(tag) {
                    let url = tag_url.span.slice(&html);
                    let location = Self::location(entry, tag_url.span.start);
                    match classify_url(url) {
                        UrlClass::DataUri | UrlClass::FragmentOnly => {}
                        UrlClass::AbsoluteRemote | UrlClass::ProtocolRelative => self.note_remote(url, location),
                        UrlClass::Relative => {
                            let uri = self.asset_data_uri(entry, url, location, true, tag_url.kind)?;
                            edits.push(Edit { span: tag_url.span, text: uri });
                        }
                    }
                }
            }
        }

        let mut head_block = String::new();
        let marker_at = html.find(BOOTSTRAP_MARKER);
        if marker_at.is_none() {
            head_block.push_str(BOOTSTRAP_MARKER);
        }
        if !self.config.asset_map.is_empty() && !has_asset_map {
            head_block.push_str(&self.asset_map_script()?);
        }
        if self.config.inject_fetch_shim && !has_shim {
            head_block.push_str(&format!("<script id=\"{FETCH_SHIM_ID}\">{FETCH_SHIM}</script>"));
        }
        if !head_block.is_empty() {
            let (at, text) = match (marker_at, head_insertion_point(&html), html_tag_end) {
                (Some(m), _, _) => (m + BOOTSTRAP_MARKER.len(), head_block),
                (None, Some(h), _) => (h, head_block),
                (None, None, Some(h)) => (h, format!("<head>{head_block}</head>")),
                (None, None, None) => (0, format!("<head>{head_block}</head>")),
            };
            edits.push(Edit { span: ByteSpan::new(at, at), text });
        }

        let output = splice(&html, edits);
        self.report.total_output_bytes = output.len();
        let limit = self.config.max_size_mb * BYTES_PER_MB;
        if output.len() as f64 > limit {
            self.report.warn(
                "size-limit",
                format!(
                    "bundle is {} bytes, above max_size_mb = {} ({} bytes); notebook front-ends may refuse to render it",
                    output.len(),
                    self.config.max_size_mb,
                    limit as u64
                ),
                None,
            );
        }
        self.report.violations = check(&output, &self.config.allow_external);
        Ok(Bundle { html: output, report: self.report })
    }

    /// Inline `<style>` content; its locations are entry-document offsets.
    fn process_css_at(&mut self, css: &str, entry: &RelPath, offset: usize, chain: &mut Vec<RelPath>) -> Result<String, BundleError> {
        let start = self.report.warnings.len();
        let result = self.process_css(css, entry, chain, false);
        for w in &mut self.report.warnings[start..] {
            if let Some(loc) = &mut w.location {
                if loc.path == entry.as_str() {
                    loc.offset += offset;
                }
            }
        }
        result.map_err(|e| shift_error(e, entry, offset))
    }
}

fn shift_error(err: BundleError, entry: &RelPath, offset: usize) -> BundleError {
    let shift = |mut loc: Location| {
        if loc.path == entry.as_str() {
            loc.offset += offset;
        }
        loc
    };
    match err {
        BundleError::MissingAsset { path, url, location } => BundleError::MissingAsset { path, url, location: shift(location) },
        BundleError::OutsideRoot { url, location } => BundleError::OutsideRoot { url, location: shift(location) },
        other => other,
    }
}

/// Produces the single-file version of `config.entry`.
///
/// Local scripts, stylesheets (with nested `@import`s and `url()`s),
/// images, icons and media are embedded; remote references stay and are
/// reported. The bootstrap marker, and the asset map and fetch shim when
/// configured, are placed at the top of `<head>` unless already present, so
/// bundling a bundle is a no-op.
pub fn bundle(config: &BundleConfig, files: &impl FileProvider) -> Result<Bundle, BundleError> {
    Bundler { config, files, report: BundleReport::default() }.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{BundleConfig, PackageSpec};
    use crate::provider::MemoryProvider;

    fn config() -> BundleConfig {
        BundleConfig::new("t", RelPath::parse("index.html").unwrap(), ".", PackageSpec::new("t"))
    }

    fn run(files: &MemoryProvider) -> Bundle {
        bundle(&config(), files).unwrap()
    }

    #[test]
    fn data_uri_examples() {
        assert_eq!(to_data_uri(b"abc", "text/plain"), "data:text/plain;base64,YWJj");
        assert_eq!(to_data_uri(b"", "image/png"), "data:image/png;base64,");
        assert_eq!(to_data_uri(&[0x00, 0xff], "application/octet-stream"), "data:application/octet-stream;base64,AP8=");
    }

    #[test]
    fn inlines_plain_script() {
        let files = MemoryProvider::new()
            .with("index.html", r#"<html><head></head><body><script src="app.js"></script></body></html>"#)
            .with("app.js", "console.log(1)");
        let out = run(&files);
        assert!(out.html.contains("<script>console.log(1)</script>"));
        assert!(!out.html.contains("src=\"app.js\""));
        assert_eq!(out.html, "<html><head><!--NOVA:BOOTSTRAP--></head><body><script>console.log(1)</script></body></html>");
        assert_eq!(out.report.total_output_bytes, out.html.len());
    }

    #[test]
    fn script_with_terminator_becomes_data_uri() {
        let js = "document.write('</script>')";
        let files = MemoryProvider::new()
            .with("index.html", r#"<head></head><script type="module" src="a.js" integrity="sha384-x" crossorigin></script>"#)
            .with("a.js", js);
        let out = run(&files);
        let uri = to_data_uri(js.as_bytes(), "text/javascript");
        assert!(out.html.contains(&format!(r#"<script type="module" src="{uri}"></script>"#)), "{}", out.html);
        assert!(out.report.warnings.iter().any(|w| w.code == "script-data-uri"));
    }

    #[test]
    fn module_attributes_survive_inlining() {
        let files = MemoryProvider::new()
            .with("index.html", r#"<head><script type="module" crossorigin src="/assets/a.js"></script></head>"#)
            .with("assets/a.js", "let x = 1;");
        let out = run(&files);
        assert!(out.html.contains(r#"<script type="module">let x = 1;</script>"#), "{}", out.html);
    }

    #[test]
    fn deferred_classic_script_keeps_src_semantics() {
        let files = MemoryProvider::new().with("index.html", r#"<script defer src="a.js"></script>"#).with("a.js", "x()");
        let out = run(&files);
        assert!(out.html.contains(r#"<script defer src="data:text/javascript;base64,eCgp"></script>"#), "{}", out.html);
    }

    #[test]
    fn stylesheet_with_nested_import_and_cycle() {
        let files = MemoryProvider::new()
            .with("index.html", r#"<head><link rel="stylesheet" href="css/a.css" media="screen"></head>"#)
            .with("css/a.css", "@import \"b.css\";\nbody{background:url(../img/bg.png)}")
            .with("css/b.css", "@import 'a.css';\np{color:red}")
            .with("img/bg.png", [1u8, 2, 3]);
        let out = run(&files);
        let b_processed = "/*nova:cycle*/\np{color:red}";
        let expected = format!(
            "<head><!--NOVA:BOOTSTRAP--><style media=\"screen\">@import \"{}\";\nbody{{background:url(data:image/png;base64,AQID)}}</style></head>",
            css_data_uri(b_processed, true)
        );
        assert_eq!(out.html, expected);
        assert!(out.report.warnings.iter().any(|w| w.code == "css-import-cycle"));
        let kinds: Vec<_> = out.report.inlined.iter().map(|i| (i.path.as_str(), i.kind)).collect();
        assert_eq!(
            kinds,
            alloc::vec![("css/b.css", AssetKind::CssImport), ("img/bg.png", AssetKind::Image), ("css/a.css", AssetKind::Stylesheet)]
        );
    }

    #[test]
    fn images_srcset_and_inline_style() {
        let files = MemoryProvider::new()
            .with("index.html", "<img srcset=\"a.png 1x, b.png 2x\" src=a.png><style>div{background:url('a.png#x')}</style>")
            .with("a.png", [0u8])
            .with("b.png", [0xffu8]);
        let out = run(&files);
        assert_eq!(
            out.html,
            "<head><!--NOVA:BOOTSTRAP--></head><img srcset=\"data:image/png;base64,AA== 1x, data:image/png;base64,/w== 2x\" src=data:image/png;base64,AA==><style>div{background:url('data:image/png;base64,AA==#x')}</style>"
        );
        assert!(check(&out.html, &[] as &[&str]).is_empty());
    }

    #[test]
    fn remote_refs_are_kept_and_reported() {
        let mut cfg = config();
        cfg.allow_external = alloc::vec!["https://cdn.example/".into()];
        let files = MemoryProvider::new().with(
            "index.html",
            r#"<head></head><script src="https://cdn.example/x.js"></script><img src="//img.example/a.png">"#,
        );
        let out = bundle(&cfg, &files).unwrap();
        assert_eq!(
            out.report.kept_external,
            alloc::vec![
                KeptExternal { url: "https://cdn.example/x.js".into(), reason: ExternalReason::Allowlisted },
                KeptExternal { url: "//img.example/a.png".into(), reason: ExternalReason::RemoteNotAllowlisted },
            ]
        );
        let remote_warnings: Vec<_> = out.report.warnings.iter().filter(|w| w.code == "remote-not-allowlisted").collect();
        assert_eq!(remote_warnings.len(), 1);
        assert!(remote_warnings[0].message.contains("//img.example/a.png"));
        assert_eq!(out.report.violations.len(), 1);
        assert_eq!(out.report.violations[0].rule, ViolationRule::ExternalImage);
    }

    #[test]
    fn missing_and_escaping_assets_are_errors() {
        let files = MemoryProvider::new().with("index.html", "<p>\n<img src=\"gone.png\">");
        match bundle(&config(), &files).unwrap_err() {
            BundleError::MissingAsset { path, location, .. } => {
                assert_eq!(path.as_str(), "gone.png");
                assert_eq!(location, Location { path: "index.html".into(), offset: 14 });
            }
            other => panic!("{other:?}"),
        }
        let files = MemoryProvider::new().with("index.html", "<img src=\"../up.png\">");
        assert!(matches!(bundle(&config(), &files), Err(BundleError::OutsideRoot { .. })));
    }

    #[test]
    fn marker_placement_without_head() {
        let files = MemoryProvider::new().with("index.html", "<!doctype html><html lang=en><body></body></html>");
        assert_eq!(run(&files).html, "<!doctype html><html lang=en><head><!--NOVA:BOOTSTRAP--></head><body></body></html>");
        let files = MemoryProvider::new().with("index.html", "<p>hi</p>");
        assert_eq!(run(&files).html, "<head><!--NOVA:BOOTSTRAP--></head><p>hi</p>");
    }

    #[test]
    fn asset_map_and_shim_follow_marker() {
        let mut cfg = config();
        cfg.asset_map = alloc::vec![RelPath::parse("m.wasm").unwrap()];
        cfg.inject_fetch_shim = true;
        let files = MemoryProvider::new().with("index.html", "<head><title>x</title></head>").with("m.wasm", [0u8, 0x61, 0x73, 0x6d]);
        let out = bundle(&cfg, &files).unwrap();
        let expected_head = format!(
            "<head><!--NOVA:BOOTSTRAP--><script id=\"nova-asset-map\">window.__NOVA_ASSETS__ = {{\"m.wasm\":\"data:application/wasm;base64,AGFzbQ==\"}};</script><script id=\"nova-fetch-shim\">{FETCH_SHIM}</script><title>"
        );
        assert!(out.html.starts_with(&expected_head), "{}", out.html);
        let again = bundle(&cfg, &MemoryProvider::new().with("index.html", out.html.clone()).with("m.wasm", [0u8, 0x61, 0x73, 0x6d])).unwrap();
        assert_eq!(again.html, out.html);
        assert!(!FETCH_SHIM.contains("</script"));
    }

    #[test]
    fn size_limit_warns_but_succeeds() {
        let mut cfg = config();
        cfg.max_size_mb = 0.000_01;
        let files = MemoryProvider::new().with("index.html", "<head></head><p>0123456789012345678901234567890</p>");
        let out = bundle(&cfg, &files).unwrap();
        assert!(out.report.warnings.iter().any(|w| w.code == "size-limit"));
    }

    #[test]
    fn unknown_extension_falls_back_with_warning() {
        let files = MemoryProvider::new().with("index.html", "<img src=\"x.dat\">").with("x.dat", "z");
        let out = run(&files);
        assert!(out.html.contains("data:application/octet-stream;base64,eg=="));
        assert!(out.report.warnings.iter().any(|w| w.code == "unknown-mime"));
    }

    #[test]
    fn query_and_percent_encoding_resolve_to_files() {
        let files = MemoryProvider::new()
            .with("index.html", "<img src=\"my%20logo.png?v=2\"><link rel=icon href=\"a.ico?x=1&amp;y=2\">")
            .with("my logo.png", [1u8])
            .with("a.ico", [2u8]);
        let out = run(&files);
        assert!(out.html.contains("src=\"data:image/png;base64,AQ==\""));
        assert!(out.html.contains("href=\"data:image/x-icon;base64,Ag==\""));
    }

    #[test]
    fn relative_import_heuristic() {
        assert!(has_relative_import("import { a } from './a.js';"));
        assert!(has_relative_import("import b from \"../b.js\""));
        assert!(!has_relative_import("import React from 'react';"));
        assert!(!has_relative_import("const from = './x';"));
    }

    #[test]
    fn check_examples() {
        let html = r#"<script src="https://cdn.example/x.js"></script>"#;
        assert!(check(html, &["https://cdn.example/"]).is_empty());
        let v = check(html, &[] as &[&str]);
        assert_eq!(v, alloc::vec![Violation { url: "https://cdn.example/x.js".into(), location: 13, rule: ViolationRule::ExternalScript }]);
        let css = "<style>@font-face{src:url(f.woff2)} a{b:url(x.svg)} c{d:url(y.xyz)}</style><link rel=stylesheet href=s.css>";
        let rules: Vec<_> = check(css, &[] as &[&str]).into_iter().map(|v| v.rule).collect();
        assert_eq!(
            rules,
            alloc::vec![ViolationRule::ExternalFont, ViolationRule::ExternalImage, ViolationRule::ExternalOther, ViolationRule::ExternalStylesheet]
        );
    }
}
