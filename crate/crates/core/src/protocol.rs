//! One-way host-to-widget payload delivery.
//!
//! The host serializes a JSON payload into a bootstrap `<script>` that is
//! spliced into the bundled document at [`BOOTSTRAP_MARKER`]. The script
//! stores the payload in `window.__NOVA_PAYLOAD__` straight away and
//! dispatches a `CustomEvent` carrying it in `detail` once the window has
//! loaded, so apps may either listen for the event or read the global.
//! Nothing flows back from the widget.
//!
//! The document then travels inside an iframe's `srcdoc` attribute.

use alloc::string::{String, ToString};
use core::fmt;
use core::num::NonZeroU32;

use crate::config::is_event_name;
use crate::html::{self, Token};
use crate::json::JsonValue;
use crate::{BOOTSTRAP_ID_PREFIX, BOOTSTRAP_MARKER, EVENT_GLOBAL, IFRAME_ID_PREFIX, PAYLOAD_GLOBAL};

/// Eight lowercase hex digits identifying one rendered widget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WidgetId([u8; 8]);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("widget id {0:?} must be exactly 8 lowercase hex digits")]
pub struct WidgetIdError(pub String);

impl WidgetId {
    pub fn parse(text: &str) -> Result<Self, WidgetIdError> {
        let bytes = text.as_bytes();
        if bytes.len() != 8 || !bytes.iter().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f')) {
            return Err(WidgetIdError(text.to_string()));
        }
        let mut id = [0u8; 8];
        id.copy_from_slice(bytes);
        Ok(WidgetId(id))
    }

    /// The id whose hex digits spell `bits`.
    pub fn from_bits(bits: u32) -> Self {
        const HEX: &[u8; 16] = b"0123456789abcdef";
        let mut id = [0u8; 8];
        for (i, slot) in id.iter_mut().enumerate() {
            *slot = HEX[((bits >> (28 - 4 * i)) & 0xf) as usize];
        }
        WidgetId(id)
    }

    pub fn as_str(&self) -> &str {
        core::str::from_utf8(&self.0).expect("widget ids are ASCII")
    }
}

impl fmt::Display for WidgetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PayloadError {
    #[error("payload value at `{path}` is not representable as JSON (non-finite number)")]
    NotRepresentable { path: String },
    #[error("event name {0:?} must match [A-Za-z][A-Za-z0-9_-]*")]
    InvalidEventName(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PayloadEnvelope {
    pub data: JsonValue,
    pub event_name: String,
    pub widget_id: WidgetId,
}

impl PayloadEnvelope {
    pub fn new(data: JsonValue, event_name: impl Into<String>, widget_id: WidgetId) -> Result<Self, PayloadError> {
        let event_name = event_name.into();
        if !is_event_name(&event_name) {
            return Err(PayloadError::InvalidEventName(event_name));
        }
        Ok(PayloadEnvelope { data, event_name, widget_id })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IframeOptions {
    pub width: NonZeroU32,
    pub height: NonZeroU32,
    /// Overrides the envelope's widget id when set.
    pub widget_id: Option<WidgetId>,
}

impl IframeOptions {
    /// Returns `None` if either dimension is zero.
    pub fn new(width: u32, height: u32) -> Option<Self> {
        Some(IframeOptions { width: NonZeroU32::new(width)?, height: NonZeroU32::new(height)?, widget_id: None })
    }

    pub fn with_widget_id(mut self, id: WidgetId) -> Self {
        self.widget_id = Some(id);
        self
    }
}

/// Builds the bootstrap `<script>` element for `envelope`.
pub fn encode_payload(envelope: &PayloadEnvelope) -> Result<String, PayloadError> {
    if !is_event_name(&envelope.event_name) {
        return Err(PayloadError::InvalidEventName(envelope.event_name.clone()));
    }
    let json = envelope
        .data
        .to_script_json()
        .map_err(|e| PayloadError::NotRepresentable { path: e.path })?;
    let id = envelope.widget_id;
    let event = &envelope.event_name;
    Ok(alloc::format!(
        "<script id=\"{BOOTSTRAP_ID_PREFIX}{id}\">window.{PAYLOAD_GLOBAL} = {json}; \
         window.{EVENT_GLOBAL} = \"{event}\"; \
         window.addEventListener(\"load\", function () {{ \
         window.dispatchEvent(new CustomEvent(\"{event}\", {{ detail: window.{PAYLOAD_GLOBAL} }})); }});</script>"
    ))
}

/// Escapes a document for a double-quoted attribute: `&` first, then `"`.
pub fn escape_srcdoc(html: &str) -> String {
    html.replace('&', "&amp;").replace('"', "&quot;")
}

/// Inverse of [`escape_srcdoc`]: `&quot;` first, then `&amp;`, one pass each.
pub fn unescape_srcdoc(text: &str) -> String {
    text.replace("&quot;", "\"").replace("&amp;", "&")
}

/// Places `bootstrap` at the first bootstrap marker; failing that, right
/// after the first `<head>` start tag; failing that, at the very start.
pub fn inject_bootstrap(html: &str, bootstrap: &str) -> String {
    if let Some(at) = html.find(BOOTSTRAP_MARKER) {
        let mut out = String::with_capacity(html.len() + bootstrap.len());
        out.push_str(&html[..at]);
        out.push_str(bootstrap);
        out.push_str(&html[at + BOOTSTRAP_MARKER.len()..]);
        return out;
    }
    let at = head_insertion_point(html).unwrap_or(0);
    let mut out = String::with_capacity(html.len() + bootstrap.len());
    out.push_str(&html[..at]);
    out.push_str(bootstrap);
    out.push_str(&html[at..]);
    out
}

/// Offset just past the first `<head ...>` start tag.
pub(crate) fn head_insertion_point(html: &str) -> Option<usize> {
    html::tokenize(html).0.into_iter().find_map(|t| match t {
        Token::Start(tag) if tag.is("head") => Some(tag.span.end),
        _ => None,
    })
}

/// Renders the widget as an `<iframe>` whose `srcdoc` is `html` with the
/// payload's bootstrap injected.
pub fn render_iframe(html: &str, envelope: &PayloadEnvelope, options: &IframeOptions) -> Result<String, PayloadError> {
    let overridden;
    let envelope = match options.widget_id {
        Some(id) if id != envelope.widget_id => {
            overridden = PayloadEnvelope { widget_id: id, ..envelope.clone() };
            &overridden
        }
        _ => envelope,
    };
    let bootstrap = encode_payload(envelope)?;
    let srcdoc = escape_srcdoc(&inject_bootstrap(html, &bootstrap));
    Ok(alloc::format!(
        "<iframe id=\"{IFRAME_ID_PREFIX}{id}\" srcdoc=\"{srcdoc}\" width=\"{w}\" height=\"{h}\" frameborder=\"0\" style=\"border:none;\"></iframe>",
        id = envelope.widget_id,
        w = options.width,
        h = options.height,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> WidgetId {
        WidgetId::parse(s).unwrap()
    }

    fn envelope(data: &str) -> PayloadEnvelope {
        PayloadEnvelope::new(JsonValue::parse(data).unwrap(), "novaData", id("deadbeef")).unwrap()
    }

    #[test]
    fn bootstrap_template() {
        let script = encode_payload(&envelope(r#"{"a":1}"#)).unwrap();
        assert_eq!(
            script,
            "<script id=\"nova-bootstrap-deadbeef\">window.__NOVA_PAYLOAD__ = {\"a\":1}; \
             window.__NOVA_EVENT__ = \"novaData\"; window.addEventListener(\"load\", function () { \
             window.dispatchEvent(new CustomEvent(\"novaData\", { detail: window.__NOVA_PAYLOAD__ })); });</script>"
        );
    }

    #[test]
    fn script_terminator_is_escaped() {
        let script = encode_payload(&envelope(r#"{"x":"</script>"}"#)).unwrap();
        assert!(script.contains(r#"{"x":"\u003c/script\u003e"}"#));
        let body = &script[..script.len() - "</script>".len()];
        assert!(!body.to_ascii_lowercase().contains("</script"));
    }

    #[test]
    fn non_finite_is_rejected_with_path() {
        let env = PayloadEnvelope::new(
            JsonValue::object([("w", JsonValue::from(f64::NAN))]),
            "novaData",
            id("deadbeef"),
        )
        .unwrap();
        assert_eq!(encode_payload(&env), Err(PayloadError::NotRepresentable { path: "$.w".into() }));
        assert!(PayloadEnvelope::new(JsonValue::Null, "1bad", id("deadbeef")).is_err());
    }

    #[test]
    fn srcdoc_escaping() {
        assert_eq!(escape_srcdoc(r#"<div data-x="1 & 2">"#), "<div data-x=&quot;1 &amp; 2&quot;>");
        assert_eq!(escape_srcdoc(""), "");
        assert_eq!(escape_srcdoc("&quot;"), "&amp;quot;");
        assert_eq!(unescape_srcdoc("&quot;hi&quot;"), "\"hi\"");
        assert_eq!(unescape_srcdoc("&amp;amp;"), "&amp;");
        assert_eq!(unescape_srcdoc(&escape_srcdoc("&quot;'<>\"&amp;")), "&quot;'<>\"&amp;");
    }

    #[test]
    fn injection_points() {
        let with_marker = "<html><head><!--NOVA:BOOTSTRAP--><title>t</title></head></html>";
        assert_eq!(inject_bootstrap(with_marker, "<S>"), "<html><head><S><title>t</title></head></html>");
        let with_head = "<!-- <head> --><header></header><HEAD lang=en><title>t</title>";
        assert_eq!(
            inject_bootstrap(with_head, "<S>"),
            "<!-- <head> --><header></header><HEAD lang=en><S><title>t</title>"
        );
        assert_eq!(inject_bootstrap("<div></div>", "<S>"), "<S><div></div>");
        let two = "<head><!--NOVA:BOOTSTRAP--><!--NOVA:BOOTSTRAP-->";
        assert_eq!(inject_bootstrap(two, "<S>"), "<head><S><!--NOVA:BOOTSTRAP-->");
    }

    #[test]
    fn iframe_attributes() {
        let opts = IframeOptions::new(400, 300).unwrap();
        let out = render_iframe("<p>\"hi\"</p>", &envelope("null"), &opts).unwrap();
        assert!(out.starts_with("<iframe id=\"nova-widget-deadbeef\" srcdoc=\"<script id=&quot;nova-bootstrap-deadbeef&quot;>"));
        assert!(out.ends_with("<p>&quot;hi&quot;</p>\" width=\"400\" height=\"300\" frameborder=\"0\" style=\"border:none;\"></iframe>"));
        let explicit = render_iframe("", &envelope("null"), &opts.with_widget_id(id("a1b2c3d4"))).unwrap();
        assert!(explicit.starts_with("<iframe id=\"nova-widget-a1b2c3d4\""));
        assert!(explicit.contains("nova-bootstrap-a1b2c3d4"));
        assert!(IframeOptions::new(0, 10).is_none());
    }

    #[test]
    fn widget_id_format() {
        assert_eq!(id("a1b2c3d4").as_str(), "a1b2c3d4");
        assert!(WidgetId::parse("XYZ").is_err());
        assert!(WidgetId::parse("A1B2C3D4").is_err());
        assert!(WidgetId::parse("a1b2c3d4e").is_err());
        assert_eq!(WidgetId::from_bits(0xdeadbeef).as_str(), "deadbeef");
        assert_eq!(WidgetId::from_bits(0x0000000f).as_str(), "0000000f");
    }
}
