//! Conformance vectors: recorded `render_iframe` inputs and exact outputs.
//! Any other renderer of the payload protocol (the vendored Python runtime
//! in particular) must reproduce every `expected` string byte for byte.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::Serialize;

use crate::json::JsonValue;
use crate::protocol::{render_iframe, IframeOptions, PayloadEnvelope, WidgetId};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConformanceVector {
    pub id: String,
    pub description: String,
    pub html: String,
    pub payload: JsonValue,
    pub event_name: String,
    pub width: u32,
    pub height: u32,
    pub widget_id: String,
    pub expected: String,
}

const PLAIN_HTML: &str = "<!DOCTYPE html><html><head><!--NOVA:BOOTSTRAP--><title>t</title></head><body><div id=\"app\"></div></body></html>";

struct Case {
    description: &'static str,
    html: Option<&'static str>,
    payload: &'static str,
    event_name: &'static str,
    size: (u32, u32),
    widget_id: &'static str,
}

const fn case(description: &'static str, payload: &'static str) -> Case {
    Case { description, html: None, payload, event_name: "novaData", size: (800, 600), widget_id: "deadbeef" }
}

const fn page(description: &'static str, html: &'static str) -> Case {
    Case { description, html: Some(html), payload: r#"{"a":1}"#, event_name: "novaData", size: (800, 600), widget_id: "0badc0de" }
}

fn cases() -> Vec<Case> {
    alloc::vec![
        case("fixture document, small object", r#"{"a":1}"#),
        Case { html: Some(PLAIN_HTML), ..case("plain document, small object", r#"{"a":1}"#) },
        Case { html: Some(PLAIN_HTML), ..case("null payload", "null") },
        Case { html: Some(PLAIN_HTML), ..case("script terminator inside a string", r#"{"s":"</script><script>alert(1)</script>"}"#) },
        Case { html: Some(PLAIN_HTML), ..case("mixed-case terminator and comment opener", r#"["</SCRIPT >","<!--","-->","<!-- </sCrIpT"]"#) },
        Case { html: Some(PLAIN_HTML), ..case("quotes, backslashes and ampersands", r#"{"q":"\"&quot;\\\\'&amp;&#x27;","k\"ey":"\\"}"#) },
        Case { html: Some(PLAIN_HTML), ..case("control characters", r#"["\u0000\u0001\u0008\t\n\u000b\f\r\u001b\u001f\u007f"]"#) },
        Case { html: Some(PLAIN_HTML), ..case("astral and non-ASCII text", r#"{"emoji":"\ud83d\ude00 😀","cjk":"図表","rtl":"\u202eabc","nbsp":"\u00a0","ls":"\u2028\u2029"}"#) },
        Case { html: Some(PLAIN_HTML), ..case("integers at the edges", "[0,-1,9007199254740993,18446744073709551615,-9223372036854775808]") },
        Case { html: Some(PLAIN_HTML), ..case("float layouts", "[1.0,-0.0,0.1,1.5e-7,1e16,1.2345e21,123456789012345680,3.141592653589793,-2.5e-300,1.7976931348623157e308,5e-324]") },
        Case { html: Some(PLAIN_HTML), ..case("key order is preserved", r#"{"zeta":1,"alpha":2,"mid":{"y":[],"x":{}}}"#) },
        Case { html: Some(PLAIN_HTML), ..case("nested graph data", r#"{"nodes":[{"id":"a","w":0.5},{"id":"b","w":2}],"links":[{"source":"a","target":"b"}]}"#) },
        Case { html: Some(PLAIN_HTML), ..case("bare string payload", r#""plain text with <b>tags</b> & entities""#) },
        Case { html: Some(PLAIN_HTML), ..case("booleans and empty containers", "[true,false,[],{},\"\"]") },
        Case { html: Some(PLAIN_HTML), event_name: "graph-update_2", size: (1, 1), widget_id: "00000000", ..case("custom event name, minimal size", r#"{"a":1}"#) },
        Case { html: Some(PLAIN_HTML), event_name: "X", size: (4096, 2160), widget_id: "ffffffff", ..case("single-letter event name, large size", "{}") },
        page("no marker, head start tag", "<html><head><meta charset=\"utf-8\"></head><body>x</body></html>"),
        page("no marker, uppercase head with attributes", "<HTML><HEAD data-x=\"a>b\" lang=en><TITLE>T</TITLE></HEAD><BODY></BODY></HTML>"),
        page("no marker, head inside a comment first", "<!-- <head> --><html><head></head><body></body></html>"),
        page("no marker, head text inside a script", "<script>var s = \"<head>\";</script><head></head><p>x</p>"),
        page("no marker, no head", "<p>fragment only</p>"),
        page("empty document", ""),
        page("document with quotes and ampersands", "<html><head></head><body><p title=\"a &amp; b\">\"x\" & 'y'</p></body></html>"),
        page("non-ASCII before head", "<!-- ÅİẞΣ --><html><head><title>Ωμέγα</title></head><body>😀</body></html>"),
        page("marker appears twice", "<head><!--NOVA:BOOTSTRAP--></head><body><!--NOVA:BOOTSTRAP--></body>"),
        page("head-like tag name", "<header>h</header><head></head>"),
    ]
}

/// The vector set. `fixture_html` is used for vector 01; the others carry
/// their own documents.
///
/// # Panics
///
/// Panics if a built-in case is malformed.
pub fn conformance_vectors(fixture_html: &str) -> Vec<ConformanceVector> {
    cases()
        .into_iter()
        .enumerate()
        .map(|(i, case)| {
            let html = case.html.unwrap_or(fixture_html).to_string();
            let payload = JsonValue::parse(case.payload).expect("built-in payload parses");
            let widget_id = WidgetId::parse(case.widget_id).expect("built-in widget id");
            let envelope =
                PayloadEnvelope::new(payload.clone(), case.event_name, widget_id).expect("built-in event name");
            let options = IframeOptions::new(case.size.0, case.size.1).expect("built-in size");
            let expected = render_iframe(&html, &envelope, &options).expect("built-in payload is finite");
            ConformanceVector {
                id: alloc::format!("{:02}", i + 1),
                description: case.description.into(),
                html,
                payload,
                event_name: case.event_name.into(),
                width: case.size.0,
                height: case.size.1,
                widget_id: case.widget_id.into(),
                expected,
            }
        })
        .collect()
}

/// Two-space indented JSON array with a trailing newline.
pub fn vectors_to_json(vectors: &[ConformanceVector]) -> String {
    let mut text = serde_json::to_string_pretty(vectors).expect("vectors serialize");
    text.push('\n');
    text
}
