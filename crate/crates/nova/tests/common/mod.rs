#![allow(dead_code)]

use std::path::{Path, PathBuf};

use nova::{load_project, Project};

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/graph-app")
}

pub fn fixture_config() -> PathBuf {
    fixture_dir().join("nova.config.json")
}

pub fn vectors_file() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/conformance_vectors.json")
}

pub fn runtime_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/templates/python")
}

pub fn fixture() -> Project {
    load_project(&fixture_config()).expect("fixture config loads")
}

pub fn fixture_entry() -> String {
    std::fs::read_to_string(fixture_dir().join("dist/index.html")).unwrap()
}

/// Undoes srcdoc escaping by hand, independently of the library.
pub fn oracle_unescape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(i) = rest.find('&') {
        out.push_str(&rest[..i]);
        let tail = &rest[i..];
        if let Some(t) = tail.strip_prefix("&quot;") {
            out.push('"');
            rest = t;
        } else if let Some(t) = tail.strip_prefix("&amp;") {
            out.push('&');
            rest = t;
        } else {
            panic!("unexpected `&` in escaped srcdoc: {:?}", &tail[..tail.len().min(12)]);
        }
    }
    out.push_str(rest);
    out
}

/// The value of the first double-quoted `srcdoc` attribute after `from`.
pub fn srcdoc_after(fragment: &str, from: usize) -> Option<(&str, usize)> {
    let start = fragment[from..].find("srcdoc=\"")? + from + "srcdoc=\"".len();
    let len = fragment[start..].find('"')?;
    Some((&fragment[start..start + len], start + len))
}

pub fn all_srcdocs(page: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut at = 0;
    while let Some((doc, end)) = srcdoc_after(page, at) {
        out.push(doc);
        at = end;
    }
    out
}

/// Parses the JSON value assigned to `window.__NOVA_PAYLOAD__` in `doc`.
pub fn extract_payload(doc: &str) -> serde_json::Value {
    let prefix = "window.__NOVA_PAYLOAD__ = ";
    let start = doc.find(prefix).expect("bootstrap present") + prefix.len();
    // Deserialize one value and ignore what follows it.
    let mut de = serde_json::Deserializer::from_str(&doc[start..]);
    serde::Deserialize::deserialize(&mut de).expect("valid JSON")
}

pub fn python3() -> Option<&'static str> {
    let ok = std::process::Command::new("python3").arg("--version").output().map(|o| o.status.success());
    matches!(ok, Ok(true)).then_some("python3")
}
