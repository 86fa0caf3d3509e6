//! Extension-based MIME lookup for data URIs.

pub const FALLBACK_MIME: &str = "application/octet-stream";

const TABLE: &[(&str, &str)] = &[
    ("html", "text/html"),
    ("js", "text/javascript"),
    ("mjs", "text/javascript"),
    ("css", "text/css"),
    ("png", "image/png"),
    ("jpg", "image/jpeg"),
    ("jpeg", "image/jpeg"),
    ("gif", "image/gif"),
    ("svg", "image/svg+xml"),
    ("webp", "image/webp"),
    ("ico", "image/x-icon"),
    ("woff", "font/woff"),
    ("woff2", "font/woff2"),
    ("ttf", "font/ttf"),
    ("otf", "font/otf"),
    ("wasm", "application/wasm"),
    ("json", "application/json"),
    ("txt", "text/plain"),
    ("bin", "application/octet-stream"),
];

/// MIME type for a known extension (case-insensitive), `None` otherwise.
pub fn lookup_mime(path: &str) -> Option<&'static str> {
    let name = path.rsplit('/').next().unwrap_or(path);
    let (_, ext) = name.rsplit_once('.')?;
    TABLE.iter().find(|(e, _)| e.eq_ignore_ascii_case(ext)).map(|(_, m)| *m)
}

/// MIME type for `path`, falling back to `application/octet-stream`.
/// Callers that care about the fallback should use [`lookup_mime`].
pub fn infer_mime(path: &str) -> &'static str {
    lookup_mime(path).unwrap_or(FALLBACK_MIME)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_entries() {
        assert_eq!(infer_mime("model.wasm"), "application/wasm");
        assert_eq!(infer_mime("logo.svg"), "image/svg+xml");
        assert_eq!(infer_mime("data.unknownext"), "application/octet-stream");
        assert_eq!(lookup_mime("data.unknownext"), None);
        assert_eq!(infer_mime("dir.v2/FONT.WOFF2"), "font/woff2");
        assert_eq!(lookup_mime("dir.js/noext"), None);
        assert_eq!(lookup_mime("x.bin"), Some("application/octet-stream"));
    }
}
