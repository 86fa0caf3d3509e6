use nova_core::{
    bundle, check, encode_payload, escape_srcdoc, inject_bootstrap, parse_config, render_iframe, scan_html,
    unescape_srcdoc, BundleConfig, IframeOptions, JsonValue, MemoryProvider, Number, PackageSpec, PayloadEnvelope,
    RelPath, WidgetId, BOOTSTRAP_MARKER,
};
use proptest::prelude::*;
use regex::Regex;

fn json_strategy() -> impl Strategy<Value = JsonValue> {
    let text = prop_oneof![
        any::<String>(),
        prop::sample::select(vec!["</script>", "</SCRIPT ", "<!--", "-->", "\"", "\\", "&quot;", "&amp;", "😀", "\u{2028}"])
            .prop_map(String::from),
    ];
    let leaf = prop_oneof![
        Just(JsonValue::Null),
        any::<bool>().prop_map(JsonValue::Bool),
        any::<i64>().prop_map(JsonValue::from),
        any::<u64>().prop_map(JsonValue::from),
        any::<f64>().prop_filter("finite", |f| f.is_finite()).prop_map(JsonValue::from),
        text.clone().prop_map(JsonValue::String),
    ];
    leaf.prop_recursive(3, 32, 4, move |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..4).prop_map(JsonValue::Array),
            prop::collection::vec((text.clone(), inner), 0..4).prop_map(|members| {
                let mut unique: Vec<(String, JsonValue)> = Vec::new();
                for (k, v) in members {
                    if unique.iter().all(|(u, _)| *u != k) {
                        unique.push((k, v));
                    }
                }
                JsonValue::Object(unique)
            }),
        ]
    })
}

fn same(a: &JsonValue, b: &JsonValue) -> bool {
    match (a, b) {
        (JsonValue::Number(Number::Float(x)), JsonValue::Number(Number::Float(y))) => x.to_bits() == y.to_bits(),
        (JsonValue::Array(x), JsonValue::Array(y)) => x.len() == y.len() && x.iter().zip(y).all(|(p, q)| same(p, q)),
        (JsonValue::Object(x), JsonValue::Object(y)) => {
            x.len() == y.len() && x.iter().zip(y).all(|((k1, v1), (k2, v2))| k1 == k2 && same(v1, v2))
        }
        _ => a == b,
    }
}

fn envelope(data: JsonValue) -> PayloadEnvelope {
    PayloadEnvelope::new(data, "novaData", WidgetId::parse("c0ffee00").unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn srcdoc_escaping_is_invertible(text in any::<String>()) {
        let escaped = escape_srcdoc(&text);
        prop_assert!(!escaped.contains('"'));
        prop_assert_eq!(unescape_srcdoc(&escaped), text);
    }

    #[test]
    fn script_json_parses_back(value in json_strategy()) {
        let text = value.to_script_json().unwrap();
        prop_assert!(!text.contains('<') && !text.contains('>') && !text.contains('&'));
        let back = JsonValue::parse(&text).unwrap();
        prop_assert!(same(&back, &value), "{} -> {}", value, back);
    }

    #[test]
    fn floats_round_trip_with_a_marker(f in any::<f64>().prop_filter("finite", |f| f.is_finite())) {
        let text = JsonValue::from(f).to_script_json().unwrap();
        prop_assert!(text.contains('.') || text.contains('e'), "{}", text);
        prop_assert_eq!(text.parse::<f64>().unwrap().to_bits(), f.to_bits());
    }

    #[test]
    fn bootstrap_body_never_closes_the_script(value in json_strategy()) {
        let script = encode_payload(&envelope(value)).unwrap();
        let body = &script[script.find('>').unwrap() + 1..script.len() - "</script>".len()];
        prop_assert!(!body.to_ascii_lowercase().contains("</script"));
        prop_assert!(!body.contains("<!--"));
    }

    #[test]
    fn iframe_round_trips_the_payload(value in json_strategy(), w in 1u32..5000, h in 1u32..5000) {
        let html = "<html><head><!--NOVA:BOOTSTRAP--></head><body>\"&\"</body></html>";
        let fragment = render_iframe(html, &envelope(value.clone()), &IframeOptions::new(w, h).unwrap()).unwrap();
        prop_assert_eq!(fragment.matches("<iframe").count(), 1);
        let start = fragment.find("srcdoc=\"").unwrap() + 8;
        let end = start + fragment[start..].find('"').unwrap();
        let doc = unescape_srcdoc(&fragment[start..end]);
        let prefix = "window.__NOVA_PAYLOAD__ = ";
        let at = doc.find(prefix).unwrap() + prefix.len();
        let mut de = serde_json::Deserializer::from_str(&doc[at..]);
        let back: JsonValue = serde::Deserialize::deserialize(&mut de).unwrap();
        prop_assert!(same(&back, &value));
        let dims = format!("width=\"{}\" height=\"{}\"", w, h);
        let tail = format!("\" {} frameborder=\"0\" style=\"border:none;\"></iframe>", dims);
        prop_assert!(fragment.ends_with(&tail));
    }

    #[test]
    fn injection_only_inserts(html in "[<>a-zA-Z /=\"'!-]{0,60}", marker in any::<bool>()) {
        let html = if marker { format!("{html}{BOOTSTRAP_MARKER}{html}") } else { html.replace(BOOTSTRAP_MARKER, "") };
        let bootstrap = "<script id=\"b\">x</script>";
        let out = inject_bootstrap(&html, bootstrap);
        let at = out.find(bootstrap).unwrap();
        let rest = format!("{}{}", &out[..at], &out[at + bootstrap.len()..]);
        let expected = if marker { html.replacen(BOOTSTRAP_MARKER, "", 1) } else { html.clone() };
        prop_assert_eq!(rest, expected);
    }
}

#[derive(Debug, Clone)]
enum Piece {
    Script(String),
    Img(String),
    Style(String),
    Text(String),
    Comment(String),
}

fn url_strategy() -> impl Strategy<Value = String> {
    prop_oneof![
        "[a-z]{1,8}\\.(js|png|css)",
        "\\.\\./[a-z]{1,5}/[a-z]{1,5}\\.png",
        "https://cdn\\.example/[a-z]{1,6}",
        "data:text/plain,[a-z]{0,5}",
        Just("#frag".to_string()),
    ]
}

fn piece_strategy() -> impl Strategy<Value = Piece> {
    prop_oneof![
        url_strategy().prop_map(Piece::Script),
        url_strategy().prop_map(Piece::Img),
        url_strategy().prop_map(Piece::Style),
        "[a-z ]{0,12}".prop_map(Piece::Text),
        url_strategy().prop_map(Piece::Comment),
    ]
}

fn render(pieces: &[Piece]) -> String {
    pieces
        .iter()
        .map(|p| match p {
            Piece::Script(u) => format!("<script src=\"{u}\"></script>"),
            Piece::Img(u) => format!("<img alt=x src=\"{u}\">"),
            Piece::Style(u) => format!("<link rel=\"stylesheet\" href=\"{u}\">"),
            Piece::Text(t) => t.clone(),
            Piece::Comment(u) => format!("<!-- <img src=\"{u}\"> -->"),
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn scan_spans_and_violation_counts(pieces in prop::collection::vec(piece_strategy(), 0..12)) {
        let html = render(&pieces);
        let scanned = scan_html(&html, "index.html");
        for r in &scanned.refs {
            prop_assert_eq!(r.byte_span.slice(&html), r.url.as_str());
        }
        // Oracle: strip comments, then count URL attributes that are
        // neither data URIs nor fragments.
        let comments = Regex::new(r"(?s)<!--.*?-->").unwrap();
        let refs = Regex::new(r#"<(?:script src|img alt=x src|link rel="stylesheet" href)="([^"]*)""#).unwrap();
        let visible = comments.replace_all(&html, "");
        let expected = refs
            .captures_iter(&visible)
            .filter(|c| !c[1].starts_with("data:") && !c[1].starts_with('#'))
            .count();
        prop_assert_eq!(check(&html, &[] as &[&str]).len(), expected);
        prop_assert_eq!(check(&html, &["https://cdn.example/"]).len(),
            expected - refs.captures_iter(&visible).filter(|c| c[1].starts_with("https://cdn.example/")).count());
    }

    #[test]
    fn bundling_is_idempotent(names in prop::collection::btree_set("[a-z]{1,6}", 1..4), bytes in prop::collection::vec(any::<u8>(), 0..64)) {
        let mut files = MemoryProvider::new();
        let mut body = String::new();
        for (i, name) in names.iter().enumerate() {
            match i % 3 {
                0 => {
                    files.insert(&format!("{name}.png"), bytes.clone());
                    body.push_str(&format!("<img src=\"{name}.png\">"));
                }
                1 => {
                    files.insert(&format!("{name}.js"), format!("var {name} = 1;"));
                    body.push_str(&format!("<script src=\"{name}.js\"></script>"));
                }
                _ => {
                    files.insert(&format!("{name}.css"), format!(".{name} {{ color: red }}"));
                    body.push_str(&format!("<link rel=\"stylesheet\" href=\"{name}.css\">"));
                }
            }
        }
        files.insert("index.html", format!("<html><head><title>t</title></head><body>{body}</body></html>"));
        let config = BundleConfig::new("t", RelPath::parse("index.html").unwrap(), ".", PackageSpec::new("t"));
        let once = bundle(&config, &files).unwrap();
        prop_assert!(once.report.violations.is_empty());
        prop_assert_eq!(once.report.inlined.len(), names.len());
        let again = bundle(&config, &MemoryProvider::new().with("index.html", once.html.clone())).unwrap();
        prop_assert_eq!(again.html, once.html);
    }
}

const BASE_CONFIG: &str = r#"{
  "name": "Toy",
  "entry": "index.html",
  "root": "dist",
  "event_name": "novaData",
  "asset_map": ["model.wasm"],
  "package": {
    "package_name": "toy",
    "params": ["data", {"name": "weights", "required": true}],
    "default_width": 640
  }
}"#;

fn mutation_strategy() -> impl Strategy<Value = (Vec<&'static str>, serde_json::Value)> {
    let path = prop::sample::select(vec![
        vec!["name"],
        vec!["entry"],
        vec!["event_name"],
        vec!["max_size_mb"],
        vec!["asset_map"],
        vec!["package", "package_name"],
        vec!["package", "version"],
        vec!["package", "function_name"],
        vec!["package", "default_width"],
        vec!["package", "params"],
    ]);
    let value = prop_oneof![
        Just(serde_json::json!(null)),
        Just(serde_json::json!(0)),
        Just(serde_json::json!(-3.5)),
        Just(serde_json::json!("")),
        Just(serde_json::json!("../x")),
        Just(serde_json::json!("/abs")),
        Just(serde_json::json!("1.2.3")),
        Just(serde_json::json!("class")),
        Just(serde_json::json!("ok_name")),
        Just(serde_json::json!(["width"])),
        Just(serde_json::json!(["a", "a"])),
        Just(serde_json::json!([1])),
        Just(serde_json::json!({})),
    ];
    (path, value)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn config_mutations_parse_or_fail_cleanly((path, value) in mutation_strategy()) {
        let mut doc: serde_json::Value = serde_json::from_str(BASE_CONFIG).unwrap();
        let mut slot = &mut doc;
        for key in &path {
            slot = &mut slot[*key];
        }
        *slot = value;
        let text = doc.to_string();
        match parse_config(&text) {
            Ok((config, _)) => {
                prop_assert!(config.validate().is_ok());
                let canonical = config.to_canonical_json();
                let (again, warnings) = parse_config(&canonical).unwrap();
                prop_assert!(warnings.is_empty());
                prop_assert_eq!(again, config);
            }
            Err(e) => {
                let msg = e.to_string();
                prop_assert!(!msg.is_empty());
            }
        }
    }
}

#[test]
fn base_config_is_valid() {
    let (config, warnings) = parse_config(BASE_CONFIG).unwrap();
    assert!(warnings.is_empty());
    assert_eq!(config.package.params.len(), 2);
    assert!(config.package.params[1].required);
    assert_eq!(config.package.default_width, 640);
}
