mod common;

use std::path::Path;

use common::*;
use nova::cli::{run, EXIT_ERROR, EXIT_OK, EXIT_VIOLATIONS};

struct Outcome {
    code: i32,
    out: String,
    err: String,
}

fn nova(cwd: &Path, args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("nova").chain(args.iter().copied());
    let code = run(argv, cwd, &mut out, &mut err);
    Outcome { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn config_arg() -> String {
    fixture_config().to_string_lossy().into_owned()
}

#[test]
fn bundle_then_check_is_clean() {
    let tmp = tempfile::tempdir().unwrap();
    let r = nova(tmp.path(), &["bundle", "-c", &config_arg()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out.lines().count(), 1);
    assert!(r.out.starts_with("wrote Toy Graph.bundle.html ("));
    assert!(tmp.path().join("Toy Graph.bundle.html").is_file());

    let r = nova(tmp.path(), &["check", "Toy Graph.bundle.html"]);
    assert_eq!((r.code, r.out.as_str()), (EXIT_OK, ""));
}

#[test]
fn check_on_the_raw_entry_lists_four_violations() {
    let entry = fixture_dir().join("dist/index.html");
    let r = nova(Path::new("."), &["check", entry.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_VIOLATIONS);
    let lines: Vec<_> = r.out.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("external-image\tfavicon.ico\t"));
    assert!(lines[3].starts_with("external-script\tapp.js\t"));
    for line in &lines {
        let fields: Vec<_> = line.split('\t').collect();
        assert_eq!(fields.len(), 3);
        let offset: usize = fields[2].parse().unwrap();
        assert_eq!(&fixture_entry()[offset..offset + fields[1].len()], fields[1]);
    }
}

#[test]
fn check_allowlist() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("page.html"), r#"<script src="https://cdn.example/x.js"></script>"#).unwrap();
    let r = nova(tmp.path(), &["check", "page.html"]);
    assert_eq!(r.code, EXIT_VIOLATIONS);
    assert_eq!(r.out, "external-script\thttps://cdn.example/x.js\t13\n");
    let r = nova(tmp.path(), &["check", "page.html", "--allow", "https://cdn.example/"]);
    assert_eq!((r.code, r.out.as_str()), (EXIT_OK, ""));
}

#[test]
fn missing_config_is_named() {
    let tmp = tempfile::tempdir().unwrap();
    let r = nova(tmp.path(), &["bundle", "-c", "missing.json"]);
    assert_eq!(r.code, EXIT_ERROR);
    assert!(r.err.contains("missing.json"), "{}", r.err);
    assert!(r.out.is_empty());
    let r = nova(tmp.path(), &["bundle"]);
    assert_eq!(r.code, EXIT_ERROR);
    assert!(r.err.contains("nova.config.json"), "{}", r.err);
}

#[test]
fn usage_errors_exit_one_on_stderr() {
    for args in [&["frobnicate"][..], &["bundle", "--bogus"], &[], &["check"]] {
        let r = nova(Path::new("."), args);
        assert_eq!(r.code, EXIT_ERROR, "{args:?}");
        assert!(r.out.is_empty(), "{args:?}");
        assert!(r.err.to_lowercase().contains("usage"), "{args:?}: {}", r.err);
    }
    let r = nova(Path::new("."), &["--help"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("scaffold"));
}

#[test]
fn scaffold_and_demo_defaults() {
    let tmp = tempfile::tempdir().unwrap();
    let report = tmp.path().join("report.json");
    let r = nova(tmp.path(), &["scaffold", "-c", &config_arg(), "--report-json", report.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out, "wrote toygraph/ (6 files)\n");
    assert!(tmp.path().join("toygraph/toygraph/widget.html").is_file());
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["inlined"].as_array().unwrap().len(), 5);
    for key in ["inlined", "kept_external", "warnings", "violations", "total_output_bytes"] {
        assert!(json.get(key).is_some(), "{key}");
    }

    let r = nova(tmp.path(), &["scaffold", "-c", &config_arg()]);
    assert_eq!(r.code, EXIT_ERROR);
    assert!(r.err.contains("--overwrite"), "{}", r.err);
    let r = nova(tmp.path(), &["scaffold", "-c", &config_arg(), "--overwrite"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);

    let r = nova(tmp.path(), &["demo", "-c", &config_arg()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out, "wrote demo-site/ (1 files)\n");
    assert!(tmp.path().join("demo-site/demo/index.html").is_file());
}

#[test]
fn from_bundle_uses_the_given_file() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(nova(tmp.path(), &["bundle", "-c", &config_arg(), "-o", "b.html"]).code, EXIT_OK);
    let r = nova(tmp.path(), &["scaffold", "-c", &config_arg(), "--from-bundle", "b.html", "-o", "pkg"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(
        std::fs::read(tmp.path().join("pkg/toygraph/widget.html")).unwrap(),
        std::fs::read(tmp.path().join("b.html")).unwrap()
    );

    std::fs::write(tmp.path().join("raw.html"), "<p>not bundled</p>").unwrap();
    let r = nova(tmp.path(), &["demo", "-c", &config_arg(), "--from-bundle", "raw.html"]);
    assert_eq!(r.code, EXIT_ERROR);
    assert!(r.err.contains("marker"), "{}", r.err);

    let r = nova(tmp.path(), &["demo", "-c", &config_arg(), "--from-bundle", "b.html", "--report-json", "r.json"]);
    assert_eq!(r.code, EXIT_ERROR);
}

#[test]
fn invalid_config_reports_key() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(
        tmp.path().join("nova.config.json"),
        r#"{"name":"x","entry":"index.html","root":".","package":{"package_name":"Bad-Name"}}"#,
    )
    .unwrap();
    let r = nova(tmp.path(), &["bundle"]);
    assert_eq!(r.code, EXIT_ERROR);
    assert!(r.err.contains("package.package_name"), "{}", r.err);

    std::fs::write(
        tmp.path().join("nova.config.json"),
        r#"{"name":"x","entry":"index.html","root":".","package":{"package_name":"ok"}}"#,
    )
    .unwrap();
    let r = nova(tmp.path(), &["bundle"]);
    assert_eq!(r.code, EXIT_ERROR);
    assert!(r.err.contains("index.html"), "{}", r.err);
}

#[test]
fn vectors_subcommand_matches_checked_in_file() {
    let r = nova(Path::new("."), &["vectors", "-c", &config_arg()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out, std::fs::read_to_string(vectors_file()).unwrap());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_nova");
    let entry = fixture_dir().join("dist/index.html");
    let status = std::process::Command::new(bin).arg("check").arg(&entry).output().unwrap();
    assert_eq!(status.status.code(), Some(2));
    assert_eq!(String::from_utf8_lossy(&status.stdout).lines().count(), 4);
    let status = std::process::Command::new(bin).arg("nope").output().unwrap();
    assert_eq!(status.status.code(), Some(1));
    assert!(status.stdout.is_empty());
}

#[derive(Debug, Clone, Copy)]
enum Step {
    Bundle,
    Scaffold,
    Demo,
    CheckBundled,
    CheckRaw,
    Unknown,
}

mod matrix {
    use super::*;
    use proptest::prelude::*;

    fn expected(step: Step, config_ok: bool, bogus_flag: bool) -> i32 {
        match step {
            _ if bogus_flag => EXIT_ERROR,
            Step::Unknown => EXIT_ERROR,
            Step::CheckRaw => EXIT_VIOLATIONS,
            Step::CheckBundled => EXIT_OK,
            _ if !config_ok => EXIT_ERROR,
            _ => EXIT_OK,
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn exit_codes_follow_the_contract(
            step in prop::sample::select(vec![Step::Bundle, Step::Scaffold, Step::Demo, Step::CheckBundled, Step::CheckRaw, Step::Unknown]),
            config_ok in any::<bool>(),
            bogus_flag in any::<bool>(),
        ) {
            let tmp = tempfile::tempdir().unwrap();
            let bundled = tmp.path().join("bundled.html");
            std::fs::write(&bundled, fixture().bundle().unwrap().html).unwrap();
            let raw = fixture_dir().join("dist/index.html");
            let config = if config_ok { config_arg() } else { "absent.json".to_string() };
            let mut args: Vec<String> = match step {
                Step::Bundle => vec!["bundle".into(), "-c".into(), config],
                Step::Scaffold => vec!["scaffold".into(), "-c".into(), config],
                Step::Demo => vec!["demo".into(), "-c".into(), config],
                Step::CheckBundled => vec!["check".into(), bundled.to_string_lossy().into()],
                Step::CheckRaw => vec!["check".into(), raw.to_string_lossy().into()],
                Step::Unknown => vec!["publish".into()],
            };
            if bogus_flag {
                args.push("--no-such-flag".into());
            }
            let argv: Vec<&str> = args.iter().map(String::as_str).collect();
            let r = nova(tmp.path(), &argv);
            prop_assert_eq!(r.code, expected(step, config_ok, bogus_flag), "{:?}: {}", argv, r.err);
            if r.code == EXIT_ERROR {
                prop_assert!(!r.err.is_empty());
            }
        }
    }
}
