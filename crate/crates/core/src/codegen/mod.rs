//! Generation of the installable Python widget package.
//!
//! The package wraps the bundled document: `widget.html` ships as a package
//! resource, `_runtime.py` is vendored verbatim from
//! `templates/python/_runtime.py`, and `__init__.py` defines one wrapper
//! function whose keyword arguments become the payload.

pub mod template;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::config::{BundleConfig, PackageSpec};
use crate::path::RelPath;
use crate::BOOTSTRAP_MARKER;
use template::{python_docstring, python_string, render, toml_string};

/// The canonical wrapper runtime, shared by every generated package.
pub const RUNTIME_TEMPLATE: &str = include_str!("../../templates/python/_runtime.py");
const PYPROJECT_TEMPLATE: &str = include_str!("../../templates/python/pyproject.toml.tmpl");
const README_TEMPLATE: &str = include_str!("../../templates/python/README.md.tmpl");
const LICENSE_TEMPLATE: &str = include_str!("../../templates/python/LICENSE.tmpl");
const INIT_TEMPLATE: &str = include_str!("../../templates/python/__init__.py.tmpl");

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodegenError {
    #[error("bundled HTML lacks the bootstrap marker `{BOOTSTRAP_MARKER}`; bundle it first")]
    MissingMarker,
    #[error("payload value at `{0}` is not representable as JSON (non-finite number)")]
    Payload(String),
    #[error("{0}")]
    Invalid(String),
}

/// Relative path to file bytes, iterated in lexicographic path order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PackageTree {
    files: BTreeMap<RelPath, Vec<u8>>,
}

impl PackageTree {
    pub fn new() -> Self {
        Self::default()
    }

    /// # Panics
    ///
    /// Panics if `path` is not a normalized relative path.
    pub fn insert(&mut self, path: &str, bytes: impl Into<Vec<u8>>) {
        let rel = RelPath::parse(path).expect("package paths are relative");
        assert_eq!(rel.as_str(), path, "package paths must be normalized");
        self.files.insert(rel, bytes.into());
    }

    pub fn get(&self, path: &str) -> Option<&[u8]> {
        let rel = RelPath::parse(path).ok()?;
        self.files.get(&rel).map(Vec::as_slice)
    }

    pub fn paths(&self) -> impl Iterator<Item = &str> {
        self.files.keys().map(RelPath::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[u8])> {
        self.files.iter().map(|(p, b)| (p.as_str(), b.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.files.len()
    }

    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }
}

/// `pyproject.toml` for the package. No runtime dependencies; `widget.html`
/// is declared as package data so it lands in both sdist and wheel.
pub fn render_project_metadata(spec: &PackageSpec) -> String {
    render(
        PYPROJECT_TEMPLATE,
        &[
            ("name", &toml_string(&spec.package_name)),
            ("version", &toml_string(&spec.version)),
            ("description", &toml_string(&spec.description)),
            ("package", &toml_string(&spec.package_name)),
            ("package_key", &spec.package_name),
        ],
    )
}

pub fn install_command(spec: &PackageSpec) -> String {
    format!("pip install {}", spec.package_name)
}

/// Three-line usage example: import, blank line, call.
pub fn usage_snippet(spec: &PackageSpec) -> String {
    let mut args: Vec<String> = spec.params.iter().map(|p| format!("{0}=my_{0}", p.name)).collect();
    args.push(format!("width={}", spec.default_width));
    args.push(format!("height={}", spec.default_height));
    format!(
        "from {pkg} import {func}\n\n{func}({args})",
        pkg = spec.package_name,
        func = spec.function_name,
        args = args.join(", ")
    )
}

fn wrapper_signature(spec: &PackageSpec) -> String {
    let mut parts = alloc::vec!["*".to_string()];
    for p in &spec.params {
        if p.required {
            parts.push(p.name.clone());
        } else {
            parts.push(format!("{}=None", p.name));
        }
    }
    parts.push(format!("width={}", spec.default_width));
    parts.push(format!("height={}", spec.default_height));
    parts.push("widget_id=None".into());
    parts.join(", ")
}

fn wrapper_payload(spec: &PackageSpec) -> String {
    let members: Vec<String> =
        spec.params.iter().map(|p| format!("{}: {}", python_string(&p.name), p.name)).collect();
    format!("{{{}}}", members.join(", "))
}

fn wrapper_doc(config: &BundleConfig) -> String {
    let spec = &config.package;
    let mut doc = format!("Show {} in a notebook cell.\n\n    Parameters\n    ----------\n", config.name);
    for p in &spec.params {
        let need = if p.required { "required" } else { "optional" };
        doc.push_str(&format!("    {} : JSON-serializable, {need}\n", p.name));
        if !p.doc.is_empty() {
            doc.push_str(&format!("        {}\n", p.doc.replace('\n', "\n        ")));
        }
    }
    doc.push_str(&format!("    width : int, default {}\n        Widget width in pixels.\n", spec.default_width));
    doc.push_str(&format!("    height : int, default {}\n        Widget height in pixels.\n", spec.default_height));
    doc.push_str("    widget_id : str, optional\n        Eight lowercase hex digits; a fresh id is drawn when omitted.\n    ");
    python_docstring(&doc)
}

fn module_doc(config: &BundleConfig) -> String {
    let summary = if config.package.description.is_empty() {
        format!("{} notebook widget.", config.name)
    } else {
        config.package.description.clone()
    };
    python_docstring(&summary)
}

/// Generates the package tree around `bundled_html`.
pub fn scaffold(config: &BundleConfig, bundled_html: &str) -> Result<PackageTree, CodegenError> {
    if !bundled_html.contains(BOOTSTRAP_MARKER) {
        return Err(CodegenError::MissingMarker);
    }
    let spec = &config.package;
    let pkg = &spec.package_name;
    let mut tree = PackageTree::new();

    tree.insert("pyproject.toml", render_project_metadata(spec));
    let title = config.name.replace('\n', " ");
    let description = if spec.description.is_empty() {
        format!("{} as a notebook widget.", config.name)
    } else {
        spec.description.clone()
    };
    tree.insert(
        "README.md",
        render(
            README_TEMPLATE,
            &[
                ("title", &title),
                ("description", &description),
                ("install", &install_command(spec)),
                ("usage", &usage_snippet(spec)),
            ],
        ),
    );
    tree.insert("LICENSE", render(LICENSE_TEMPLATE, &[("package", pkg)]));
    tree.insert(
        &format!("{pkg}/__init__.py"),
        render(
            INIT_TEMPLATE,
            &[
                ("module_doc", &module_doc(config)),
                ("function_name_literal", &python_string(&spec.function_name)),
                ("version_literal", &python_string(&spec.version)),
                ("name_literal", &python_string(&config.name)),
                ("event_name_literal", &python_string(&config.event_name)),
                ("function_name", &spec.function_name),
                ("signature", &wrapper_signature(spec)),
                ("function_doc", &wrapper_doc(config)),
                ("payload", &wrapper_payload(spec)),
            ],
        ),
    );
    tree.insert(&format!("{pkg}/_runtime.py"), RUNTIME_TEMPLATE);
    tree.insert(&format!("{pkg}/widget.html"), bundled_html);
    Ok(tree)
}
