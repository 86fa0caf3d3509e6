//! Turns a pre-built, serverless web app into a single self-contained HTML
//! file, and wraps that file as a notebook widget.
//!
//! The crate is `no_std` (it needs `alloc`) and performs no IO of its own:
//! file access goes through [`FileProvider`], and everything else is a pure
//! function from text to text.
//!
//! The pipeline has three stages:
//!
//! 1. [`bundle`] scans the entry document with [`scan_html`] / [`scan_css`]
//!    and splices every local asset back in as inline text or a data URI.
//! 2. [`render_iframe`] delivers a JSON payload to the bundled app through a
//!    one-way bootstrap script and embeds it as an iframe `srcdoc`.
//! 3. [`scaffold`] and [`generate_demo`] produce the installable Python
//!    package tree and a static demo page.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod codegen;
pub mod config;
pub mod css;
pub mod demo;
pub mod html;
pub mod inline;
pub mod json;
pub mod mime;
pub mod path;
pub mod protocol;
pub mod provider;
pub mod report;
pub mod scan;
pub mod vectors;

pub use codegen::{render_project_metadata, scaffold, CodegenError, PackageTree};
pub use config::{
    parse_config, validate_paths, BundleConfig, ConfigError, ConfigWarning, PackageSpec, ParamSpec,
};
pub use demo::{generate_demo, DEMO_PATH};
pub use inline::{bundle, check, to_data_uri, Bundle, BundleError};
pub use json::{JsonValue, Number};
pub use mime::infer_mime;
pub use path::{PathError, RelPath};
pub use protocol::{
    encode_payload, escape_srcdoc, inject_bootstrap, render_iframe, unescape_srcdoc,
    IframeOptions, PayloadEnvelope, PayloadError, WidgetId, WidgetIdError,
};
pub use provider::{FileError, FileProvider, MemoryProvider};
pub use report::{
    BundleReport, ExternalReason, InlinedAsset, KeptExternal, Location, Violation, ViolationRule,
    Warning,
};
pub use vectors::{conformance_vectors, vectors_to_json, ConformanceVector};
pub use scan::{
    classify_url, scan_css, scan_html, AssetKind, AssetRef, ByteSpan, RefSource, ScanResult,
    SourceKind, UrlClass,
};

/// Comment marker that the bundler places at the top of `<head>`; the
/// bootstrap script replaces it.
pub const BOOTSTRAP_MARKER: &str = "<!--NOVA:BOOTSTRAP-->";
/// Global that receives the payload before the app's scripts run.
pub const PAYLOAD_GLOBAL: &str = "__NOVA_PAYLOAD__";
/// Global that carries the configured event name.
pub const EVENT_GLOBAL: &str = "__NOVA_EVENT__";
/// Global holding the asset map (relative path to data URI).
pub const ASSETS_GLOBAL: &str = "__NOVA_ASSETS__";
/// Event name used when a config does not set one.
pub const DEFAULT_EVENT_NAME: &str = "novaData";
/// `id` prefix of the bootstrap `<script>`.
pub const BOOTSTRAP_ID_PREFIX: &str = "nova-bootstrap-";
/// `id` prefix of the widget `<iframe>`.
pub const IFRAME_ID_PREFIX: &str = "nova-widget-";
