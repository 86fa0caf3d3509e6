//! Project configuration (`nova.config.json`): schema, defaults and
//! validation.
//!
//! Parsing is done by hand over a `serde_json::Value` rather than with a
//! derived `Deserialize`, so every error can name the exact key at fault
//! and unknown keys can be reported instead of rejected.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::path::{PathError, RelPath};
use crate::provider::FileProvider;
use crate::DEFAULT_EVENT_NAME;

pub const DEFAULT_FUNCTION_NAME: &str = "visualize";
pub const DEFAULT_VERSION: &str = "0.1.0";
pub const DEFAULT_MAX_SIZE_MB: f64 = 20.0;
pub const DEFAULT_WIDTH: u32 = 800;
pub const DEFAULT_HEIGHT: u32 = 600;

/// Wrapper parameters that the generated function always defines itself.
pub const RESERVED_PARAMS: &[&str] = &["width", "height", "widget_id"];

const PYTHON_KEYWORDS: &[&str] = &[
    "False", "None", "True", "and", "as", "assert", "async", "await", "break", "class", "continue", "def",
    "del", "elif", "else", "except", "finally", "for", "from", "global", "if", "import", "in", "is",
    "lambda", "nonlocal", "not", "or", "pass", "raise", "return", "try", "while", "with", "yield",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamSpec {
    pub name: String,
    pub required: bool,
    pub doc: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PackageSpec {
    pub package_name: String,
    pub function_name: String,
    pub version: String,
    pub description: String,
    pub params: Vec<ParamSpec>,
    pub default_width: u32,
    pub default_height: u32,
}

impl PackageSpec {
    /// A spec with every optional field at its default.
    pub fn new(package_name: impl Into<String>) -> Self {
        PackageSpec {
            package_name: package_name.into(),
            function_name: DEFAULT_FUNCTION_NAME.into(),
            version: DEFAULT_VERSION.into(),
            description: String::new(),
            params: Vec::new(),
            default_width: DEFAULT_WIDTH,
            default_height: DEFAULT_HEIGHT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BundleConfig {
    pub name: String,
    pub entry: RelPath,
    pub root: String,
    pub event_name: String,
    pub allow_external: Vec<String>,
    pub asset_map: Vec<RelPath>,
    pub inject_fetch_shim: bool,
    pub max_size_mb: f64,
    pub package: PackageSpec,
    pub sample_payload: Option<RelPath>,
    /// Link shown on the demo page next to the simulated notebook cell.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notebook_url: Option<String>,
}

impl BundleConfig {
    /// A config with every optional field at its default.
    pub fn new(name: impl Into<String>, entry: RelPath, root: impl Into<String>, package: PackageSpec) -> Self {
        BundleConfig {
            name: name.into(),
            entry,
            root: root.into(),
            event_name: DEFAULT_EVENT_NAME.into(),
            allow_external: Vec::new(),
            asset_map: Vec::new(),
            inject_fetch_shim: false,
            max_size_mb: DEFAULT_MAX_SIZE_MB,
            package,
            sample_payload: None,
            notebook_url: None,
        }
    }

    /// Two-space indented JSON, keys in schema order.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Runs every invariant check that [`parse_config`] applies.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.name.trim().is_empty() || self.name.chars().any(char::is_control) {
            return Err(invalid("name", &self.name, "must be non-empty text without control characters"));
        }
        if self.root.is_empty() {
            return Err(invalid("root", &self.root, "must be a non-empty directory path"));
        }
        if !is_event_name(&self.event_name) {
            return Err(invalid("event_name", &self.event_name, "must match [A-Za-z][A-Za-z0-9_-]*"));
        }
        for (i, prefix) in self.allow_external.iter().enumerate() {
            if prefix.is_empty() {
                return Err(invalid(&format!("allow_external[{i}]"), prefix, "must be a non-empty URL prefix"));
            }
        }
        if !(self.max_size_mb.is_finite() && self.max_size_mb > 0.0) {
            return Err(invalid("max_size_mb", &format!("{}", self.max_size_mb), "must be a positive number"));
        }
        let pkg = &self.package;
        if !is_package_identifier(&pkg.package_name) {
            return Err(invalid(
                "package.package_name",
                &pkg.package_name,
                "must match [a-z][a-z0-9_]* and not be a Python keyword",
            ));
        }
        if !is_python_identifier(&pkg.function_name) {
            return Err(invalid(
                "package.function_name",
                &pkg.function_name,
                "must be a Python identifier ([A-Za-z_][A-Za-z0-9_]*, not a keyword)",
            ));
        }
        if semver::Version::parse(&pkg.version).is_err() {
            return Err(invalid("package.version", &pkg.version, "must be a semantic version (MAJOR.MINOR.PATCH)"));
        }
        if pkg.default_width == 0 {
            return Err(invalid("package.default_width", "0", "must be a positive integer"));
        }
        if pkg.default_height == 0 {
            return Err(invalid("package.default_height", "0", "must be a positive integer"));
        }
        for (i, param) in pkg.params.iter().enumerate() {
            let key = format!("package.params[{i}].name");
            if !is_package_identifier(&param.name) {
                return Err(invalid(&key, &param.name, "must match [a-z][a-z0-9_]* and not be a Python keyword"));
            }
            if RESERVED_PARAMS.contains(&param.name.as_str()) {
                return Err(invalid(&key, &param.name, "is reserved (width, height, widget_id)"));
            }
            if pkg.params[..i].iter().any(|p| p.name == param.name) {
                return Err(invalid(&key, &param.name, "duplicates an earlier parameter"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("malformed config JSON: {0}")]
    Json(String),
    #[error("config must be a JSON object")]
    NotAnObject,
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("key `{key}` must be {expected}")]
    WrongType { key: String, expected: &'static str },
    #[error("invalid value {value:?} for `{key}`: {rule}")]
    Invalid { key: String, value: String, rule: String },
    #[error("invalid path for `{key}`: {source}")]
    Path { key: String, source: PathError },
    #[error("`{key}` names `{path}`, which does not exist under the project root")]
    MissingFile { key: String, path: RelPath },
}

fn invalid(key: &str, value: &str, rule: &str) -> ConfigError {
    ConfigError::Invalid { key: key.to_string(), value: value.to_string(), rule: rule.to_string() }
}

/// Non-fatal findings while loading a config.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigWarning {
    UnknownKey(String),
    MissingSamplePayload(RelPath),
}

impl fmt::Display for ConfigWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigWarning::UnknownKey(key) => write!(f, "unknown config key `{key}` ignored"),
            ConfigWarning::MissingSamplePayload(path) => {
                write!(f, "sample_payload `{path}` not found; the demo will show an empty payload")
            }
        }
    }
}

pub fn is_event_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn is_package_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        && !PYTHON_KEYWORDS.contains(&s)
}

fn is_python_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !PYTHON_KEYWORDS.contains(&s)
}

const TOP_KEYS: &[&str] = &[
    "name", "entry", "root", "event_name", "allow_external", "asset_map", "inject_fetch_shim", "max_size_mb",
    "package", "sample_payload", "notebook_url",
];
const PACKAGE_KEYS: &[&str] =
    &["package_name", "function_name", "version", "description", "params", "default_width", "default_height"];
const PARAM_KEYS: &[&str] = &["name", "required", "doc"];

struct Reader<'a> {
    obj: &'a Map<String, Value>,
    prefix: &'a str,
}

impl<'a> Reader<'a> {
    fn key(&self, name: &str) -> String {
        if self.prefix.is_empty() {
            name.to_string()
        } else {
            format!("{}.{name}", self.prefix)
        }
    }

    fn present(&self, name: &str) -> Option<&'a Value> {
        self.obj.get(name).filter(|v| !v.is_null())
    }

    fn string(&self, name: &str) -> Result<Option<String>, ConfigError> {
        match self.present(name) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(ConfigError::WrongType { key: self.key(name), expected: "a string" }),
        }
    }

    fn required_string(&self, name: &str, full: &'static str) -> Result<String, ConfigError> {
        self.string(name)?.ok_or(ConfigError::MissingKey(full))
    }

    fn path(&self, name: &str) -> Result<Option<RelPath>, ConfigError> {
        self.string(name)?
            .map(|s| RelPath::parse(&s).map_err(|source| ConfigError::Path { key: self.key(name), source }))
            .transpose()
    }

    fn bool(&self, name: &str) -> Result<Option<bool>, ConfigError> {
        match self.present(name) {
            None => Ok(None),
            Some(Value::Bool(b)) => Ok(Some(*b)),
            Some(_) => Err(ConfigError::WrongType { key: self.key(name), expected: "a boolean" }),
        }
    }

    fn positive_int(&self, name: &str) -> Result<Option<u32>, ConfigError> {
        match self.present(name) {
            None => Ok(None),
            Some(Value::Number(n)) => match n.as_u64().and_then(|v| u32::try_from(v).ok()) {
                Some(v) if v > 0 => Ok(Some(v)),
                _ => Err(invalid(&self.key(name), &n.to_string(), "must be a positive integer")),
            },
            Some(_) => Err(ConfigError::WrongType { key: self.key(name), expected: "a positive integer" }),
        }
    }

    fn array(&self, name: &str) -> Result<&'a [Value], ConfigError> {
        match self.present(name) {
            None => Ok(&[]),
            Some(Value::Array(items)) => Ok(items),
            Some(_) => Err(ConfigError::WrongType { key: self.key(name), expected: "an array" }),
        }
    }

    fn unknown_keys(&self, known: &[&str], warnings: &mut Vec<ConfigWarning>) {
        for key in self.obj.keys() {
            if !known.contains(&key.as_str()) {
                warnings.push(ConfigWarning::UnknownKey(self.key(key)));
            }
        }
    }
}

/// Parses and validates `nova.config.json` text, filling defaults.
/// Unknown keys are returned as warnings.
pub fn parse_config(text: &str) -> Result<(BundleConfig, Vec<ConfigWarning>), ConfigError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ConfigError::Json(e.to_string()))?;
    let Value::Object(obj) = &value else {
        return Err(ConfigError::NotAnObject);
    };
    let mut warnings = Vec::new();
    let top = Reader { obj, prefix: "" };
    top.unknown_keys(TOP_KEYS, &mut warnings);

    let name = top.required_string("name", "name")?;
    let entry = top.path("entry")?.ok_or(ConfigError::MissingKey("entry"))?;
    let root = top.required_string("root", "root")?;
    let event_name = top.string("event_name")?.unwrap_or_else(|| DEFAULT_EVENT_NAME.into());

    let mut allow_external = Vec::new();
    for (i, item) in top.array("allow_external")?.iter().enumerate() {
        match item {
            Value::String(s) => allow_external.push(s.clone()),
            _ => return Err(ConfigError::WrongType { key: format!("allow_external[{i}]"), expected: "a string" }),
        }
    }
    let mut asset_map = Vec::new();
    for (i, item) in top.array("asset_map")?.iter().enumerate() {
        let key = format!("asset_map[{i}]");
        let Value::String(s) = item else {
            return Err(ConfigError::WrongType { key, expected: "a string" });
        };
        asset_map.push(RelPath::parse(s).map_err(|source| ConfigError::Path { key, source })?);
    }
    let inject_fetch_shim = top.bool("inject_fetch_shim")?.unwrap_or(false);
    let max_size_mb = match top.present("max_size_mb") {
        None => DEFAULT_MAX_SIZE_MB,
        Some(Value::Number(n)) => n.as_f64().unwrap_or(f64::NAN),
        Some(_) => return Err(ConfigError::WrongType { key: "max_size_mb".into(), expected: "a positive number" }),
    };

    let package = match top.present("package") {
        None => return Err(ConfigError::MissingKey("package")),
        Some(Value::Object(obj)) => parse_package(obj, &mut warnings)?,
        Some(_) => return Err(ConfigError::WrongType { key: "package".into(), expected: "an object" }),
    };
    let sample_payload = top.path("sample_payload")?;
    let notebook_url = top.string("notebook_url")?;

    let config = BundleConfig {
        name,
        entry,
        root,
        event_name,
        allow_external,
        asset_map,
        inject_fetch_shim,
        max_size_mb,
        package,
        sample_payload,
        notebook_url,
    };
    config.validate()?;
    Ok((config, warnings))
}

fn parse_package(obj: &Map<String, Value>, warnings: &mut Vec<ConfigWarning>) -> Result<PackageSpec, ConfigError> {
    let r = Reader { obj, prefix: "package" };
    r.unknown_keys(PACKAGE_KEYS, warnings);
    let mut spec = PackageSpec::new(r.required_string("package_name", "package.package_name")?);
    if let Some(v) = r.string("function_name")? {
        spec.function_name = v;
    }
    if let Some(v) = r.string("version")? {
        spec.version = v;
    }
    if let Some(v) = r.string("description")? {
        spec.description = v;
    }
    if let Some(v) = r.positive_int("default_width")? {
        spec.default_width = v;
    }
    if let Some(v) = r.positive_int("default_height")? {
        spec.default_height = v;
    }
    for (i, item) in r.array("params")?.iter().enumerate() {
        let prefix = format!("package.params[{i}]");
        let param = match item {
            // Shorthand: a bare name is an optional parameter without docs.
            Value::String(name) => ParamSpec { name: name.clone(), required: false, doc: String::new() },
            Value::Object(obj) => {
                let p = Reader { obj, prefix: &prefix };
                p.unknown_keys(PARAM_KEYS, warnings);
                ParamSpec {
                    name: p.string("name")?.ok_or(ConfigError::MissingKey("package.params[].name"))?,
                    required: p.bool("required")?.unwrap_or(false),
                    doc: p.string("doc")?.unwrap_or_default(),
                }
            }
            _ => return Err(ConfigError::WrongType { key: prefix, expected: "an object or a string" }),
        };
        spec.params.push(param);
    }
    Ok(spec)
}

/// Confirms that the files a config names exist. Missing entry and asset
/// map files are errors; a missing sample payload is only a warning.
pub fn validate_paths(config: &BundleConfig, files: &impl FileProvider) -> Result<Vec<ConfigWarning>, ConfigError> {
    if !files.exists(&config.entry) {
        return Err(ConfigError::MissingFile { key: "entry".into(), path: config.entry.clone() });
    }
    for (i, path) in config.asset_map.iter().enumerate() {
        if !files.exists(path) {
            return Err(ConfigError::MissingFile { key: format!("asset_map[{i}]"), path: path.clone() });
        }
    }
    let mut warnings = Vec::new();
    if let Some(sample) = &config.sample_payload {
        if !files.exists(sample) {
            warnings.push(ConfigWarning::MissingSamplePayload(sample.clone()));
        }
    }
    Ok(warnings)
}
