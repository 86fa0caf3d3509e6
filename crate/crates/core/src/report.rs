//! What a bundle run did: inlined assets, remote references left in place,
//! warnings, and single-file violations.

use alloc::string::String;
use alloc::vec::Vec;

use serde::Serialize;

use crate::scan::AssetKind;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Location {
    pub path: String,
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Warning {
    pub code: &'static str,
    pub message: String,
    pub location: Option<Location>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InlinedAsset {
    pub path: String,
    pub kind: AssetKind,
    pub bytes_before: usize,
    pub bytes_after_encoding: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExternalReason {
    Allowlisted,
    RemoteNotAllowlisted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeptExternal {
    pub url: String,
    pub reason: ExternalReason,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationRule {
    ExternalScript,
    ExternalStylesheet,
    ExternalImage,
    ExternalFont,
    ExternalOther,
}

impl ViolationRule {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationRule::ExternalScript => "external-script",
            ViolationRule::ExternalStylesheet => "external-stylesheet",
            ViolationRule::ExternalImage => "external-image",
            ViolationRule::ExternalFont => "external-font",
            ViolationRule::ExternalOther => "external-other",
        }
    }
}

/// A reference that keeps a document from being self-contained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub url: String,
    pub location: usize,
    pub rule: ViolationRule,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BundleReport {
    pub inlined: Vec<InlinedAsset>,
    pub kept_external: Vec<KeptExternal>,
    pub warnings: Vec<Warning>,
    pub violations: Vec<Violation>,
    pub total_output_bytes: usize,
}

impl BundleReport {
    pub(crate) fn warn(&mut self, code: &'static str, message: String, location: Option<Location>) {
        self.warnings.push(Warning { code, message, location });
    }
}
