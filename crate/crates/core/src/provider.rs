//! Read access to a project's files.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::path::RelPath;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FileError {
    #[error("file `{0}` not found")]
    NotFound(RelPath),
    #[error("could not read `{path}`: {message}")]
    Io { path: RelPath, message: String },
}

/// Source of project files, addressed by root-relative path.
///
/// Implementations must never reach outside the project root; the paths
/// they receive are already normalized.
pub trait FileProvider {
    fn read(&self, path: &RelPath) -> Result<Vec<u8>, FileError>;

    fn exists(&self, path: &RelPath) -> bool {
        self.read(path).is_ok()
    }
}

impl<P: FileProvider + ?Sized> FileProvider for &P {
    fn read(&self, path: &RelPath) -> Result<Vec<u8>, FileError> {
        (**self).read(path)
    }

    fn exists(&self, path: &RelPath) -> bool {
        (**self).exists(path)
    }
}

/// In-memory project, mostly for tests and for re-bundling an already
/// bundled document on top of an existing project.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MemoryProvider {
    files: BTreeMap<RelPath, Vec<u8>>,
}

impl MemoryProvider {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or replaces a file.
    ///
    /// # Panics
    ///
    /// Panics if `path` is not a valid root-relative path.
    pub fn insert(&mut self, path: &str, bytes: impl Into<Vec<u8>>) -> &mut Self {
        let path = RelPath::parse(path).expect("MemoryProvider paths must be root-relative");
        self.files.insert(path, bytes.into());
        self
    }

    pub fn with(mut self, path: &str, bytes: impl Into<Vec<u8>>) -> Self {
        self.insert(path, bytes);
        self
    }

    pub fn total_bytes(&self) -> usize {
        self.files.values().map(Vec::len).sum()
    }
}

impl FileProvider for MemoryProvider {
    fn read(&self, path: &RelPath) -> Result<Vec<u8>, FileError> {
        self.files.get(path).cloned().ok_or_else(|| FileError::NotFound(path.clone()))
    }

    fn exists(&self, path: &RelPath) -> bool {
        self.files.contains_key(path)
    }
}
