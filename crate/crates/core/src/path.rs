//! Normalized, root-relative paths.
//!
//! Everything the bundler reads is addressed relative to the project root
//! with `/` separators. A path that climbs above the root after `.` and `..`
//! segments are folded is rejected.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("path is empty")]
    Empty,
    #[error("path `{0}` is absolute; expected a path relative to the project root")]
    Absolute(String),
    #[error("path `{0}` escapes the project root")]
    EscapesRoot(String),
}

/// A normalized path relative to the project root: no empty, `.` or `..`
/// segments, never empty, `/`-separated.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelPath(String);

impl RelPath {
    pub fn parse(text: &str) -> Result<Self, PathError> {
        if text.is_empty() {
            return Err(PathError::Empty);
        }
        if text.starts_with('/') {
            return Err(PathError::Absolute(text.to_string()));
        }
        let segments = fold_segments(Vec::new(), text).ok_or_else(|| PathError::EscapesRoot(text.to_string()))?;
        if segments.is_empty() {
            return Err(PathError::Empty);
        }
        Ok(RelPath(segments.join("/")))
    }

    /// Resolves a URL path (already stripped of query and fragment, and
    /// percent-decoded) against the directory containing `self`. A leading
    /// `/` resolves against the project root.
    pub fn resolve(&self, reference: &str) -> Result<RelPath, PathError> {
        let (base, rest): (Vec<&str>, &str) = match reference.strip_prefix('/') {
            Some(rest) => (Vec::new(), rest),
            None => (self.parent_segments().collect(), reference),
        };
        let segments = fold_segments(base, rest).ok_or_else(|| PathError::EscapesRoot(reference.to_string()))?;
        if segments.is_empty() {
            return Err(PathError::Empty);
        }
        Ok(RelPath(segments.join("/")))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn file_name(&self) -> &str {
        self.0.rsplit('/').next().unwrap_or(&self.0)
    }

    pub fn extension(&self) -> Option<&str> {
        let name = self.file_name();
        match name.rfind('.') {
            Some(0) | None => None,
            Some(dot) => Some(&name[dot + 1..]),
        }
    }

    fn parent_segments(&self) -> impl Iterator<Item = &str> {
        let mut parts: Vec<&str> = self.0.split('/').collect();
        parts.pop();
        parts.into_iter()
    }
}

fn fold_segments<'a>(mut stack: Vec<&'a str>, text: &'a str) -> Option<Vec<&'a str>> {
    for segment in text.split('/') {
        match segment {
            "" | "." => {}
            ".." => {
                stack.pop()?;
            }
            other => stack.push(other),
        }
    }
    Some(stack)
}

impl fmt::Display for RelPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for RelPath {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl Serialize for RelPath {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_dot_segments() {
        assert_eq!(RelPath::parse("./a//b/./c.html").unwrap().as_str(), "a/b/c.html");
        assert_eq!(RelPath::parse("a/../b.html").unwrap().as_str(), "b.html");
    }

    #[test]
    fn rejects_escape_and_absolute() {
        assert_eq!(
            RelPath::parse("../secret.html"),
            Err(PathError::EscapesRoot("../secret.html".into()))
        );
        assert_eq!(RelPath::parse("a/../../x"), Err(PathError::EscapesRoot("a/../../x".into())));
        assert!(matches!(RelPath::parse("/etc/passwd"), Err(PathError::Absolute(_))));
        assert_eq!(RelPath::parse("./"), Err(PathError::Empty));
    }

    #[test]
    fn resolves_against_parent_directory() {
        let css = RelPath::parse("css/site/main.css").unwrap();
        assert_eq!(css.resolve("../img/bg.png").unwrap().as_str(), "css/img/bg.png");
        assert_eq!(css.resolve("/img/bg.png").unwrap().as_str(), "img/bg.png");
        assert_eq!(css.resolve("font.woff2").unwrap().as_str(), "css/site/font.woff2");
        assert!(css.resolve("../../../x.png").is_err());
        let top = RelPath::parse("index.html").unwrap();
        assert_eq!(top.resolve("./app.js").unwrap().as_str(), "app.js");
        assert!(top.resolve("../app.js").is_err());
    }

    #[test]
    fn extension_of_dotfiles_is_none() {
        assert_eq!(RelPath::parse("a/.hidden").unwrap().extension(), None);
        assert_eq!(RelPath::parse("a/b.tar.gz").unwrap().extension(), Some("gz"));
        assert_eq!(RelPath::parse("Makefile").unwrap().extension(), None);
    }
}
