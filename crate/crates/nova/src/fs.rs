use std::io;
use std::path::{Path, PathBuf};

use nova_core::{FileError, FileProvider, PackageTree, RelPath};

/// Reads project files from a directory on disk.
#[derive(Debug, Clone)]
pub struct FsProvider {
    root: PathBuf,
}

impl FsProvider {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        FsProvider { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn full_path(&self, path: &RelPath) -> PathBuf {
        self.root.join(path.as_str())
    }
}

impl FileProvider for FsProvider {
    fn read(&self, path: &RelPath) -> Result<Vec<u8>, FileError> {
        std::fs::read(self.full_path(path)).map_err(|e| match e.kind() {
            io::ErrorKind::NotFound => FileError::NotFound(path.clone()),
            _ => FileError::Io { path: path.clone(), message: e.to_string() },
        })
    }

    fn exists(&self, path: &RelPath) -> bool {
        self.full_path(path).is_file()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum MaterializeError {
    #[error("output directory `{}` is not empty; pass --overwrite to replace its files", .0.display())]
    NotEmpty(PathBuf),
    #[error("`{}` exists and is not a directory", .0.display())]
    NotADirectory(PathBuf),
    #[error("cannot write `{}`: {source}", .path.display())]
    Io { path: PathBuf, source: io::Error },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> MaterializeError + '_ {
    move |source| MaterializeError::Io { path: path.to_path_buf(), source }
}

/// Writes `tree` under `out_dir` in path order and returns the written
/// paths. A non-empty `out_dir` is refused unless `overwrite` is set, in
/// which case files named by the tree are replaced and others left alone.
pub fn materialize(tree: &PackageTree, out_dir: &Path, overwrite: bool) -> Result<Vec<PathBuf>, MaterializeError> {
    if out_dir.exists() {
        if !out_dir.is_dir() {
            return Err(MaterializeError::NotADirectory(out_dir.to_path_buf()));
        }
        let mut entries = std::fs::read_dir(out_dir).map_err(io_err(out_dir))?;
        if entries.next().is_some() && !overwrite {
            return Err(MaterializeError::NotEmpty(out_dir.to_path_buf()));
        }
    }
    let mut written = Vec::with_capacity(tree.len());
    for (rel, bytes) in tree.iter() {
        let path = out_dir.join(rel);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(io_err(parent))?;
        }
        std::fs::write(&path, bytes).map_err(io_err(&path))?;
        written.push(path);
    }
    Ok(written)
}
