use std::path::{Path, PathBuf};

use nova_core::{
    bundle, generate_demo, parse_config, scaffold, validate_paths, Bundle, BundleConfig, BundleError, CodegenError,
    ConfigError, ConfigWarning, FileProvider, JsonValue, PackageTree,
};

use crate::fs::FsProvider;

/// A parsed config together with a provider rooted at its `root` directory.
#[derive(Debug, Clone)]
pub struct Project {
    pub config_path: PathBuf,
    pub config: BundleConfig,
    pub files: FsProvider,
    pub warnings: Vec<ConfigWarning>,
}

#[derive(Debug, thiserror::Error)]
pub enum ProjectError {
    #[error("cannot read config `{}`: {source}", .path.display())]
    ConfigRead { path: PathBuf, source: std::io::Error },
    #[error("invalid config `{}`: {source}", .path.display())]
    Config { path: PathBuf, source: ConfigError },
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Codegen(#[from] CodegenError),
    #[error("sample payload `{path}` is not valid JSON: {message}")]
    SamplePayload { path: String, message: String },
}

/// Reads and validates the config at `config_path`. `root` is resolved
/// against the config file's directory.
pub fn load_project(config_path: &Path) -> Result<Project, ProjectError> {
    let text = std::fs::read_to_string(config_path)
        .map_err(|source| ProjectError::ConfigRead { path: config_path.to_path_buf(), source })?;
    let config_err = |source| ProjectError::Config { path: config_path.to_path_buf(), source };
    let (config, mut warnings) = parse_config(&text).map_err(config_err)?;
    let base = config_path.parent().unwrap_or(Path::new(""));
    let files = FsProvider::new(base.join(&config.root));
    warnings.extend(validate_paths(&config, &files).map_err(config_err)?);
    Ok(Project { config_path: config_path.to_path_buf(), config, files, warnings })
}

impl Project {
    pub fn bundle(&self) -> Result<Bundle, ProjectError> {
        Ok(bundle(&self.config, &self.files)?)
    }

    /// The configured sample payload, or `None` if unset or missing.
    pub fn sample_payload(&self) -> Result<Option<JsonValue>, ProjectError> {
        let Some(path) = &self.config.sample_payload else { return Ok(None) };
        let Ok(bytes) = self.files.read(path) else { return Ok(None) };
        let err = |message: String| ProjectError::SamplePayload { path: path.to_string(), message };
        let text = String::from_utf8(bytes).map_err(|e| err(e.to_string()))?;
        JsonValue::parse(&text).map(Some).map_err(|e| err(e.to_string()))
    }
}

/// Everything one run over a project produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineOutput {
    pub bundle: Bundle,
    pub package: PackageTree,
    pub demo: PackageTree,
}

/// Bundle, scaffold and demo in one pass.
pub fn run_pipeline(project: &Project) -> Result<PipelineOutput, ProjectError> {
    let bundle = project.bundle()?;
    let package = scaffold(&project.config, &bundle.html)?;
    let demo = generate_demo(&project.config, &bundle.html, project.sample_payload()?.as_ref())?;
    Ok(PipelineOutput { bundle, package, demo })
}
