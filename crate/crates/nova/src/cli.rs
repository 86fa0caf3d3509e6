//! The `nova` command line.
//!
//! ```text
//! nova bundle   [-c <config>] [-o <out.html>] [--report-json <path>]
//! nova scaffold [-c <config>] [-o <dir>] [--overwrite] [--report-json <path>] [--from-bundle <file>]
//! nova demo     [-c <config>] [-o <dir>] [--overwrite] [--report-json <path>] [--from-bundle <file>]
//! nova check    <file.html> [--allow <prefix>]...
//! nova vectors  [-c <config>] [-o <file>]
//! ```
//!
//! Exit status is 0 on success, 1 on usage, config or bundle errors, and 2
//! when `check` finds at least one violation.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use nova_core::{check, conformance_vectors, generate_demo, scaffold, vectors_to_json, BundleReport, PackageTree};

use crate::fs::materialize;
use crate::project::{load_project, Project};

pub const DEFAULT_CONFIG: &str = "nova.config.json";
pub const DEFAULT_DEMO_DIR: &str = "demo-site";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATIONS: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "nova", version, about = "Bundle a static web app into one HTML file and wrap it as a notebook widget")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Inline every local asset into a single HTML file.
    Bundle {
        #[command(flatten)]
        config: ConfigArg,
        /// Output file [default: <name>.bundle.html]
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the bundle report as JSON.
        #[arg(long, value_name = "PATH")]
        report_json: Option<PathBuf>,
    },
    /// Generate the Python widget package.
    Scaffold(TreeArgs),
    /// Generate a static page showing the app and the notebook widget side by side.
    Demo(TreeArgs),
    /// List references that keep a document from being self-contained.
    Check {
        file: PathBuf,
        /// URL prefix allowed to stay external; repeatable.
        #[arg(long = "allow", value_name = "PREFIX")]
        allow: Vec<String>,
    },
    /// Print the payload-protocol conformance vectors as JSON.
    Vectors {
        #[command(flatten)]
        config: ConfigArg,
        /// Write to a file instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ConfigArg {
    /// Project config file.
    #[arg(short = 'c', long = "config", value_name = "CONFIG", default_value = DEFAULT_CONFIG)]
    path: PathBuf,
}

#[derive(Debug, Args)]
struct TreeArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Output directory.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Replace files in a non-empty output directory.
    #[arg(long)]
    overwrite: bool,
    /// Also write the bundle report as JSON.
    #[arg(long, value_name = "PATH", conflicts_with = "from_bundle")]
    report_json: Option<PathBuf>,
    /// Use an existing bundle instead of bundling the project.
    #[arg(long, value_name = "FILE")]
    from_bundle: Option<PathBuf>,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

struct Context<'a> {
    cwd: &'a Path,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Context<'_> {
    fn path(&self, p: &Path) -> PathBuf {
        self.cwd.join(p)
    }

    fn summary(&mut self, line: std::fmt::Arguments<'_>) -> Result<(), Failure> {
        writeln!(self.out, "{line}")?;
        Ok(())
    }

    fn load(&mut self, config: &ConfigArg) -> Result<Project, Failure> {
        let project = load_project(&self.path(&config.path))?;
        for w in &project.warnings {
            writeln!(self.err, "warning: {w}")?;
        }
        Ok(project)
    }

    fn report(&mut self, report: &BundleReport, json_path: Option<&Path>) -> Result<(), Failure> {
        for w in &report.warnings {
            match &w.location {
                Some(loc) => writeln!(self.err, "warning[{}]: {} ({}:{})", w.code, w.message, loc.path, loc.offset)?,
                None => writeln!(self.err, "warning[{}]: {}", w.code, w.message)?,
            }
        }
        if let Some(path) = json_path {
            let path = self.path(path);
            let mut text = serde_json::to_string_pretty(report)?;
            text.push('\n');
            std::fs::write(&path, text).map_err(|e| Failure(format!("cannot write `{}`: {e}", path.display())))?;
        }
        Ok(())
    }

    fn bundled_html(&mut self, project: &Project, args: &TreeArgs) -> Result<String, Failure> {
        if let Some(file) = &args.from_bundle {
            let path = self.path(file);
            return std::fs::read_to_string(&path).map_err(|e| Failure(format!("cannot read `{}`: {e}", path.display())));
        }
        let bundle = project.bundle()?;
        self.report(&bundle.report, args.report_json.as_deref())?;
        Ok(bundle.html)
    }

    fn write_tree(&mut self, tree: &PackageTree, dir: &Path, overwrite: bool) -> Result<(), Failure> {
        let full = self.path(dir);
        let written = materialize(tree, &full, overwrite)?;
        self.summary(format_args!("wrote {}/ ({} files)", dir.display(), written.len()))
    }

    fn run(&mut self, command: Command) -> Result<i32, Failure> {
        match command {
            Command::Bundle { config, output, report_json } => {
                let project = self.load(&config)?;
                let bundle = project.bundle()?;
                self.report(&bundle.report, report_json.as_deref())?;
                let output = output.unwrap_or_else(|| default_bundle_name(&project.config.name).into());
                let path = self.path(&output);
                std::fs::write(&path, &bundle.html).map_err(|e| Failure(format!("cannot write `{}`: {e}", path.display())))?;
                self.summary(format_args!(
                    "wrote {} ({} bytes, {} assets inlined, {} violations)",
                    output.display(),
                    bundle.html.len(),
                    bundle.report.inlined.len(),
                    bundle.report.violations.len()
                ))?;
            }
            Command::Scaffold(args) => {
                let project = self.load(&args.config)?;
                let html = self.bundled_html(&project, &args)?;
                let tree = scaffold(&project.config, &html)?;
                let dir = args.output.clone().unwrap_or_else(|| project.config.package.package_name.clone().into());
                self.write_tree(&tree, &dir, args.overwrite)?;
            }
            Command::Demo(args) => {
                let project = self.load(&args.config)?;
                let html = self.bundled_html(&project, &args)?;
                let payload = project.sample_payload()?;
                if payload.is_none() {
                    writeln!(self.err, "warning: no sample payload; the demo widget receives null")?;
                }
                let tree = generate_demo(&project.config, &html, payload.as_ref())?;
                let dir = args.output.clone().unwrap_or_else(|| DEFAULT_DEMO_DIR.into());
                self.write_tree(&tree, &dir, args.overwrite)?;
            }
            Command::Check { file, allow } => {
                let path = self.path(&file);
                let bytes = std::fs::read(&path).map_err(|e| Failure(format!("cannot read `{}`: {e}", path.display())))?;
                let html = String::from_utf8_lossy(&bytes);
                let violations = check(&html, &allow);
                for v in &violations {
                    writeln!(self.out, "{}\t{}\t{}", v.rule.as_str(), v.url, v.location)?;
                }
                if !violations.is_empty() {
                    return Ok(EXIT_VIOLATIONS);
                }
            }
            Command::Vectors { config, output } => {
                let project = self.load(&config)?;
                let bundle = project.bundle()?;
                let text = vectors_to_json(&conformance_vectors(&bundle.html));
                match output {
                    Some(file) => {
                        let path = self.path(&file);
                        std::fs::write(&path, &text).map_err(|e| Failure(format!("cannot write `{}`: {e}", path.display())))?;
                        self.summary(format_args!("wrote {}", file.display()))?;
                    }
                    None => self.out.write_all(text.as_bytes())?,
                }
            }
        }
        Ok(EXIT_OK)
    }
}

/// `<name>.bundle.html`, with path separators in the name replaced.
pub fn default_bundle_name(name: &str) -> String {
    let safe: String = name.chars().map(|c| if matches!(c, '/' | '\\') { '_' } else { c }).collect();
    format!("{safe}.bundle.html")
}

/// Runs the CLI with `args` (program name first). Relative paths resolve
/// against `cwd`; results go to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, cwd: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_ERROR
                }
            };
        }
    };
    let mut ctx = Context { cwd, out, err };
    match ctx.run(cli.command) {
        Ok(code) => code,
        Err(Failure(message)) => {
            let _ = writeln!(ctx.err, "error: {message}");
            EXIT_ERROR
        }
    }
}
