//! Filesystem, widget-id and command-line layer over [`nova_core`].
//!
//! `nova_core` is pure; this crate supplies a [`FsProvider`] rooted at a
//! project directory, writes generated trees to disk with [`materialize`],
//! hands out process-unique widget ids, and implements the `nova` CLI.

pub mod cli;
mod fs;
mod ids;
mod project;

pub use fs::{materialize, FsProvider, MaterializeError};
pub use ids::{fresh_widget_id, new_widget_id};
pub use project::{load_project, run_pipeline, PipelineOutput, Project, ProjectError};

pub use nova_core;
