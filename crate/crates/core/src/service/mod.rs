//! Snapshot building, file exports and the HTTP API.

mod api;
mod export;
mod snapshot;

use std::path::PathBuf;

pub use api::{DEFAULT_LIMIT, MAX_LIMIT, SnapshotStore, router, serve, serve_on};
pub use export::{EXPORT_FILES, departments_csv, render_exports, write_exports};
pub use snapshot::{Snapshot, build_snapshot};

use crate::classifier::ClassifyError;
use crate::ingest::IngestError;
use crate::registry::RegistryError;
use crate::scoring::ScoringError;

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error("config directory {} does not exist", .0.display())]
    MissingConfigDir(PathBuf),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Scoring(#[from] ScoringError),
}
