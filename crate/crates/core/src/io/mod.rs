//! Mesh files and patch fixtures.

mod fixture;
mod meshfile;

use thiserror::Error;

use crate::mesh::MeshError;

pub use fixture::{ExpectedOptimum, PatchFixture};
pub use meshfile::{format_mesh, parse_mesh, read_mesh, write_mesh};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{file}:{line}: {message}")]
    Parse { file: String, line: usize, message: String },
    #[error("bad fixture: {0}")]
    Fixture(String),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}
