use thiserror::Error;

use crate::conway::GameError;
use crate::lattice::LatticeError;
use crate::phase::PhaseError;
use crate::planner::PlanError;

/// Crate-wide error, mostly used at file-loading boundaries.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for failures of the input itself (unreadable or malformed
    /// documents) as opposed to well-formed inputs that violate a law.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, Error::Json(_) | Error::Io { .. })
    }
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}
