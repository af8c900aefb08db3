use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("g = {g} lies on the level crossing g_c({crossing}); the ground state is two-fold degenerate")]
    DegenerateAtCrossing { g: f64, crossing: usize },

    #[error("second derivative of the envelope is singular at g = {g} (|g chi_N| = 1)")]
    SingularPoint { g: f64 },

    #[error("{what} supports at most {max} sites, got {sites}")]
    SizeLimit {
        what: &'static str,
        sites: usize,
        max: usize,
    },

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operator mismatch: largest deviation {deviation:e} at ({row}, {col})")]
    Mismatch {
        row: usize,
        col: usize,
        deviation: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_size(what: &'static str, sites: usize, max: usize) -> Result<()> {
    if sites < crate::MIN_SITES {
        return Err(Error::InvalidChain(format!(
            "{what} needs at least {} sites, got {sites}",
            crate::MIN_SITES
        )));
    }
    if sites > max {
        return Err(Error::SizeLimit { what, sites, max });
    }
    Ok(())
}
