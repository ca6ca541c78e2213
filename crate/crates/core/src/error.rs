use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected d = {expected}, found d = {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("determinant {0} is not 1 within tolerance")]
    Determinant(f64),

    #[error("basis realization violates the bracket table (residual {0:e})")]
    Realization(f64),

    #[error("aliasing guard: {mass:e} of mass in the outer band of the {domain} grid")]
    Aliasing { domain: &'static str, mass: f64 },

    #[error("resolution guard: Hermite order {order} exceeds N/4 = {limit}")]
    Resolution { order: usize, limit: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("density support escape: relative mass {0:e} lost outside the grid or source domain")]
    SupportEscape(f64),

    #[error("correspondence deviation {0:e} exceeds 1e-8")]
    Correspondence(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub(crate) fn check_finite(values: impl IntoIterator<Item = f64>, what: &'static str) -> Result<()> {
    if values.into_iter().all(f64::is_finite) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}
