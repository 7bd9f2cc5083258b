use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not an element of SL2: determinant is {0}, expected 1")]
    Determinant(String),

    #[error("element {0} is not in the subgroup {1}")]
    NotInSubgroup(String, String),

    #[error("no cusp width found up to the index bound {0}; subgroup descriptor is inconsistent")]
    CuspWidth(u64),

    #[error("invalid coset transversal: {0}")]
    Transversal(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("eigenvalue {0} is not on the unit circle")]
    NonUnitary(String),

    #[error("Jordan decomposition is ill-conditioned: reconstruction error {0:e}")]
    IllConditioned(f64),

    #[error("series error: {0}")]
    Series(String),

    #[error("evaluation refused: |q| = {0} is too close to 1")]
    NearBoundary(f64),

    #[error("inputs are not closed under the Jordan block action: residual {0:e}")]
    NotBlockClosed(f64),

    #[error("form is not a cusp form")]
    NotCuspForm,

    #[error("functional equation pre-check failed: residual {0:e}")]
    FunctionalEquation(f64),

    #[error("unknown built-in `{0}`")]
    UnknownBuiltin(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
