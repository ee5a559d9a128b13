use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate parametrization: line spanning vectors are parallel")]
    DegenerateParametrization,
    #[error("binary form is identically zero")]
    IdenticallyZero,
    #[error("forms share a common component (resultant vanishes identically)")]
    CommonComponent,
    #[error("solver failure after {attempts} coordinate charts")]
    SolverFailure { attempts: usize },
    #[error("mismatched degrees: {0}")]
    MismatchedDegrees(String),
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("positive-dimensional locus of generalized idempotents")]
    PositiveDimensionalLocus,
    #[error("algebra is not trace-free (|T| = {0:e})")]
    NotTraceFree(f64),
    #[error("matrix is not in SL3 (|det - 1| = {0:e})")]
    NotSpecialLinear(f64),
    #[error("inconsistent system: no nontrivial nullspace")]
    InconsistentSystem,
    #[error("degenerate algebra: nullspace of dimension >= 2")]
    DegenerateAlgebra,
    #[error("degenerate pair line for idempotents {0} and {1}")]
    DegeneratePairLine(usize, usize),
    #[error("line is a component of the quartic")]
    LineIsComponent,
    #[error("non-reduced quartic: partial derivatives share a component")]
    NonReducedQuartic,
    #[error("base-locus mismatch: matched {matched} of 7 base points")]
    BaseLocusMismatch { matched: usize },
    #[error("no algebra has these points as idempotents")]
    NoAlgebra,
    #[error("non-generic configuration: {0}")]
    NonGenericConfiguration(String),
    #[error("algebra is outside general position: {0}")]
    NotGeneric(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
