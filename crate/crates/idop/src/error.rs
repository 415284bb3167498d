use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square")]
    NonSquare,
    #[error("matrix does not have full column rank")]
    RankDeficient,
    #[error("matrix is singular")]
    Singular,
    #[error("boundary problem is not regular")]
    NotRegular,
    #[error("exceptional space is not a complement of the admissible functions")]
    NotComplement,
    #[error("generalized boundary problem is not regular")]
    NotRegularGeneralized,
    #[error("characteristic polynomial does not split over Q(i); supply a fundamental system")]
    NeedsUserFundamentalSystem,
    #[error("operator has an evaluation point outside the two-point interval")]
    NotTwoPoint,
    #[error("Green's operator has residual local terms; no integral kernel exists")]
    NotKernelRepresentable,
    #[error("no regular lifting of the factorization exists")]
    FactorizationNotLiftable,
    #[error("boundary condition is not in Stieltjes form: {0}")]
    NotStieltjes(String),
    #[error("differential operator must be monic with constant coefficients")]
    NotConstantCoefficient,
    #[error("invalid fundamental system: {0}")]
    InvalidFundamentalSystem(String),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid problem description: {0}")]
    Schema(String),
    #[error("direct product disagrees with the rewrite oracle")]
    OracleMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;
