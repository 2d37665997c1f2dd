use thiserror::Error;

use crate::exactpoly::Var;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("polynomial does not divide: {divisor} into {dividend}")]
    NotDivisible { dividend: String, divisor: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("no value assigned to {0}")]
    MissingAssignment(Var),
    #[error("{what} = {value} outside [{lo}, {hi}]")]
    Range { what: &'static str, value: i64, lo: i64, hi: i64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("matrix is singular or rank deficient: {0}")]
    Rank(String),
    #[error("group element is not invertible")]
    InvalidGroupElement,
    #[error("map undefined: stratum {k} vanishes identically")]
    UndefinedPoint { k: usize },
    #[error("projective vector is zero")]
    ZeroVector,
    #[error("point outside chart: {0}")]
    ChartDomain(String),
    #[error("identity falsified: {0}")]
    LemmaFalsified(String),
    #[error("zero pivot at stage {k}")]
    Pivot { k: usize },
    #[error("point is fixed by the torus")]
    DegenerateOrbit,
    #[error("orbit is not generic: components (to_zero {kminus}, to_infinity {kplus})")]
    StratifiedOrbit { kminus: usize, kplus: usize },
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
