use thiserror::Error;

/// Every failure carries a stable code, reported by [`Error::code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero: {0}")]
    DivZero(String),
    #[error("interval does not isolate a root: {0}")]
    NotIsolating(String),
    #[error("not a rational S0 function: {0}")]
    NotS0(String),
    #[error("irrational pole: {0}")]
    IrrationalPole(String),
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("index out of range: {0}")]
    Range(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("unresolved comparison: {0}")]
    Unresolved(String),
    #[error("infeasible plan: {0}")]
    PlanInfeasible(String),
    #[error("main edge too long: {0}")]
    MainTooLong(String),
    #[error("positive central mass required: {0}")]
    RequiresPositiveM(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivZero(_) => "E_DIV_ZERO",
            Error::NotIsolating(_) => "E_NOT_ISOLATING",
            Error::NotS0(_) => "E_NOT_S0",
            Error::IrrationalPole(_) => "E_IRRATIONAL_POLE",
            Error::BadShape(_) => "E_BAD_SHAPE",
            Error::Range(_) => "E_RANGE",
            Error::Schema(_) => "E_SCHEMA",
            Error::Invariant(_) => "E_INVARIANT",
            Error::Unresolved(_) => "E_UNRESOLVED",
            Error::PlanInfeasible(_) => "E_PLAN_INFEASIBLE",
            Error::MainTooLong(_) => "E_MAIN_TOO_LONG",
            Error::RequiresPositiveM(_) => "E_REQUIRES_POSITIVE_M",
        }
    }

    pub fn message(&self) -> String {
        match self {
            Error::DivZero(m)
            | Error::NotIsolating(m)
            | Error::NotS0(m)
            | Error::IrrationalPole(m)
            | Error::BadShape(m)
            | Error::Range(m)
            | Error::Schema(m)
            | Error::Invariant(m)
            | Error::Unresolved(m)
            | Error::PlanInfeasible(m)
            | Error::MainTooLong(m)
            | Error::RequiresPositiveM(m) => m.clone(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
