use serde::Serialize;

use lgcy_core::gaussmanin::PicardFuchsError;
use lgcy_core::jacobi::JacobiError;
use lgcy_core::periods::{PeriodError, SeriesError};
use lgcy_core::residue::ResidueError;
use lgcy_core::ring::ParseError;
use lgcy_core::ttstar::TtError;

pub const EXIT_CHECK: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Error reported on stderr as `{"error": {...}}`.
#[derive(Debug, Clone, Serialize)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
    #[serde(skip)]
    pub exit: i32,
}

impl CliError {
    pub fn input(code: &'static str, message: impl Into<String>) -> Self {
        Self { code, message: message.into(), position: None, exit: EXIT_INPUT }
    }

    pub fn numeric(code: &'static str, message: impl Into<String>) -> Self {
        Self { code, message: message.into(), position: None, exit: EXIT_NUMERIC }
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Wrap<'a> {
            error: &'a CliError,
        }
        serde_json::to_string(&Wrap { error: self }).expect("error serializes")
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        Self { position: e.position(), ..Self::input("parse", e.to_string()) }
    }
}

impl From<JacobiError> for CliError {
    fn from(e: JacobiError) -> Self {
        let code = match &e {
            JacobiError::Weights(_) | JacobiError::NotQuasiHomogeneous => "weights",
            JacobiError::NonIsolated { .. }
            | JacobiError::BasisDependent { .. }
            | JacobiError::BadHessian
            | JacobiError::MilnorMismatch { .. } => "degenerate",
            JacobiError::NotMarginal { .. } => "not_marginal",
            JacobiError::ParameterCount { .. } | JacobiError::Arity { .. } => "config_invalid",
            JacobiError::NotOneParameter(_) => "unsupported",
        };
        Self::input(code, e.to_string())
    }
}

impl From<ResidueError> for CliError {
    fn from(e: ResidueError) -> Self {
        match e {
            ResidueError::Jacobi(j) => j.into(),
            ResidueError::ZeroNormalizer => Self::input("degenerate", e.to_string()),
            _ => Self::input("unsupported", e.to_string()),
        }
    }
}

impl From<PeriodError> for CliError {
    fn from(e: PeriodError) -> Self {
        match &e {
            PeriodError::NotFermat | PeriodError::TooManyParameters(_) => Self::input("unsupported", e.to_string()),
            PeriodError::Series(SeriesError::OutsideRadius { .. }) => Self::input("grid_out_of_range", e.to_string()),
            _ => Self::numeric("numeric", e.to_string()),
        }
    }
}

impl From<TtError> for CliError {
    fn from(e: TtError) -> Self {
        match e {
            TtError::Periods(p) => p.into(),
            TtError::Jacobi(j) => j.into(),
            TtError::Residue(r) => r.into(),
            TtError::Unsupported => Self::input("unsupported", "only the Hesse family z1^3+z2^3+z3^3+u*z1*z2*z3 is supported"),
            TtError::SingularGrid(_) => Self::input("singular_grid", e.to_string()),
            TtError::EmptyGrid => Self::input("config_invalid", e.to_string()),
            _ => Self::numeric("numeric", e.to_string()),
        }
    }
}

impl From<PicardFuchsError> for CliError {
    fn from(e: PicardFuchsError) -> Self {
        match e {
            PicardFuchsError::Jacobi(j) => j.into(),
            PicardFuchsError::BadIndex(_) => Self::input("config_invalid", e.to_string()),
            PicardFuchsError::NotHomogeneous => Self::input("unsupported", e.to_string()),
            _ => Self::numeric("numeric", e.to_string()),
        }
    }
}
