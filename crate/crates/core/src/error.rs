use thiserror::Error;

/// Errors raised by the numerical and synthesis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |A - A^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max |U^dagger U - 1| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("triple ({n_plus}, {n_minus}, {n_zero}) is infeasible for {target}")]
    InfeasibleTriple {
        n_plus: u32,
        n_minus: u32,
        n_zero: u32,
        target: &'static str,
    },

    #[error("global phase undefined: fidelity {fidelity} is below {threshold}")]
    UndefinedPhase { fidelity: f64, threshold: f64 },

    #[error("no feasible triple for {target} with n_max = {n_max}")]
    NoFeasibleTriple { target: &'static str, n_max: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
