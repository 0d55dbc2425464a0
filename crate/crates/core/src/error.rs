use thiserror::Error;

/// Errors raised by the algebra, the solvers and the grid oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot evaluate a series with a Dirac part (delta coefficient {0})")]
    EvalOfDistribution(f64),

    #[error("series did not converge: {0}")]
    NonConvergence(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("leading coefficient a0 of the kernel series must be nonzero")]
    DegenerateLeadingCoefficient,

    #[error("kernel triple residual {residual:.3e} exceeds {tolerance:.1e}")]
    TripleResidualTooLarge { residual: f64, tolerance: f64 },

    #[error("Sonin pair residual {residual:.3e} exceeds {tolerance:.1e}")]
    PairResidualTooLarge { residual: f64, tolerance: f64 },

    #[error("not differentiable inside C_-1: {0}")]
    NotDifferentiable(String),

    #[error("limit at t = 0 diverges: term with exponent {exponent} < 1")]
    DivergentAtZero { exponent: f64 },

    #[error("partial fractions ill-conditioned: recombination residual {residual:.3e}, condition {condition:.3e}")]
    IllConditioned { residual: f64, condition: f64 },

    #[error("imaginary parts failed to cancel: residue {0:.3e}")]
    ComplexResidue(f64),

    #[error("singular implicit step at node {node}")]
    SingularStep { node: usize },

    #[error("truncated tail contributes {relative:.3e} (relative) at t = {t}")]
    TruncationExceeded { t: f64, relative: f64 },
}

impl Error {
    /// Numerical failures as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence(_)
                | Error::IllConditioned { .. }
                | Error::SingularStep { .. }
                | Error::ComplexResidue(_)
                | Error::TruncationExceeded { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
