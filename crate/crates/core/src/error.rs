use thiserror::Error;

/// Errors produced by grid construction, integration sweeps and the
/// eigenvalue search.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("radius must be strictly positive, got {radius}")]
    NonPositiveRadius { radius: f64 },

    #[error("confinement frequency must be strictly positive and finite, got {omega}")]
    InvalidOmega { omega: f64 },

    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: String },

    #[error(
        "Numerov weight 1 + step^2 k^2/12 vanished (k^2 = {k_squared:.6e}, step = {step:.6e}); \
         refine the grid"
    )]
    StepTooLarge { k_squared: f64, step: f64 },

    #[error(
        "grid too short: k^2(r_max) = {k_squared_at_r_max:.6e} >= 0 at r_max = {r_max}; \
         extend r_max into the classically forbidden region"
    )]
    GridTooShort { r_max: f64, k_squared_at_r_max: f64 },

    #[error("no classical turning point inside the grid at eta = {eta}")]
    NoTurningPoint { eta: f64 },

    #[error("wavefunction vanishes near every candidate match point at eta = {eta}")]
    MatchPointInvalid { eta: f64 },

    #[error("cannot normalize an identically zero wavefunction")]
    ZeroNorm,

    #[error("bracket [{lo}, {hi}] does not straddle a defect sign change")]
    InvalidBracket { lo: f64, hi: f64 },

    #[error(
        "defect sign change lost during refinement near eta = {eta} \
         (residual {defect:.3e}); a finer grid is needed"
    )]
    BracketLost { eta: f64, defect: f64 },

    #[error("no state with {target_nodes} nodes found while expanding the window up to {eta_hi}")]
    NotFound { target_nodes: usize, eta_hi: f64 },

    #[error(
        "{count} negative-energy brackets found; more than one signals a \
         grid or regularization artifact"
    )]
    MultipleNegativeStates { count: usize },

    #[error("invalid energy window [{lo}, {hi}]")]
    InvalidWindow { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, SolverError>;
