//! Numerov-method eigensolver for the relative-motion radial Schrödinger
//! equation of two electrons in a planar harmonic trap,
//!
//! ```text
//! u''(r) + [eta - 1/r - w^2 r^2 - (l^2 - 1/4)/r^2] u(r) = 0
//! ```
//!
//! in hartree/bohr atomic units. Outward and inward Numerov sweeps are
//! matched through a log-derivative defect at the outermost classical
//! turning point; eigenvalues are bracketed by defect sign changes and node
//! counts and refined by bisection. Disabling the Coulomb term recovers the
//! exactly solvable two-dimensional oscillator, used throughout as a
//! full-pipeline oracle.

pub mod eigensolver;
pub mod error;
pub mod model;
pub mod numerov;
pub mod oracle;

pub use eigensolver::{
    bound_search_grid, bracket_eigenvalues, find_bound_state, rayleigh_quotient,
    refine_eigenvalue, scan_spectrum, solve_by_nodes, Bracket, EigenResult, ScanOutcome,
};
pub use error::{Result, SolverError};
pub use model::{
    classical_turning_points, default_grid, effective_potential, k_squared,
    EffectivePotentialSample, Grid, RadialProblem,
};
pub use numerov::{
    count_nodes, integrate_inward, integrate_outward, match_defect, normalize, numerov_step,
    MatchReport, PartialWave, Wavefunction,
};
pub use oracle::{
    envelope, heun_parameters, oscillator_exact_energy, polynomial_energy, table1_reference,
    table2_reference, HeunParameters, Table1Row, Table2Entry,
};
