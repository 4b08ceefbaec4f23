//! Physics instance, effective potential and grid construction.
//!
//! The radial equation solved throughout is
//!
//! ```text
//! u''(r) + [eta - 1/r - w^2 r^2 - (l^2 - 1/4)/r^2] u(r) = 0
//! ```
//!
//! in hartree/bohr atomic units, where the 1/r term is the inter-electron
//! Coulomb repulsion and can be switched off to recover the exactly solvable
//! two-dimensional oscillator.

use crate::error::{Result, SolverError};

/// A two-electron quantum dot instance: confinement frequency, angular
/// momentum and whether the Coulomb repulsion is active.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProblem {
    omega: f64,
    ell: u32,
    coulomb_enabled: bool,
}

impl RadialProblem {
    /// Full problem with the Coulomb term, `omega` in hartree.
    pub fn new(omega: f64, ell: u32) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(SolverError::InvalidOmega { omega });
        }
        Ok(Self { omega, ell, coulomb_enabled: true })
    }

    /// Pure-oscillator validation mode: identical except the 1/r term is
    /// dropped, so the spectrum is exactly 2(2 n_r + l + 1) omega.
    pub fn oscillator_only(omega: f64, ell: u32) -> Result<Self> {
        let mut p = Self::new(omega, ell)?;
        p.coulomb_enabled = false;
        Ok(p)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn coulomb_enabled(&self) -> bool {
        self.coulomb_enabled
    }

    /// Centrifugal coefficient (l^2 - 1/4); attractive only at l = 0.
    pub(crate) fn centrifugal(&self) -> f64 {
        let l = self.ell as f64;
        l * l - 0.25
    }
}

/// Uniform radial mesh with a strictly positive inner cutoff, so the 1/r and
/// 1/r^2 terms are evaluable at every sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    r_min: f64,
    r_max: f64,
    step: f64,
    n_points: usize,
}

impl Grid {
    pub const MIN_POINTS: usize = 16;

    /// Builds a grid from its inner cutoff, spacing and point count;
    /// `r_max` is implied as `r_min + (n_points - 1) * step`.
    pub fn uniform(r_min: f64, step: f64, n_points: usize) -> Result<Self> {
        if !(r_min > 0.0) || !r_min.is_finite() {
            return Err(SolverError::InvalidGrid {
                reason: format!("r_min must be positive and finite, got {r_min}"),
            });
        }
        if !(step > 0.0) || !step.is_finite() {
            return Err(SolverError::InvalidGrid {
                reason: format!("step must be positive and finite, got {step}"),
            });
        }
        if n_points < Self::MIN_POINTS {
            return Err(SolverError::InvalidGrid {
                reason: format!("need at least {} points, got {n_points}", Self::MIN_POINTS),
            });
        }
        let r_max = r_min + (n_points - 1) as f64 * step;
        Ok(Self { r_min, r_max, step, n_points })
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Radius of sample `i`.
    pub fn radius(&self, i: usize) -> f64 {
        debug_assert!(i < self.n_points);
        self.r_min + i as f64 * self.step
    }

    /// Index of the sample nearest `r`, clamped into the grid.
    pub fn nearest_index(&self, r: f64) -> usize {
        let i = ((r - self.r_min) / self.step).round();
        (i.max(0.0) as usize).min(self.n_points - 1)
    }

    pub fn radii(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.radius(i))
    }
}

/// Effective potential evaluated at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectivePotentialSample {
    pub r: f64,
    pub v_eff: f64,
}

/// v_eff(r) = 1/r + w^2 r^2 + (l^2 - 1/4)/r^2, the Coulomb term dropped in
/// oscillator-only mode.
pub fn effective_potential(problem: &RadialProblem, r: f64) -> Result<EffectivePotentialSample> {
    if !(r > 0.0) {
        return Err(SolverError::NonPositiveRadius { radius: r });
    }
    let w = problem.omega();
    let mut v = w * w * r * r + problem.centrifugal() / (r * r);
    if problem.coulomb_enabled() {
        v += 1.0 / r;
    }
    Ok(EffectivePotentialSample { r, v_eff: v })
}

/// Local squared wavenumber k^2(r) = eta - v_eff(r).
pub fn k_squared(problem: &RadialProblem, eta: f64, r: f64) -> Result<f64> {
    Ok(eta - effective_potential(problem, r)?.v_eff)
}

/// k^2 sampled over grid indices `lo ..= hi`. Grid invariants guarantee every
/// radius is strictly positive, so this cannot fail.
pub(crate) fn k_squared_range(
    problem: &RadialProblem,
    eta: f64,
    grid: &Grid,
    lo: usize,
    hi: usize,
) -> Vec<f64> {
    let w2 = problem.omega() * problem.omega();
    let cf = problem.centrifugal();
    let coulomb = problem.coulomb_enabled();
    (lo..=hi)
        .map(|i| {
            let r = grid.radius(i);
            let mut v = w2 * r * r + cf / (r * r);
            if coulomb {
                v += 1.0 / r;
            }
            eta - v
        })
        .collect()
}

/// k^2 sampled over a whole grid.
pub(crate) fn k_squared_on_grid(problem: &RadialProblem, eta: f64, grid: &Grid) -> Vec<f64> {
    k_squared_range(problem, eta, grid, 0, grid.n_points() - 1)
}

/// Relative tolerance used when refining turning points by bisection.
pub const TURNING_POINT_TOL: f64 = 1e-10;

const TURNING_SCAN_SAMPLES: usize = 4000;

/// All radii in `(window.0, window.1)` where k^2 changes sign, each refined by
/// bisection to relative tolerance 1e-10 and returned in ascending order.
///
/// The scan is log-spaced: sign changes can sit both at the 1/r^2-dominated
/// inner scale and at the oscillator-dominated outer scale.
pub fn classical_turning_points(
    problem: &RadialProblem,
    eta: f64,
    window: (f64, f64),
) -> Result<Vec<f64>> {
    let (lo, hi) = window;
    if !(lo > 0.0) {
        return Err(SolverError::NonPositiveRadius { radius: lo });
    }
    if !(hi > lo) || !eta.is_finite() {
        return Err(SolverError::InvalidWindow { lo, hi });
    }

    let k2 = |r: f64| k_squared(problem, eta, r).expect("radius positive by construction");
    let log_lo = lo.ln();
    let log_hi = hi.ln();
    let n = TURNING_SCAN_SAMPLES;
    let mut roots = Vec::new();
    let mut r_prev = lo;
    let mut f_prev = k2(lo);
    for i in 1..=n {
        let r = (log_lo + (log_hi - log_lo) * i as f64 / n as f64).exp();
        let f = k2(r);
        if f_prev == 0.0 {
            roots.push(r_prev);
        } else if f != 0.0 && f.signum() != f_prev.signum() {
            roots.push(bisect_root(&k2, r_prev, r, f_prev));
        }
        r_prev = r;
        f_prev = f;
    }
    if f_prev == 0.0 {
        roots.push(r_prev);
    }
    Ok(roots)
}

fn bisect_root(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) <= TURNING_POINT_TOL * mid.abs() {
            return mid;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Default-grid mesh cap: step <= 1e-3 / sqrt(omega).
pub const DEFAULT_STEP_CAP_FACTOR: f64 = 1e-3;
/// Default-grid point floor.
pub const DEFAULT_MIN_POINTS: usize = 20_000;
/// Default-grid outer radius floor: r_max >= 10 / sqrt(omega).
pub const DEFAULT_R_MAX_FLOOR_FACTOR: f64 = 10.0;

/// Grid suitable for every state up to `eta_max`: the outer radius is 1.5x
/// the outermost turning point at `eta_max` (with floor 10/sqrt(omega)), the
/// spacing obeys step <= 1e-3/sqrt(omega) and n >= 20,000, and the inner
/// cutoff is one spacing.
pub fn default_grid(problem: &RadialProblem, eta_max: f64) -> Result<Grid> {
    if !eta_max.is_finite() {
        return Err(SolverError::InvalidWindow { lo: eta_max, hi: eta_max });
    }
    let w = problem.omega();
    let sqrt_w = w.sqrt();
    let floor = DEFAULT_R_MAX_FLOOR_FACTOR / sqrt_w;
    let search_hi = (2.0 * eta_max.max(0.0).sqrt() / w).max(2.0 * floor);
    let turning = classical_turning_points(problem, eta_max, (1e-12, search_hi))?;
    let r_max = turning
        .last()
        .map(|&rt| 1.5 * rt)
        .unwrap_or(0.0)
        .max(floor);
    let step_cap = DEFAULT_STEP_CAP_FACTOR / sqrt_w;
    let n = DEFAULT_MIN_POINTS.max((r_max / step_cap).ceil() as usize);
    // r_min = step and r_max = n * step reproduce the requested outer radius
    // exactly while keeping all samples positive.
    let step = r_max / n as f64;
    Grid::uniform(step, step, n)
}
