//! Three-term Numerov recursion and the sweep/matching machinery built on it.
//!
//! The solution is propagated outward from the singular origin and inward
//! from the classically forbidden outer edge; the two sweeps are compared
//! through a dimensionless log-derivative defect at the outermost classical
//! turning point. The defect vanishes exactly at eigenvalues.

use crate::error::{Result, SolverError};
use crate::model::{k_squared_on_grid, k_squared_range, Grid, RadialProblem};

/// Samples are rescaled once their magnitude exceeds this, so deep forbidden
/// regions cannot overflow; log-derivatives are unaffected.
const RESCALE_THRESHOLD: f64 = 1e250;
const RESCALE_FACTOR: f64 = 1e-250;

/// Magnitude of the tiny outer seed realizing "practically zero" at r_max.
const INWARD_SEED: f64 = 1e-250;

/// The outward recursion starts this many samples away from the origin; the
/// points in between come from the regular-solution series. Starting the
/// three-term recursion at the first mesh point leaves a step-independent
/// eigenvalue bias for l = 0, where the centrifugal term is attractive and
/// the solution has unbounded derivatives at r = 0.
const SERIES_START: usize = 32;
const SERIES_TERMS: usize = 28;

/// How far the match point may be shifted outward when u(match) vanishes.
const MAX_MATCH_SHIFTS: usize = 8;
/// u(match) must exceed this fraction of the sweep maximum.
const MATCH_AMPLITUDE_FLOOR: f64 = 1e-12;

/// One Numerov step: given k^2 and u at two consecutive points, returns u at
/// the next point,
///
/// ```text
/// [1 + d^2/12 k2_next] u_next = 2 [1 - 5 d^2/12 k2_curr] u_curr
///                               - [1 + d^2/12 k2_prev] u_prev
/// ```
///
/// The local error is O(d^6).
pub fn numerov_step(
    k2_prev: f64,
    k2_curr: f64,
    k2_next: f64,
    u_prev: f64,
    u_curr: f64,
    step: f64,
) -> Result<f64> {
    let h12 = step * step / 12.0;
    let denom = 1.0 + h12 * k2_next;
    if denom.abs() < 1e-12 {
        return Err(SolverError::StepTooLarge { k_squared: k2_next, step });
    }
    Ok((2.0 * (1.0 - 5.0 * h12 * k2_curr) * u_curr - (1.0 + h12 * k2_prev) * u_prev) / denom)
}

/// A single integration sweep covering grid indices
/// `start_index ..= start_index + values.len() - 1`.
#[derive(Debug, Clone)]
pub struct PartialWave {
    start_index: usize,
    values: Vec<f64>,
    rescale_events: u32,
}

impl PartialWave {
    pub fn start_index(&self) -> usize {
        self.start_index
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rescale_events(&self) -> u32 {
        self.rescale_events
    }

    /// Sample at absolute grid index `i`.
    pub fn at(&self, i: usize) -> f64 {
        self.values[i - self.start_index]
    }
}

/// Coefficients c_k of the regular solution
/// u(r) = r^(l + 1/2) sum_k c_k r^k near the origin, c_0 = 1:
///
/// ```text
/// k (k + 2l) c_k = [coulomb] c_{k-1} - eta c_{k-2} + w^2 c_{k-4}
/// ```
fn series_coefficients(problem: &RadialProblem, eta: f64) -> [f64; SERIES_TERMS] {
    let mut c = [0.0; SERIES_TERMS];
    c[0] = 1.0;
    let coulomb = if problem.coulomb_enabled() { 1.0 } else { 0.0 };
    let w2 = problem.omega() * problem.omega();
    let two_ell = 2.0 * problem.ell() as f64;
    for k in 1..SERIES_TERMS {
        let mut s = coulomb * c[k - 1];
        if k >= 2 {
            s -= eta * c[k - 2];
        }
        if k >= 4 {
            s += w2 * c[k - 4];
        }
        c[k] = s / (k as f64 * (k as f64 + two_ell));
    }
    c
}

fn series_value(problem: &RadialProblem, coeffs: &[f64; SERIES_TERMS], r: f64) -> f64 {
    let mut poly = 0.0;
    for &ck in coeffs.iter().rev() {
        poly = poly * r + ck;
    }
    r.powf(problem.ell() as f64 + 0.5) * poly
}

/// Precomputed Numerov weights w_i = 1 + d^2/12 k^2_i; the recursion becomes
/// u_{i+1} = ((12 - 10 w_i) u_i - w_{i-1} u_{i-1}) / w_{i+1}.
fn weights(k2: &[f64], step: f64) -> Result<Vec<f64>> {
    let h12 = step * step / 12.0;
    let w: Vec<f64> = k2.iter().map(|&k| 1.0 + h12 * k).collect();
    if let Some(&bad) = w.iter().find(|w| w.abs() < 1e-12) {
        return Err(SolverError::StepTooLarge {
            k_squared: (bad - 1.0) / h12,
            step,
        });
    }
    Ok(w)
}

fn rescale(values: &mut [f64], events: &mut u32) {
    for v in values.iter_mut() {
        *v *= RESCALE_FACTOR;
    }
    *events += 1;
}

/// Integrates the regular solution outward from the origin up to
/// `stop_index` (inclusive).
///
/// The first samples come from the local series of the regular solution (the
/// r^(l+1/2) prefactor times its power series); the recursion takes over a
/// few dozen samples out. Samples are rescaled on overflow and the rescale
/// count is reported.
pub fn integrate_outward(
    problem: &RadialProblem,
    eta: f64,
    grid: &Grid,
    stop_index: usize,
) -> Result<PartialWave> {
    if stop_index >= grid.n_points() {
        return Err(SolverError::InvalidGrid {
            reason: format!(
                "stop index {stop_index} outside grid of {} points",
                grid.n_points()
            ),
        });
    }
    let k2 = k_squared_range(problem, eta, grid, 0, stop_index);
    let w = weights(&k2, grid.step())?;

    let seed_top = SERIES_START
        .min(stop_index.saturating_sub(1))
        .max(1)
        .min(stop_index);
    let coeffs = series_coefficients(problem, eta);
    let mut values = Vec::with_capacity(stop_index + 1);
    for i in 0..=seed_top {
        values.push(series_value(problem, &coeffs, grid.radius(i)));
    }

    let mut events = 0;
    for i in seed_top..stop_index {
        let next = (2.0 * (6.0 - 5.0 * w[i]) * values[i] - w[i - 1] * values[i - 1]) / w[i + 1];
        values.push(next);
        if next.abs() > RESCALE_THRESHOLD {
            rescale(&mut values, &mut events);
        }
    }
    debug_assert!(values.len() == stop_index + 1);
    if values.iter().any(|v| !v.is_finite()) {
        return Err(SolverError::StepTooLarge { k_squared: f64::NAN, step: grid.step() });
    }
    Ok(PartialWave { start_index: 0, values, rescale_events: events })
}

/// Integrates inward from r_max down to `stop_index` (inclusive).
///
/// Seeds are a tiny value at r_max and the Gaussian-decay ratio
/// exp(w r_max d) one step in; requires k^2(r_max) < 0 so the outer edge is
/// classically forbidden.
pub fn integrate_inward(
    problem: &RadialProblem,
    eta: f64,
    grid: &Grid,
    stop_index: usize,
) -> Result<PartialWave> {
    let n = grid.n_points();
    if stop_index >= n {
        return Err(SolverError::InvalidGrid {
            reason: format!("stop index {stop_index} outside grid of {n} points"),
        });
    }
    let k2 = k_squared_range(problem, eta, grid, stop_index, n - 1);
    let len = n - stop_index;
    if k2[len - 1] >= 0.0 {
        return Err(SolverError::GridTooShort {
            r_max: grid.r_max(),
            k_squared_at_r_max: k2[len - 1],
        });
    }
    let w = weights(&k2, grid.step())?;
    let mut values = vec![0.0; len];
    values[len - 1] = INWARD_SEED;
    if len >= 2 {
        values[len - 2] = INWARD_SEED * (problem.omega() * grid.r_max() * grid.step()).exp();
    }

    let mut events = 0;
    for j in (1..len - 1).rev() {
        let prev = (2.0 * (6.0 - 5.0 * w[j]) * values[j] - w[j + 1] * values[j + 1]) / w[j - 1];
        values[j - 1] = prev;
        if prev.abs() > RESCALE_THRESHOLD {
            rescale(&mut values[j - 1..], &mut events);
        }
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(SolverError::StepTooLarge { k_squared: f64::NAN, step: grid.step() });
    }
    Ok(PartialWave { start_index: stop_index, values, rescale_events: events })
}

/// Log-derivative comparison of the two sweeps at the matching radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchReport {
    /// Grid index of the matching radius, strictly inside the grid.
    pub match_index: usize,
    /// Dimensionless defect step * (u'_L/u_L - u'_R/u_R); zero at eigenvalues.
    pub defect: f64,
    pub left_nodes: usize,
    pub right_nodes: usize,
}

pub(crate) struct MatchEvaluation {
    pub report: MatchReport,
    pub left: PartialWave,
    pub right: PartialWave,
}

/// Index nearest the outermost k^2 sign change, or None if k^2 never
/// changes sign on the grid.
fn outermost_turning_index(k2: &[f64]) -> Option<usize> {
    for i in (0..k2.len() - 1).rev() {
        let (a, b) = (k2[i], k2[i + 1]);
        if a != 0.0 && b != 0.0 && a.signum() != b.signum() {
            // Linear interpolation picks the nearer of the two samples.
            let frac = a / (a - b);
            return Some(if frac < 0.5 { i } else { i + 1 });
        }
        if a == 0.0 {
            return Some(i);
        }
    }
    None
}

pub(crate) fn evaluate_match(
    problem: &RadialProblem,
    eta: f64,
    grid: &Grid,
    k2: &[f64],
) -> Result<MatchEvaluation> {
    let n = grid.n_points();
    if k2[n - 1] >= 0.0 {
        return Err(SolverError::GridTooShort {
            r_max: grid.r_max(),
            k_squared_at_r_max: k2[n - 1],
        });
    }
    let turning = outermost_turning_index(k2).ok_or(SolverError::NoTurningPoint { eta })?;
    let mut m = turning.clamp(2, n - 3);

    for _ in 0..=MAX_MATCH_SHIFTS {
        let left = integrate_outward(problem, eta, grid, m + 1)?;
        let right = integrate_inward(problem, eta, grid, m - 1)?;
        let left_max = left.values().iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        let right_max = right.values().iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        let ul = left.at(m);
        let ur = right.at(m);
        if ul.abs() > MATCH_AMPLITUDE_FLOOR * left_max && ur.abs() > MATCH_AMPLITUDE_FLOOR * right_max
        {
            let defect =
                ((left.at(m + 1) - left.at(m - 1)) / ul - (right.at(m + 1) - right.at(m - 1)) / ur)
                    / 2.0;
            if !defect.is_finite() {
                return Err(SolverError::MatchPointInvalid { eta });
            }
            let left_nodes = count_sign_changes(left.values());
            let right_nodes = count_sign_changes(right.values());
            return Ok(MatchEvaluation {
                report: MatchReport { match_index: m, defect, left_nodes, right_nodes },
                left,
                right,
            });
        }
        if m + 3 >= n {
            break;
        }
        m += 1;
    }
    Err(SolverError::MatchPointInvalid { eta })
}

/// Matches the outward and inward sweeps at the outermost turning point and
/// reports the log-derivative defect. The defect is a decreasing function of
/// eta between its poles and changes sign downward at every eigenvalue.
pub fn match_defect(problem: &RadialProblem, eta: f64, grid: &Grid) -> Result<MatchReport> {
    let k2 = k_squared_on_grid(problem, eta, grid);
    evaluate_match(problem, eta, grid, &k2).map(|ev| ev.report)
}

/// A sampled radial solution u(r) with its energy and node count.
#[derive(Debug, Clone)]
pub struct Wavefunction {
    grid: Grid,
    values: Vec<f64>,
    eta: f64,
    node_count: usize,
    normalized: bool,
}

impl Wavefunction {
    /// Wraps raw samples; `values` must cover the whole grid.
    pub fn from_samples(grid: Grid, values: Vec<f64>, eta: f64) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(SolverError::InvalidGrid {
                reason: format!(
                    "{} samples for a grid of {} points",
                    values.len(),
                    grid.n_points()
                ),
            });
        }
        let node_count = count_sign_changes(&values);
        Ok(Self { grid, values, eta, node_count, normalized: false })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn normalized(&self) -> bool {
        self.normalized
    }
}

/// Assembles a full wavefunction from both sweeps, the inward one rescaled so
/// the two agree at the match point.
pub(crate) fn assemble(eta: f64, grid: &Grid, evaluation: &MatchEvaluation) -> Result<Wavefunction> {
    let m = evaluation.report.match_index;
    let scale = evaluation.left.at(m) / evaluation.right.at(m);
    let n = grid.n_points();
    let mut values = Vec::with_capacity(n);
    values.extend_from_slice(&evaluation.left.values()[..=m]);
    for i in m + 1..n {
        values.push(evaluation.right.at(i) * scale);
    }
    Wavefunction::from_samples(grid.clone(), values, eta)
}

/// Strict sign changes between consecutive samples; exact zeros neither count
/// nor break a run, so endpoint zeros are ignored.
pub(crate) fn count_sign_changes(values: &[f64]) -> usize {
    let mut nodes = 0;
    let mut prev = 0.0f64;
    for &v in values {
        if v == 0.0 {
            continue;
        }
        if prev != 0.0 && (v > 0.0) != (prev > 0.0) {
            nodes += 1;
        }
        prev = v;
    }
    nodes
}

/// Number of interior sign changes of the sampled solution.
pub fn count_nodes(wf: &Wavefunction) -> usize {
    count_sign_changes(wf.values())
}

/// Composite trapezoidal integral of u^2 over the grid.
pub(crate) fn trapezoid_norm(values: &[f64], step: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..values.len() - 1].iter().map(|v| v * v).sum();
    let edges = 0.5 * (values[0] * values[0] + values[values.len() - 1] * values[values.len() - 1]);
    step * (inner + edges)
}

/// Rescales so the trapezoidal integral of u^2 equals one, with the sign
/// convention u > 0 on the first interior lobe.
pub fn normalize(wf: Wavefunction) -> Result<Wavefunction> {
    let norm = trapezoid_norm(wf.values(), wf.grid().step());
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(SolverError::ZeroNorm);
    }
    let peak = wf.values().iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let first_lobe_sign = wf
        .values()
        .iter()
        .find(|v| v.abs() > 1e-12 * peak)
        .map(|v| v.signum())
        .unwrap_or(1.0);
    let scale = first_lobe_sign / norm.sqrt();
    let values: Vec<f64> = wf.values.iter().map(|v| v * scale).collect();
    Ok(Wavefunction { normalized: true, values, ..wf })
}
