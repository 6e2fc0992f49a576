//! First-order finite-volume solver for the Saint-Venant system with the
//! friction source term, used to validate the analytic construction.
//!
//! The momentum balance is discretized in conservative form,
//! `m_t + (m²/q + g q²/2)_x = -k |u| u`, with a local Lax–Friedrichs
//! (Rusanov) interface flux, explicit friction, and zero-gradient
//! boundaries. The scheme validates; it does not compete.

use crate::model::WaveConfig;
use crate::profiles::{profile_depth, ProfileError};
use crate::scalar::Real;
use crate::shock::{solve_shock_system, ShockError};
use thiserror::Error;

/// Finite-volume failure modes.
#[derive(Debug, Error)]
pub enum FvError {
    #[error("vacuum state: q = {q} in cell {index}")]
    Vacuum { index: usize, q: f64 },
    #[error("cfl = {cfl} outside (0, 0.9]")]
    BadCfl { cfl: f64 },
    #[error("grid needs at least two cells (got {n})")]
    TooFewCells { n: usize },
    #[error("grids do not align: {a} vs {b} cells")]
    GridMismatch { a: usize, b: usize },
    #[error("grid is at t = {grid_t}, not the requested t = {t}")]
    TimeMismatch { grid_t: f64, t: f64 },
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Shock(#[from] Box<ShockError>),
}

impl From<ShockError> for FvError {
    fn from(e: ShockError) -> Self {
        FvError::Shock(Box::new(e))
    }
}

/// One conserved cell state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FvCell<T> {
    /// Depth (m).
    pub q: T,
    /// Flux (m²/s).
    pub m: T,
}

/// A uniform grid of cell averages.
#[derive(Debug, Clone)]
pub struct FvGrid<T> {
    /// Left edge of the domain (m).
    pub x_left: T,
    /// Cell width (m).
    pub dx: T,
    /// Current time (s).
    pub t: T,
    pub cells: Vec<FvCell<T>>,
}

impl<T: Real> FvGrid<T> {
    /// Center of cell `i`.
    pub fn cell_center(&self, i: usize) -> T {
        self.x_left + (T::from_usize(i).expect("index fits the scalar") + T::of(0.5)) * self.dx
    }

    /// Total water mass on the grid (m²).
    pub fn mass(&self) -> T {
        self.cells.iter().fold(T::zero(), |acc, c| acc + c.q) * self.dx
    }
}

/// Shock position of the analytic construction at time `t`.
fn analytic_shock_position<T: Real>(t: T, config: &WaveConfig<T>) -> Result<T, FvError> {
    if t == T::zero() {
        Ok(T::zero())
    } else {
        Ok(solve_shock_system(t, config, None).map_err(FvError::from)?.x0)
    }
}

/// Sample the analytic construction at time `t` onto a uniform grid
/// (midpoint sampling of depth and line flux, West of the shock position
/// and East of it).
pub fn init_from_analytic<T: Real>(
    t: T,
    x_left: T,
    x_right: T,
    dx: T,
    config: &WaveConfig<T>,
) -> Result<FvGrid<T>, FvError> {
    let n = ((x_right - x_left) / dx).round().to_usize().unwrap_or(0);
    if n < 2 {
        return Err(FvError::TooFewCells { n });
    }
    let x0 = analytic_shock_position(t, config)?;
    let west = config.west_branch();
    let east = config.east_branch();
    let mut cells = Vec::with_capacity(n);
    for i in 0..n {
        let x = x_left + (T::from_usize(i).expect("index fits the scalar") + T::of(0.5)) * dx;
        let (q, m) = if x < x0 {
            let q = profile_depth(x, t, &west, config)?;
            (q, config.west_line.flux_at(q))
        } else {
            let q = profile_depth(x, t, &east, config)?;
            (q, config.east_line.flux_at(q))
        };
        cells.push(FvCell { q, m });
    }
    Ok(FvGrid { x_left, dx, t, cells })
}

/// Rusanov (local Lax–Friedrichs) interface flux between two states.
pub fn rusanov_flux<T: Real>(left: FvCell<T>, right: FvCell<T>, g: T) -> (T, T) {
    let half = T::of(0.5);
    let ul = left.m / left.q;
    let ur = right.m / right.q;
    let cl = (g * left.q).sqrt();
    let cr = (g * right.q).sqrt();
    let lambda = (ul.abs() + cl).max(ur.abs() + cr);
    let fl = (left.m, left.m * ul + half * g * left.q * left.q);
    let fr = (right.m, right.m * ur + half * g * right.q * right.q);
    (
        half * (fl.0 + fr.0) - half * lambda * (right.q - left.q),
        half * (fl.1 + fr.1) - half * lambda * (right.m - left.m),
    )
}

/// Largest signal speed |u| + c on the grid.
pub fn max_signal_speed<T: Real>(grid: &FvGrid<T>, g: T) -> Result<T, FvError> {
    let mut smax = T::zero();
    for (i, c) in grid.cells.iter().enumerate() {
        if !(c.q > T::zero()) {
            return Err(FvError::Vacuum { index: i, q: c.q.as_f64() });
        }
        let s = (c.m / c.q).abs() + (g * c.q).sqrt();
        smax = smax.max(s);
    }
    Ok(smax)
}

fn step_with_dt<T: Real>(grid: &FvGrid<T>, dt: T, config: &WaveConfig<T>) -> Result<FvGrid<T>, FvError> {
    let g = config.g;
    let k = config.k;
    let n = grid.cells.len();
    // ghost cells copy the edge states (outflow)
    let cell = |i: isize| -> FvCell<T> {
        if i < 0 {
            grid.cells[0]
        } else if i as usize >= n {
            grid.cells[n - 1]
        } else {
            grid.cells[i as usize]
        }
    };
    let mut fluxes = Vec::with_capacity(n + 1);
    for i in 0..=n {
        fluxes.push(rusanov_flux(cell(i as isize - 1), cell(i as isize), g));
    }
    let r = dt / grid.dx;
    let mut cells = Vec::with_capacity(n);
    for i in 0..n {
        let c = grid.cells[i];
        let u = c.m / c.q;
        let q = c.q - r * (fluxes[i + 1].0 - fluxes[i].0);
        let m = c.m - r * (fluxes[i + 1].1 - fluxes[i].1) - dt * k * u.abs() * u;
        if !(q > T::zero()) {
            return Err(FvError::Vacuum { index: i, q: q.as_f64() });
        }
        cells.push(FvCell { q, m });
    }
    Ok(FvGrid { x_left: grid.x_left, dx: grid.dx, t: grid.t + dt, cells })
}

/// One explicit step at the given CFL number. The step size is
/// `cfl·dx / max(|u| + c)`.
pub fn fv_step<T: Real>(grid: &FvGrid<T>, cfl: T, config: &WaveConfig<T>) -> Result<FvGrid<T>, FvError> {
    if !(cfl > T::zero() && cfl <= T::of(0.9)) {
        return Err(FvError::BadCfl { cfl: cfl.as_f64() });
    }
    let smax = max_signal_speed(grid, config.g)?;
    step_with_dt(grid, cfl * grid.dx / smax, config)
}

/// Advance until `t_target`, clamping the final step to land exactly.
pub fn advance_to<T: Real>(
    grid: &FvGrid<T>,
    t_target: T,
    cfl: T,
    config: &WaveConfig<T>,
) -> Result<FvGrid<T>, FvError> {
    if !(cfl > T::zero() && cfl <= T::of(0.9)) {
        return Err(FvError::BadCfl { cfl: cfl.as_f64() });
    }
    let mut g = grid.clone();
    while g.t < t_target {
        let smax = max_signal_speed(&g, config.g)?;
        let dt = (cfl * g.dx / smax).min(t_target - g.t);
        g = step_with_dt(&g, dt, config)?;
    }
    Ok(g)
}

/// L1 and L∞ errors of the grid depths against the analytic construction at
/// time `t` (shock-aware: West field left of the analytic shock position,
/// East field right of it). These quantify how far the construction is from
/// the computed solution of the system; they are diagnostics, not a
/// convergence reference.
pub fn compare_profiles<T: Real>(
    grid: &FvGrid<T>,
    t: T,
    config: &WaveConfig<T>,
) -> Result<(T, T), FvError> {
    if (grid.t - t).abs() > T::of(1e-9) {
        return Err(FvError::TimeMismatch { grid_t: grid.t.as_f64(), t: t.as_f64() });
    }
    let x0 = analytic_shock_position(t, config)?;
    let west = config.west_branch();
    let east = config.east_branch();
    let mut l1 = T::zero();
    let mut linf = T::zero();
    for (i, c) in grid.cells.iter().enumerate() {
        let x = grid.cell_center(i);
        let q_ana = if x < x0 {
            profile_depth(x, t, &west, config)?
        } else {
            profile_depth(x, t, &east, config)?
        };
        let e = (c.q - q_ana).abs();
        l1 = l1 + e;
        linf = linf.max(e);
    }
    Ok((l1 * grid.dx, linf))
}

/// Restrict a grid to half resolution by pairwise averaging.
pub fn restrict<T: Real>(grid: &FvGrid<T>) -> FvGrid<T> {
    let half = T::of(0.5);
    let cells = grid
        .cells
        .chunks_exact(2)
        .map(|p| FvCell { q: half * (p[0].q + p[1].q), m: half * (p[0].m + p[1].m) })
        .collect();
    FvGrid { x_left: grid.x_left, dx: grid.dx + grid.dx, t: grid.t, cells }
}

/// L1 distance between the depth fields of two equally laid-out grids.
pub fn grid_l1_distance<T: Real>(a: &FvGrid<T>, b: &FvGrid<T>) -> Result<T, FvError> {
    if a.cells.len() != b.cells.len() {
        return Err(FvError::GridMismatch { a: a.cells.len(), b: b.cells.len() });
    }
    Ok(a.cells
        .iter()
        .zip(&b.cells)
        .fold(T::zero(), |acc, (x, y)| acc + (x.q - y.q).abs())
        * a.dx)
}

/// Reference-free convergence measurement: runs the scheme at `dx`, `dx/2`
/// and `dx/4` from the analytic initial data and compares successive
/// refinements after restriction. Returns the coarse and fine L1 distances
/// and the measured order `log2(coarse/fine)`.
pub fn self_convergence_order<T: Real>(
    config: &WaveConfig<T>,
    x_left: T,
    x_right: T,
    dx: T,
    t_end: T,
    cfl: T,
) -> Result<(T, T, T), FvError> {
    let half = T::of(0.5);
    let run = |h: T| -> Result<FvGrid<T>, FvError> {
        let g0 = init_from_analytic(T::zero(), x_left, x_right, h, config)?;
        advance_to(&g0, t_end, cfl, config)
    };
    let coarse = run(dx)?;
    let medium = run(half * dx)?;
    let fine = run(half * half * dx)?;
    let d_coarse = grid_l1_distance(&coarse, &restrict(&medium))?;
    let d_fine = grid_l1_distance(&medium, &restrict(&fine))?;
    let order = (d_coarse / d_fine).ln() / T::of(2.0).ln();
    Ok((d_coarse, d_fine, order))
}
