//! Physical constants, ocean states, phase-plane wave lines, and scenario
//! construction.
//!
//! A scenario is fixed by three depths: the far-east still depth `q_star`,
//! the far-west still depth `q_0 > q_star`, and the West reference depth
//! `q_ref`. Everything else (celerities, the West wave velocity `a_ref`, the
//! junction depth `q_p`) follows in closed form. `q_ref` has a distinguished
//! maximal value at which the jump relation between `(q_ref, q_star)` holds
//! exactly; [`solve_max_qref`] locates it.

use crate::numerics::bisect::{bisect, expand_upper, BisectError, Bisection};
use crate::scalar::Real;
use thiserror::Error;

/// Errors from scenario construction.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("{name} must be positive (got {value})")]
    NonPositive { name: &'static str, value: f64 },
    #[error("negative depth: q = {q}")]
    NegativeDepth { q: f64 },
    #[error("ordering violated: {relation}")]
    Ordering { relation: String },
    #[error("no maximal q_ref below {limit}: {source}")]
    NoMaxQref { limit: f64, source: BisectError },
}

/// Gravity, sonic speed in water, Strickler friction, and the minimum count
/// of sonic bottom-surface interactions per wavelength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants<T> {
    /// Gravitational acceleration (m/s²).
    pub g: T,
    /// Sonic speed in water (m/s).
    pub c_s: T,
    /// Strickler friction coefficient.
    pub k: T,
    /// Minimum sonic back-and-forth count.
    pub n_interactions: u32,
}

impl<T: Real> Default for PhysicalConstants<T> {
    fn default() -> Self {
        Self { g: T::of(9.81), c_s: T::of(1647.0), k: T::of(0.45), n_interactions: 25 }
    }
}

impl<T: Real> PhysicalConstants<T> {
    pub fn validate(&self) -> Result<(), ModelError> {
        for (name, value) in [("g", self.g), ("c_s", self.c_s), ("k", self.k)] {
            if !(value > T::zero()) {
                return Err(ModelError::NonPositive { name, value: value.as_f64() });
            }
        }
        if self.n_interactions < 1 {
            return Err(ModelError::NonPositive { name: "n_interactions", value: 0.0 });
        }
        Ok(())
    }
}

/// A depth/flux state of the ocean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OceanState<T> {
    /// Water depth (m).
    pub q: T,
    /// Flux m = q·u (m²/s).
    pub m: T,
}

impl<T: Real> OceanState<T> {
    pub fn new(q: T, m: T) -> Self {
        Self { q, m }
    }

    /// Water velocity u = m/q.
    pub fn velocity(&self) -> T {
        self.m / self.q
    }
}

/// One wave family in the `(q, m)` phase plane: the states of a source wave
/// lie on the straight line `m = a·q - b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveLine<T> {
    /// Wave (translation) velocity (m/s).
    pub a: T,
    /// Flux intercept (m²/s).
    pub b: T,
    /// A state the line passes through.
    pub anchor: OceanState<T>,
}

impl<T: Real> WaveLine<T> {
    /// Line of slope `a` through `anchor`; the intercept is
    /// `b = a·q_anchor - m_anchor`.
    pub fn through(a: T, anchor: OceanState<T>) -> Self {
        Self { a, b: a * anchor.q - anchor.m, anchor }
    }

    /// Flux carried at depth `q`.
    pub fn flux_at(&self, q: T) -> T {
        self.a * q - self.b
    }

    /// Water velocity at depth `q` on this line.
    pub fn velocity_at(&self, q: T) -> T {
        self.flux_at(q) / q
    }

    /// Depth at which two lines carry the same flux.
    pub fn intersection_depth(&self, other: &Self) -> T {
        (self.b - other.b) / (self.a - other.a)
    }
}

/// Relative velocity of surface gravity waves at depth `q`: sqrt(g·q).
pub fn celerity<T: Real>(q: T, g: T) -> Result<T, ModelError> {
    if q < T::zero() {
        return Err(ModelError::NegativeDepth { q: q.as_f64() });
    }
    Ok((g * q).sqrt())
}

/// Smallest wavelength for which the shallow-water description is trusted at
/// mean depth `h` with `n` sonic interactions: `2·n·h·sqrt(g·h)/c_s`.
pub fn min_wavelength<T: Real>(
    h: T,
    n: u32,
    consts: &PhysicalConstants<T>,
) -> Result<T, ModelError> {
    if !(h > T::zero()) {
        return Err(ModelError::NonPositive { name: "h", value: h.as_f64() });
    }
    let n = T::from_u32(n).expect("interaction count fits the scalar");
    Ok(T::of(2.0) * n * h * (consts.g * h).sqrt() / consts.c_s)
}

/// A fully solved scenario.
#[derive(Debug, Clone, Copy)]
pub struct WaveConfig<T> {
    /// Far-east still depth (m).
    pub q_star: T,
    /// Far-west still depth (m).
    pub q_0: T,
    /// West reference depth (m).
    pub q_ref: T,
    /// Junction depth where the two wave lines meet (m).
    pub q_p: T,
    /// Celerity at `q_star` (m/s); also the East wave velocity.
    pub c_star: T,
    /// Celerity at `q_ref` (m/s).
    pub c_ref: T,
    /// West wave velocity (m/s).
    pub a_ref: T,
    /// West reference flux (m²/s).
    pub m_ref: T,
    /// Froude number of the reference state.
    pub froude_ref: T,
    /// Strickler friction coefficient.
    pub k: T,
    /// Gravitational acceleration (m/s²).
    pub g: T,
    /// East wave family through `(q_star, 0)`.
    pub east_line: WaveLine<T>,
    /// West wave family through `(q_0, 0)`.
    pub west_line: WaveLine<T>,
}

impl<T: Real> WaveConfig<T> {
    /// Depth ratio q_0/q_ref.
    pub fn xi_0(&self) -> T {
        self.q_0 / self.q_ref
    }

    /// Checks the algebraic identities a solved scenario must satisfy, to
    /// relative 1e-12.
    pub fn validate(&self) -> Result<(), ModelError> {
        let tol = T::of(1e-12);
        let scale = self.a_ref * self.q_ref;
        let id1 = (self.a_ref * self.q_0 - self.c_ref * self.q_ref).abs();
        if id1 > tol * scale {
            return Err(ModelError::Ordering {
                relation: format!("a_ref*q_0 = c_ref*q_ref (defect {})", id1.as_f64()),
            });
        }
        let id2 = ((self.froude_ref + T::one()) * self.q_0 - self.q_ref).abs();
        if id2 > tol * self.q_ref {
            return Err(ModelError::Ordering {
                relation: format!("froude_ref + 1 = q_ref/q_0 (defect {})", id2.as_f64()),
            });
        }
        let fe = self.east_line.flux_at(self.q_p);
        let fw = self.west_line.flux_at(self.q_p);
        if (fe - fw).abs() > tol * scale {
            return Err(ModelError::Ordering {
                relation: format!("lines must meet at q_p (defect {})", (fe - fw).as_f64()),
            });
        }
        Ok(())
    }
}

/// Solve the scenario from the three depths.
///
/// The West wave velocity follows from requiring the West line to pass
/// through `(q_0, 0)` while its slope equals `m_ref/q_ref + c_ref`, which
/// closes to `a_ref = c_ref·q_ref/q_0`. The junction depth is the
/// intersection of the two lines and must land strictly between `q_0` and
/// `q_ref`.
pub fn build_configuration<T: Real>(
    q_star: T,
    q_0: T,
    q_ref: T,
    consts: &PhysicalConstants<T>,
) -> Result<WaveConfig<T>, ModelError> {
    consts.validate()?;
    if !(q_star > T::zero()) {
        return Err(ModelError::NonPositive { name: "q_star", value: q_star.as_f64() });
    }
    if !(q_star < q_0) {
        return Err(ModelError::Ordering {
            relation: format!("q_star < q_0 (got {} >= {})", q_star.as_f64(), q_0.as_f64()),
        });
    }
    if !(q_0 < q_ref) {
        return Err(ModelError::Ordering {
            relation: format!("q_0 < q_ref (got {} >= {})", q_0.as_f64(), q_ref.as_f64()),
        });
    }
    let g = consts.g;
    let c_star = celerity(q_star, g)?;
    let c_ref = celerity(q_ref, g)?;
    let a_ref = c_ref * q_ref / q_0;
    let m_ref = c_ref * q_ref * (q_ref - q_0) / q_0;
    let froude_ref = (q_ref - q_0) / q_0;
    let east_line = WaveLine::through(c_star, OceanState::new(q_star, T::zero()));
    let west_line = WaveLine::through(a_ref, OceanState::new(q_0, T::zero()));
    let q_p = west_line.intersection_depth(&east_line);
    if !(q_0 < q_p) {
        return Err(ModelError::Ordering {
            relation: format!("q_0 < q_P (got q_P = {})", q_p.as_f64()),
        });
    }
    if !(q_p < q_ref) {
        return Err(ModelError::Ordering {
            relation: format!(
                "q_P < q_ref (got q_P = {} >= q_ref = {}): q_ref too small",
                q_p.as_f64(),
                q_ref.as_f64()
            ),
        });
    }
    Ok(WaveConfig {
        q_star,
        q_0,
        q_ref,
        q_p,
        c_star,
        c_ref,
        a_ref,
        m_ref,
        froude_ref,
        k: consts.k,
        g,
        east_line,
        west_line,
    })
}

/// The maximal admissible `q_ref` for given still depths: the unique root
/// above `q_0` of
///
/// ```text
/// h(q_ref) = u_ref - (q_ref - q_star) sqrt(g (q_ref + q_star) / (2 q_ref q_star))
/// ```
///
/// with `u_ref = c_ref (q_ref - q_0)/q_0`, i.e. the depth at which the jump
/// relation between `(q_ref, q_star)` holds exactly. Located by bracketed
/// bisection to 1e-6 m after geometric expansion of the upper end.
pub fn solve_max_qref<T: Real>(
    q_star: T,
    q_0: T,
    consts: &PhysicalConstants<T>,
) -> Result<T, ModelError> {
    consts.validate()?;
    if !(q_star > T::zero()) {
        return Err(ModelError::NonPositive { name: "q_star", value: q_star.as_f64() });
    }
    if q_0 == q_star {
        // the jump relation factors to q_ref = q_0
        return Ok(q_star);
    }
    if q_0 < q_star {
        return Err(ModelError::Ordering {
            relation: format!("q_star <= q_0 (got {} > {})", q_star.as_f64(), q_0.as_f64()),
        });
    }
    let g = consts.g;
    let two = T::of(2.0);
    let h = |q_ref: T| {
        let c_ref = (g * q_ref).sqrt();
        let u_ref = c_ref * (q_ref - q_0) / q_0;
        u_ref - (q_ref - q_star) * (g * (q_ref + q_star) / (two * q_ref * q_star)).sqrt()
    };
    let limit = T::of(10.0) * q_0;
    let (lo, hi) = expand_upper(h, q_0, q_0 - q_star, limit)
        .map_err(|source| ModelError::NoMaxQref { limit: limit.as_f64(), source })?;
    let opts = Bisection { x_tol: T::of(1e-6), f_tol: T::zero(), max_iter: 200 };
    let root = bisect(h, lo, hi, &opts)
        .map_err(|source| ModelError::NoMaxQref { limit: limit.as_f64(), source })?;
    Ok(root.x)
}
