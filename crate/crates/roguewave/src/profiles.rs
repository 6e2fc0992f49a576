//! Inverse profiles of the two traveling branches.
//!
//! Each branch is described by its inverse profile ψ(q): the signed distance
//! from the branch anchor (where q = q_p) to the point of depth q, at t = 0.
//! The traveling-wave reduction of the momentum balance gives
//!
//! ```text
//! dψ/dq = (b² - g q³) / (k (a q - b) |a q - b|)
//! ```
//!
//! along a line m = a q - b, which integrates in closed form for both
//! branches. ψ_E decreases from +∞ (at q → q_star) to 0 at q_p; ψ_W
//! increases from -∞ (at q → q_0) through 0 at q_p up to a finite positive
//! value at q_ref. The depth field at time t follows by inverting
//! ψ(q) = x - speed·t on the monotone branch.

use crate::model::WaveConfig;
use crate::numerics::bisect::{bisect, Bisection};
use crate::numerics::quad::{integrate, QuadError};
use crate::scalar::Real;
use thiserror::Error;

/// Which branch of the initial profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchSide {
    West,
    East,
}

impl core::fmt::Display for BranchSide {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            BranchSide::West => write!(f, "west"),
            BranchSide::East => write!(f, "east"),
        }
    }
}

/// Errors from profile evaluation and inversion.
#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("{side} profile: depth {q} outside ({lo}, {hi}]")]
    OutOfDomain { side: BranchSide, q: f64, lo: f64, hi: f64 },
    #[error("{side} profile: position {x} outside the branch image")]
    OutOfImage { side: BranchSide, x: f64 },
    #[error("{side} profile: slope singular at the {q} tail")]
    Singularity { side: BranchSide, q: f64 },
    #[error("quadrature oracle failed: {0}")]
    Oracle(#[from] QuadError),
}

/// One monotone branch of the profile, with its depth bounds and translation
/// speed.
#[derive(Debug, Clone, Copy)]
pub struct ProfileBranch<T> {
    pub side: BranchSide,
    pub line: crate::model::WaveLine<T>,
    /// Lower depth bound (exclusive): q_star (East) or q_0 (West).
    pub q_min: T,
    /// Upper depth bound (inclusive): q_p (East) or q_ref (West).
    pub q_max: T,
    /// Depth at which ψ = 0; the junction depth q_p.
    pub q_anchor: T,
    /// Translation speed of the branch: c_star (East) or a_ref (West).
    pub speed: T,
}

impl<T: Real> WaveConfig<T> {
    /// The West branch, covering depths (q_0, q_ref].
    pub fn west_branch(&self) -> ProfileBranch<T> {
        ProfileBranch {
            side: BranchSide::West,
            line: self.west_line,
            q_min: self.q_0,
            q_max: self.q_ref,
            q_anchor: self.q_p,
            speed: self.a_ref,
        }
    }

    /// The East branch, covering depths (q_star, q_p].
    pub fn east_branch(&self) -> ProfileBranch<T> {
        ProfileBranch {
            side: BranchSide::East,
            line: self.east_line,
            q_min: self.q_star,
            q_max: self.q_p,
            q_anchor: self.q_p,
            speed: self.c_star,
        }
    }
}

fn check_domain<T: Real>(q: T, branch: &ProfileBranch<T>) -> Result<(), ProfileError> {
    if q <= branch.q_min || q > branch.q_max {
        return Err(ProfileError::OutOfDomain {
            side: branch.side,
            q: q.as_f64(),
            lo: branch.q_min.as_f64(),
            hi: branch.q_max.as_f64(),
        });
    }
    Ok(())
}

/// Slope dψ/dq of the inverse profile at depth `q`.
///
/// Negative on the East branch, positive on the West branch, zero at
/// q = q_ref where the numerator g(q_ref³ - q³) vanishes.
pub fn psi_prime<T: Real>(
    q: T,
    branch: &ProfileBranch<T>,
    config: &WaveConfig<T>,
) -> Result<T, ProfileError> {
    if q <= branch.q_min {
        return Err(ProfileError::Singularity { side: branch.side, q: q.as_f64() });
    }
    check_domain(q, branch)?;
    let s = branch.line.flux_at(q);
    let b = branch.line.b;
    Ok((b * b - config.g * q * q * q) / (config.k * s * s.abs()))
}

/// East inverse profile, anchored at ψ_E(q_p) = 0:
///
/// ```text
/// ψ_E(q) = (3 q_star / k) ln((q_p - q_star)/(q - q_star))
///        + (2/k)(q_p - q) + (q_p² - q²)/(2 k q_star)
/// ```
pub fn psi_east<T: Real>(q: T, config: &WaveConfig<T>) -> Result<T, ProfileError> {
    check_domain(q, &config.east_branch())?;
    let (qs, qp, k) = (config.q_star, config.q_p, config.k);
    let three = T::of(3.0);
    let two = T::of(2.0);
    Ok(three * qs / k * ((qp - qs) / (q - qs)).ln()
        + two / k * (qp - q)
        + (qp * qp - q * q) / (two * k * qs))
}

/// West inverse profile, anchored at ψ_W(q_p) = 0:
///
/// ```text
/// ψ_W(q) = K [ (q_p² - q²)/(2 q_ref) + (2 q_0/q_ref)(q_p - q)
///            - (3 q_0²/q_ref) ln((q - q_0)/(q_p - q_0))
///            + (q_ref³ - q_0³)(q - q_p) / (q_ref (q - q_0)(q_p - q_0)) ]
/// ```
///
/// with K = 1/(k (F_ref + 1)²). The 1/(q - q_0) term dominates the tail, so
/// ψ_W → -∞ as q → q_0.
pub fn psi_west<T: Real>(q: T, config: &WaveConfig<T>) -> Result<T, ProfileError> {
    check_domain(q, &config.west_branch())?;
    let (q0, qp, qr, k) = (config.q_0, config.q_p, config.q_ref, config.k);
    let two = T::of(2.0);
    let three = T::of(3.0);
    let fp1 = config.froude_ref + T::one();
    let kk = T::one() / (k * fp1 * fp1);
    Ok(kk
        * ((qp * qp - q * q) / (two * qr)
            + two * q0 / qr * (qp - q)
            - three * q0 * q0 / qr * ((q - q0) / (qp - q0)).ln()
            + (qr * qr * qr - q0 * q0 * q0) * (q - qp) / (qr * (q - q0) * (qp - q0))))
}

/// ψ on either branch.
pub fn psi<T: Real>(
    q: T,
    branch: &ProfileBranch<T>,
    config: &WaveConfig<T>,
) -> Result<T, ProfileError> {
    match branch.side {
        BranchSide::West => psi_west(q, config),
        BranchSide::East => psi_east(q, config),
    }
}

/// Numeric cross-check of the closed forms: adaptive integration of
/// [`psi_prime`] from the anchor to `q`, to 1e-9·|result| + 1e-9.
pub fn quadrature_oracle<T: Real>(
    q: T,
    branch: &ProfileBranch<T>,
    config: &WaveConfig<T>,
) -> Result<T, ProfileError> {
    check_domain(q, branch)?;
    let tol = T::of(1e-9);
    let quad = integrate(
        |s| psi_prime(s, branch, config).unwrap_or_else(|_| T::nan()),
        branch.q_anchor,
        q,
        tol,
        tol,
    )?;
    Ok(quad.value)
}

// Offset from the singular end at which inversion brackets start; also the
// depth returned by the tail clamp.
const TAIL_EPS: f64 = 1e-12;

/// Invert ψ(q) = x_shifted on the monotone branch.
///
/// Converges to |ψ(q) - x_shifted| ≤ 1e-9·max(1, |x_shifted|) under a fixed
/// 200-iteration cap. Positions beyond the East tail's representable range
/// clamp to within 1e-12 m of q_star instead of failing; the West tail
/// mirrors this (its image is unbounded below, so no finite position is
/// outside it).
pub fn invert_profile<T: Real>(
    x_shifted: T,
    branch: &ProfileBranch<T>,
    config: &WaveConfig<T>,
) -> Result<T, ProfileError> {
    // the tail offset must stay representable at the scalar's precision
    let tail = T::of(TAIL_EPS).max(T::epsilon() * branch.q_min);
    let lo = branch.q_min + tail;
    let hi = branch.q_max;
    let psi_at = |q: T| psi(q, branch, config);
    match branch.side {
        BranchSide::East => {
            if x_shifted < T::zero() {
                return Err(ProfileError::OutOfImage {
                    side: branch.side,
                    x: x_shifted.as_f64(),
                });
            }
            if psi_at(lo)? < x_shifted {
                return Ok(lo); // deep tail: q_star to machine tolerance
            }
        }
        BranchSide::West => {
            let top = psi_at(hi)?;
            if x_shifted > top {
                return Err(ProfileError::OutOfImage {
                    side: branch.side,
                    x: x_shifted.as_f64(),
                });
            }
            if psi_at(lo)? > x_shifted {
                return Ok(lo);
            }
        }
    }
    // Converging the depth interval to 1e-13 m keeps the round trip tight
    // even where the branch flattens (ψ_W' -> 0 at q_ref) and beats the
    // 1e-9·max(1, |x|) residual contract everywhere else.
    let opts = Bisection { x_tol: T::of(1e-13), f_tol: T::zero(), max_iter: 200 };
    let root = bisect(|q| psi_at(q).unwrap_or_else(|_| T::nan()) - x_shifted, lo, hi, &opts)
        .map_err(|_| ProfileError::OutOfImage { side: branch.side, x: x_shifted.as_f64() })?;
    Ok(root.x)
}

/// Depth of the branch at position `x` and time `t`: the branch translates
/// rigidly at its own speed, so this inverts ψ(q) = x - speed·t.
pub fn profile_depth<T: Real>(
    x: T,
    t: T,
    branch: &ProfileBranch<T>,
    config: &WaveConfig<T>,
) -> Result<T, ProfileError> {
    invert_profile(x - branch.speed * t, branch, config)
}

/// Horizontal distance over which the branch decays to within 1% of its
/// far-field depth. Used as the achieved wavelength in the admissibility
/// check.
pub fn profile_extent<T: Real>(
    branch: &ProfileBranch<T>,
    config: &WaveConfig<T>,
) -> Result<T, ProfileError> {
    let frac = T::of(0.01);
    let q = branch.q_min + frac * (config.q_p - branch.q_min);
    Ok(psi(q, branch, config)?.abs())
}
