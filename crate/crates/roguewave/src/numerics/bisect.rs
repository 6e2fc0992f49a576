//! Bracketed bisection on a sign change.

use crate::scalar::Real;
use thiserror::Error;

/// Bisection failure modes.
#[derive(Debug, Error)]
pub enum BisectError {
    #[error("no sign change on bracket: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("empty bracket: lo = {lo}, hi = {hi}")]
    EmptyBracket { lo: f64, hi: f64 },
    #[error("no sign change while expanding bracket up to {limit}")]
    ExpansionExhausted { limit: f64 },
}

/// Termination controls. The solver stops as soon as either the bracket
/// width drops below `x_tol` or |f| drops below `f_tol`; after `max_iter`
/// halvings it returns the midpoint unconditionally (the bracket is then
/// `2^-max_iter` of its original width).
#[derive(Debug, Clone, Copy)]
pub struct Bisection<T> {
    pub x_tol: T,
    pub f_tol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for Bisection<T> {
    fn default() -> Self {
        Self { x_tol: T::zero(), f_tol: T::zero(), max_iter: 200 }
    }
}

/// A converged root.
#[derive(Debug, Clone, Copy)]
pub struct Root<T> {
    pub x: T,
    pub f_x: T,
    pub iterations: usize,
}

/// Bisect `f` on `[lo, hi]`. `f(lo)` and `f(hi)` must differ in sign unless
/// one of them already meets `f_tol`.
pub fn bisect<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    mut lo: T,
    mut hi: T,
    opts: &Bisection<T>,
) -> Result<Root<T>, BisectError> {
    if !(lo <= hi) {
        return Err(BisectError::EmptyBracket { lo: lo.as_f64(), hi: hi.as_f64() });
    }
    let mut f_lo = f(lo);
    if f_lo.abs() <= opts.f_tol {
        return Ok(Root { x: lo, f_x: f_lo, iterations: 0 });
    }
    let f_hi = f(hi);
    if f_hi.abs() <= opts.f_tol {
        return Ok(Root { x: hi, f_x: f_hi, iterations: 0 });
    }
    if (f_lo > T::zero()) == (f_hi > T::zero()) {
        return Err(BisectError::NoSignChange {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
            f_lo: f_lo.as_f64(),
            f_hi: f_hi.as_f64(),
        });
    }
    let half = T::of(0.5);
    let mut mid = half * (lo + hi);
    let mut f_mid = f(mid);
    for i in 0..opts.max_iter {
        if f_mid.abs() <= opts.f_tol || (hi - lo).abs() <= opts.x_tol {
            return Ok(Root { x: mid, f_x: f_mid, iterations: i });
        }
        if (f_mid > T::zero()) == (f_lo > T::zero()) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        let next = half * (lo + hi);
        if next == mid || next <= lo || next >= hi {
            // bracket collapsed to adjacent floats
            return Ok(Root { x: next, f_x: f_mid, iterations: i });
        }
        mid = next;
        f_mid = f(mid);
    }
    Ok(Root { x: mid, f_x: f_mid, iterations: opts.max_iter })
}

/// Grow the upper bracket end geometrically from `lo + step0` until the sign
/// of `f` flips relative to `f(lo)`, never past `limit`. Returns the bracket.
pub fn expand_upper<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    lo: T,
    step0: T,
    limit: T,
) -> Result<(T, T), BisectError> {
    let f_lo = f(lo);
    let mut step = step0;
    loop {
        let hi = lo + step;
        if hi > limit {
            return Err(BisectError::ExpansionExhausted { limit: limit.as_f64() });
        }
        let f_hi = f(hi);
        if f_hi == T::zero() || (f_hi > T::zero()) != (f_lo > T::zero()) {
            return Ok((lo, hi));
        }
        step = step + step;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let opts = Bisection { x_tol: 1e-14, f_tol: 0.0, max_iter: 200 };
        let r = bisect(|x: f64| x * x - 2.0, 0.0, 2.0, &opts).unwrap();
        assert!((r.x - 2.0_f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn endpoint_roots() {
        let opts = Bisection { x_tol: 0.0, f_tol: 1e-12, max_iter: 50 };
        let r = bisect(|x: f64| x, 0.0, 1.0, &opts).unwrap();
        assert_eq!(r.x, 0.0);
    }

    #[test]
    fn rejects_same_sign() {
        let opts = Bisection::default();
        assert!(matches!(
            bisect(|x: f64| x * x + 1.0, -1.0, 1.0, &opts),
            Err(BisectError::NoSignChange { .. })
        ));
    }

    #[test]
    fn expansion_finds_bracket() {
        let (lo, hi) = expand_upper(|x: f64| x - 10.0, 0.0, 0.5, 1e3).unwrap();
        assert!(lo < 10.0 && hi > 10.0);
    }

    #[test]
    fn expansion_respects_limit() {
        assert!(matches!(
            expand_upper(|x: f64| x - 1e9, 0.0, 1.0, 100.0),
            Err(BisectError::ExpansionExhausted { .. })
        ));
    }
}
