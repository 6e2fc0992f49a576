//! Globally adaptive Gauss–Kronrod quadrature (7–15 pair).
//!
//! The interval with the largest error estimate is split until the summed
//! estimate meets `max(abs_tol, rel_tol * |integral|)`.

use crate::scalar::Real;
use thiserror::Error;

/// Quadrature failure modes.
#[derive(Debug, Error)]
pub enum QuadError {
    #[error("adaptive refinement did not converge: error {error:e} > tolerance {tol:e}")]
    NonConvergence { error: f64, tol: f64 },
    #[error("non-finite integrand value at x = {x}")]
    NonFinite { x: f64 },
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature<T> {
    pub value: T,
    pub error_estimate: T,
    pub subdivisions: usize,
}

// Kronrod-15 abscissae on [0, 1] side of [-1, 1] (descending) and weights;
// the embedded Gauss-7 rule uses the odd-index nodes. Published values,
// kept at full printed precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

const MAX_SEGMENTS: usize = 4096;

struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn gk15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Result<(T, T), QuadError> {
    let half = T::of(0.5);
    let c = half * (a + b);
    let h = half * (b - a);
    let fc = f(c);
    if !fc.is_finite() {
        return Err(QuadError::NonFinite { x: c.as_f64() });
    }
    let mut kronrod = T::of(WGK[7]) * fc;
    let mut gauss = T::of(WG[3]) * fc;
    for i in 0..7 {
        let x = T::of(XGK[i]) * h;
        let f1 = f(c - x);
        let f2 = f(c + x);
        if !f1.is_finite() || !f2.is_finite() {
            let bad = if f1.is_finite() { c + x } else { c - x };
            return Err(QuadError::NonFinite { x: bad.as_f64() });
        }
        let sum = f1 + f2;
        kronrod = kronrod + T::of(WGK[i]) * sum;
        if i % 2 == 1 {
            gauss = gauss + T::of(WG[i / 2]) * sum;
        }
    }
    let value = kronrod * h;
    let error = ((kronrod - gauss) * h).abs();
    Ok((value, error))
}

/// Integrate `f` over `[a, b]` to `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
) -> Result<Quadrature<T>, QuadError> {
    if a == b {
        return Ok(Quadrature { value: T::zero(), error_estimate: T::zero(), subdivisions: 0 });
    }
    let (lo, hi, sign) = if a < b { (a, b, T::one()) } else { (b, a, -T::one()) };
    let (v, e) = gk15(&f, lo, hi)?;
    let mut segments = vec![Segment { a: lo, b: hi, value: v, error: e }];
    loop {
        let mut total = T::zero();
        let mut err = T::zero();
        for s in &segments {
            total = total + s.value;
            err = err + s.error;
        }
        let tol = abs_tol.max(rel_tol * total.abs());
        if err <= tol {
            return Ok(Quadrature {
                value: sign * total,
                error_estimate: err,
                subdivisions: segments.len() - 1,
            });
        }
        if segments.len() >= MAX_SEGMENTS {
            return Err(QuadError::NonConvergence { error: err.as_f64(), tol: tol.as_f64() });
        }
        let mut worst = 0;
        for (i, s) in segments.iter().enumerate() {
            if s.error > segments[worst].error {
                worst = i;
            }
        }
        let Segment { a: sa, b: sb, .. } = segments[worst];
        let mid = T::of(0.5) * (sa + sb);
        if mid <= sa || mid >= sb {
            return Err(QuadError::NonConvergence { error: err.as_f64(), tol: tol.as_f64() });
        }
        let (v1, e1) = gk15(&f, sa, mid)?;
        let (v2, e2) = gk15(&f, mid, sb)?;
        segments[worst] = Segment { a: sa, b: mid, value: v1, error: e1 };
        segments.push(Segment { a: mid, b: sb, value: v2, error: e2 });
    }
}
