//! Safeguarded Newton iteration on a sign-changing bracket.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Iteration cap shared by every inversion in the crate.
pub const MAX_ITERATIONS: usize = 100;

/// Find a root of `f` in `[lo, hi]`, where `f` returns `(value, derivative)`.
///
/// A Newton step is taken whenever it stays inside the current bracket and
/// shrinks fast enough, otherwise the bracket is bisected. The bracket is
/// updated from the sign of every evaluation, so the iterate never leaves it.
/// Terminates when a step is below `atol + rtol·|x|`.
pub fn newton_bisect<T, F>(f: F, lo: T, hi: T, guess: T, atol: T, rtol: T) -> Result<T>
where
    T: Real,
    F: Fn(T) -> (T, T),
{
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let (f_lo, _) = f(lo);
    let (f_hi, _) = f(hi);
    if f_lo == T::zero() {
        return Ok(lo);
    }
    if f_hi == T::zero() {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSolution {
            what: "bracketed root",
            detail: format!("no sign change on [{lo}, {hi}]: f = ({f_lo}, {f_hi})"),
        });
    }
    // Orient so that f(lo) < 0.
    let flip = f_lo > T::zero();
    let eval = |x: T| {
        let (v, d) = f(x);
        if flip {
            (-v, -d)
        } else {
            (v, d)
        }
    };

    let two = T::lit(2.0);
    let mut x = if guess > lo && guess < hi {
        guess
    } else {
        (lo + hi) / two
    };
    let mut step_old = hi - lo;
    let mut step = step_old;
    let (mut fx, mut dfx) = eval(x);

    for _ in 0..MAX_ITERATIONS {
        if fx == T::zero() {
            return Ok(x);
        }
        let newton_leaves = ((x - hi) * dfx - fx) * ((x - lo) * dfx - fx) > T::zero();
        let newton_slow = (two * fx).abs() > (step_old * dfx).abs();
        step_old = step;
        if dfx == T::zero() || newton_leaves || newton_slow {
            step = (hi - lo) / two;
            x = lo + step;
        } else {
            step = fx / dfx;
            x = x - step;
        }
        if step.abs() <= atol + rtol * x.abs() {
            return Ok(x);
        }
        let (v, d) = eval(x);
        fx = v;
        dfx = d;
        if fx < T::zero() {
            lo = x;
        } else {
            hi = x;
        }
    }
    Err(Error::NotConverged {
        iterations: MAX_ITERATIONS,
        lo: lo.as_f64(),
        hi: hi.as_f64(),
    })
}

/// Relative tolerance used by the crate's inversions.
#[inline]
pub(crate) fn default_rtol<T: Real>() -> T {
    T::epsilon() * T::lit(64.0)
}

/// Invert `u ↦ u·exp(-u²/4)` on its monotonic branch `[0, √2]`.
///
/// Both the momentum transform and the per-mode frequency solve reduce to
/// this map in dimensionless form.
pub(crate) fn invert_gaussian_ramp<T: Real>(v: T) -> Result<T> {
    let sup = crate::scalar::gaussian_ramp_supremum::<T>();
    if v == T::zero() {
        return Ok(T::zero());
    }
    let quarter = T::lit(0.25);
    let half = T::lit(0.5);
    let f = |u: T| {
        let g = (-quarter * u * u).exp();
        (u * g - v, g * (T::one() - half * u * u))
    };
    if v >= sup {
        return Ok(T::SQRT_2());
    }
    newton_bisect(f, T::zero(), T::SQRT_2(), v, T::zero(), default_rtol())
}
