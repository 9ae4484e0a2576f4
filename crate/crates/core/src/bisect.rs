//! Bisection on a bracketed sign change.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Outcome of a bisection run.
#[derive(Debug, Clone, PartialEq)]
pub struct Bisection<T> {
    pub root: T,
    /// Function value at `root`.
    pub residual: T,
    /// Bracket before each halving, starting with the initial one.
    pub brackets: Vec<(T, T)>,
    pub iterations: usize,
}

/// Halves `[lo, hi]` until its width drops below `tol`, returning the midpoint.
///
/// `f(lo)` and `f(hi)` must have opposite signs (or one of them vanish).
pub fn bisect<T, F>(lo: T, hi: T, tol: T, max_iter: usize, mut f: F) -> Result<Bisection<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    if !(tol > T::zero()) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if lo > hi || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Domain(format!("invalid bracket [{lo}, {hi}]")));
    }
    let resolution = T::epsilon() * T::lit(4.0) * lo.abs().max(hi.abs()).max(T::one());
    if tol < resolution && lo != hi {
        return Err(Error::Accuracy {
            terms: 0,
            partial: format!("tolerance {tol} is below the attainable resolution {resolution}"),
        });
    }

    let f_lo = f(lo)?;
    if f_lo == T::zero() {
        return Ok(Bisection {
            root: lo,
            residual: f_lo,
            brackets: vec![(lo, hi)],
            iterations: 0,
        });
    }
    let f_hi = if lo == hi { f_lo } else { f(hi)? };
    if f_hi == T::zero() {
        return Ok(Bisection {
            root: hi,
            residual: f_hi,
            brackets: vec![(lo, hi)],
            iterations: 0,
        });
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracketing {
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
            f_lo: f_lo.to_f64().unwrap_or(f64::NAN),
            f_hi: f_hi.to_f64().unwrap_or(f64::NAN),
        });
    }

    let (mut a, mut b) = (lo, hi);
    let lo_negative = f_lo < T::zero();
    let mut brackets = vec![(a, b)];
    let mut iterations = 0;
    while b - a >= tol {
        if iterations == max_iter {
            return Err(Error::Accuracy {
                terms: iterations,
                partial: format!("[{a}, {b}]"),
            });
        }
        let mid = a + (b - a) / T::lit(2.0);
        let f_mid = f(mid)?;
        iterations += 1;
        if f_mid == T::zero() {
            brackets.push((mid, mid));
            return Ok(Bisection {
                root: mid,
                residual: f_mid,
                brackets,
                iterations,
            });
        }
        if (f_mid < T::zero()) == lo_negative {
            a = mid;
        } else {
            b = mid;
        }
        brackets.push((a, b));
    }
    let root = a + (b - a) / T::lit(2.0);
    let residual = f(root)?;
    Ok(Bisection {
        root,
        residual,
        brackets,
        iterations,
    })
}
