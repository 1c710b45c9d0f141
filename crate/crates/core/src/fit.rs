//! Least-squares line fitting used by the rate and growth diagnostics.

use crate::error::{Error, Result};
use crate::Real;

#[derive(Clone, Copy, Debug)]
pub struct LinearFit<T> {
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
}

/// Ordinary least squares through `(xs, ys)`; needs at least two distinct
/// abscissae. A zero-variance response is reported as a perfect fit.
pub fn linear_fit<T: Real>(xs: &[T], ys: &[T]) -> Result<LinearFit<T>> {
    if xs.len() != ys.len() {
        return Err(Error::Config("fit inputs must have equal length".into()));
    }
    if xs.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: xs.len(),
        });
    }
    let n = T::from_usize(xs.len()).unwrap();
    let mean_x = xs.iter().copied().sum::<T>() / n;
    let mean_y = ys.iter().copied().sum::<T>() / n;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    let mut syy = T::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == T::zero() {
        return Err(Error::Config("fit abscissae are all identical".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == T::zero() {
        T::one()
    } else {
        let ss_res = syy - slope * sxy;
        (T::one() - ss_res / syy).max(T::zero()).min(T::one())
    };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}
