use num_complex::Complex;

use crate::error::{Error, Result};
use crate::Real;

use super::{Field, SpatialGrid};

/// `exp(-1/x)` for `x > 0`, zero otherwise: the classic smooth bump seed.
fn bump_seed<T: Real>(x: T) -> T {
    if x > T::zero() {
        (-x.recip()).exp()
    } else {
        T::zero()
    }
}

/// Smooth step: 0 for `x <= 0`, 1 for `x >= 1`, strictly monotone between.
fn smooth_step<T: Real>(x: T) -> T {
    let a = bump_seed(x);
    let b = bump_seed(T::one() - x);
    if a == T::zero() {
        T::zero()
    } else if b == T::zero() {
        T::one()
    } else {
        a / (a + b)
    }
}

/// Radial profile `theta`: identically 1 for `|xi| <= 9/5`, identically 0 for
/// `|xi| >= 2`, smooth and monotone in between.
fn theta<T: Real>(xi: T) -> T {
    let lo = T::from_f64_c(1.8);
    let hi = T::from_f64_c(2.0);
    T::one() - smooth_step((xi.abs() - lo) / (hi - lo))
}

/// Smooth dyadic cutoff `eta(xi) = theta(xi) - theta(2 xi)`.
///
/// Properties relied on throughout: `0 <= eta <= 1`, `eta = 1` on
/// `6/5 <= |xi| <= 9/5` (in fact on `1 <= |xi| <= 9/5`), support contained in
/// `[-2, 2] \ (-9/10, 9/10)`, and the dyadic telescoping partition
/// `sum_{N in 2^Z} eta(xi / N) = 1` for every `xi != 0`.
pub fn eta<T: Real>(xi: T) -> T {
    theta(xi) - theta(xi + xi)
}

/// Which frequency localization [`lp_project`] applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectionMode {
    /// Single dyadic shell: multiply modes by `eta(xi/N)`.
    Shell,
    /// Cumulative low-pass `sum_{M <= N} eta(xi/M)`; the mean is retained.
    LowPass,
    /// Sharp high-pass: zero every mode with `|xi| <= N`.
    HighPassSharp,
}

/// Dyadic shell values `2^j` whose cutoff support meets the resolved band of
/// `grid`. Useful for partition checks and shell sweeps.
pub fn lp_shells<T: Real>(grid: &SpatialGrid<T>) -> Vec<T> {
    let two = T::from_f64_c(2.0);
    let xi_min = T::TAU() / grid.length();
    let xi_max = grid.nyquist();
    // eta(xi/N) != 0 needs N in (|xi|/2, |xi|/(9/10)).
    let j_lo = (xi_min / two).log2().floor().to_isize().unwrap() - 1;
    let j_hi = (xi_max * two).log2().ceil().to_isize().unwrap() + 1;
    (j_lo..=j_hi).map(|j| two.powi(j as i32)).collect()
}

fn low_pass_symbol<T: Real>(xi: T, n_dyadic: T) -> T {
    if xi == T::zero() {
        // The dyadic partition only covers xi != 0; keep the mean so that a
        // low-pass far above the resolved band acts as the identity.
        return T::one();
    }
    let two = T::from_f64_c(2.0);
    let a = xi.abs();
    // Shells with eta(xi/M) != 0 satisfy M in (a/2, a/(9/10)); scan a margin.
    let j_mid = a.log2().floor().to_isize().unwrap();
    let mut sum = T::zero();
    for j in (j_mid - 2)..=(j_mid + 2) {
        let m = two.powi(j as i32);
        if m <= n_dyadic {
            sum += eta(xi / m);
        }
    }
    sum
}

/// Littlewood-Paley projection of `f` at dyadic scale (or sharp threshold)
/// `n_dyadic > 0`.
pub fn lp_project<T: Real>(
    f: &Field<T>,
    n_dyadic: T,
    mode: ProjectionMode,
) -> Result<Field<T>> {
    if !(n_dyadic > T::zero()) || !n_dyadic.is_finite() {
        return Err(Error::Config(
            "projection scale must be positive and finite".into(),
        ));
    }
    match mode {
        ProjectionMode::Shell => f.apply_multiplier(|xi| Complex::new(eta(xi / n_dyadic), T::zero())),
        ProjectionMode::LowPass => {
            f.apply_multiplier(|xi| Complex::new(low_pass_symbol(xi, n_dyadic), T::zero()))
        }
        ProjectionMode::HighPassSharp => f.apply_multiplier(|xi| {
            if xi.abs() <= n_dyadic {
                Complex::new(T::zero(), T::zero())
            } else {
                Complex::new(T::one(), T::zero())
            }
        }),
    }
}
