use crate::error::{Error, Result};
use crate::Real;

use super::Field;

/// Discrete mixed space-time norm
/// `( integral ( integral |f|^p dx )^(q/p) dt )^(1/q)`
/// over a snapshot trace, trapezoidal in time and in space.
///
/// Requires finite exponents `q, p >= 1`, strictly increasing times and a
/// shared grid. A single snapshot spans zero duration and yields 0.
pub fn lp_tx_norm<T: Real>(trace: &[(T, Field<T>)], q: T, p: T) -> Result<T> {
    if trace.is_empty() {
        return Err(Error::EmptyInput("mixed-norm trace"));
    }
    if !(q >= T::one()) || !q.is_finite() || !(p >= T::one()) || !p.is_finite() {
        return Err(Error::Config(
            "mixed-norm exponents must be finite and >= 1".into(),
        ));
    }
    let grid = trace[0].1.grid();
    let w = grid.length() / T::from_usize(grid.n()).unwrap();
    let mut spatial = Vec::with_capacity(trace.len());
    for (i, (t, f)) in trace.iter().enumerate() {
        if f.grid() != grid {
            return Err(Error::GridMismatch);
        }
        if i > 0 && !(*t > trace[i - 1].0) {
            return Err(Error::Config(
                "mixed-norm trace times must be strictly increasing".into(),
            ));
        }
        let lx = (f.physical().iter().map(|&v| v.abs().powf(p)).sum::<T>() * w)
            .powf(p.recip());
        spatial.push(lx);
    }
    let half = T::from_f64_c(0.5);
    let mut acc = T::zero();
    for i in 1..trace.len() {
        let dt = trace[i].0 - trace[i - 1].0;
        acc += half * dt * (spatial[i].powf(q) + spatial[i - 1].powf(q));
    }
    Ok(acc.powf(q.recip()))
}
