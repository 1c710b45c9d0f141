//! Ensemble diagnostic for the dispersive space-time bound of the
//! regularized flow: for admissible exponents `3/q + 1/r = 1/2` the
//! high-frequency part (above `1/(5 eps)`) of the linear evolution obeys
//! `|| S_eps(t) P_high u0 ||_{L^q_t L^r_x} <~ eps^(4/q) || |d/dx|^(4/q) u0 ||_{L^2}`
//! with a constant uniform in eps.
//!
//! The time norm here is truncated to a fixed window, which only lowers the
//! left side: boundedness of the truncated ratio, uniformly as eps shrinks,
//! is the necessary-condition check this diagnostic provides. It is not a
//! sharp-constant computation.

use num_complex::Complex;
use rayon::prelude::*;

use crate::data::InitialData;
use crate::error::{Error, Result};
use crate::spectral::{lp_project, lp_tx_norm, ProjectionMode, SpatialGrid};
use crate::symbols::DispersionModel;
use crate::Real;

/// One ensemble's worth of settings for the mixed-norm ratio.
#[derive(Clone, Debug)]
pub struct StrichartzConfig<T: Real> {
    pub eps: T,
    pub q: T,
    pub r: T,
    pub ensemble: usize,
    pub seed: u64,
    /// Half-width of the time window `[-window, window]`.
    pub window: T,
    pub time_samples: usize,
    pub data: InitialData<T>,
}

impl<T: Real> StrichartzConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let half = T::from_f64_c(0.5);
        let three = T::from_f64_c(3.0);
        if !self.q.is_finite() || !(self.q > T::from_f64_c(6.0)) {
            return Err(Error::Config(format!(
                "time exponent q = {} must be finite and exceed 6",
                self.q
            )));
        }
        if !(self.r >= T::from_f64_c(2.0)) || !self.r.is_finite() {
            return Err(Error::Config(format!(
                "space exponent r = {} must be finite and at least 2",
                self.r
            )));
        }
        let defect = (three / self.q + self.r.recip() - half).abs();
        if defect > T::from_f64_c(1e-9) {
            return Err(Error::Config(format!(
                "(q, r) = ({}, {}) is not admissible: 3/q + 1/r must equal 1/2",
                self.q, self.r
            )));
        }
        if !(self.eps > T::zero() && self.eps <= T::one()) {
            return Err(Error::Config(format!(
                "eps = {} outside (0, 1]",
                self.eps
            )));
        }
        if self.ensemble == 0 {
            return Err(Error::Config("ensemble must be nonempty".into()));
        }
        if self.time_samples < 2 {
            return Err(Error::Config("need at least two time samples".into()));
        }
        if !(self.window > T::zero()) {
            return Err(Error::Config("time window must be positive".into()));
        }
        Ok(())
    }
}

/// Ratio for a single draw: truncated mixed norm of the high-pass linear
/// evolution over the derivative-weighted data size. Zero data gives 0.
fn member_ratio<T: Real>(
    grid: &SpatialGrid<T>,
    cfg: &StrichartzConfig<T>,
    member: usize,
) -> Result<T> {
    let model = DispersionModel::bbm(cfg.eps)?;
    let u0 = cfg
        .data
        .realize(grid, cfg.seed.wrapping_add(member as u64))?;

    let four_over_q = T::from_f64_c(4.0) / cfg.q;
    let n = T::from_usize(grid.n()).unwrap();
    let weight = grid.length() / (n * n);
    let denom_sq = grid
        .frequencies()
        .iter()
        .zip(u0.spectral())
        .map(|(&xi, c)| xi.abs().powf(T::from_f64_c(2.0) * four_over_q) * c.norm_sqr())
        .sum::<T>()
        * weight;
    let denom = cfg.eps.powf(four_over_q) * denom_sq.sqrt();
    if denom == T::zero() {
        return Ok(T::zero());
    }

    let threshold = (T::from_f64_c(5.0) * cfg.eps).recip();
    let high = lp_project(&u0, threshold, ProjectionMode::HighPassSharp)?;

    let steps = cfg.time_samples - 1;
    let dt = (T::from_f64_c(2.0) * cfg.window) / T::from_usize(steps).unwrap();
    let mut trace = Vec::with_capacity(cfg.time_samples);
    for j in 0..cfg.time_samples {
        let t = -cfg.window + dt * T::from_usize(j).unwrap();
        let flowed = high
            .apply_multiplier(|xi| Complex::from_polar(T::one(), t * model.symbol(xi)))
            .expect("unimodular phases are finite");
        trace.push((t, flowed));
    }
    let numer = lp_tx_norm(&trace, cfg.q, cfg.r)?;
    Ok(numer / denom)
}

/// Seeded ensemble of mixed-norm ratios, one per member, reduced in member
/// order so the output is independent of scheduling.
pub fn strichartz_ratios<T: Real>(
    grid: &SpatialGrid<T>,
    cfg: &StrichartzConfig<T>,
) -> Result<Vec<T>> {
    cfg.validate()?;
    (0..cfg.ensemble)
        .into_par_iter()
        .map(|m| member_ratio(grid, cfg, m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(eps: f64) -> StrichartzConfig<f64> {
        StrichartzConfig {
            eps,
            q: 18.0,
            r: 3.0,
            ensemble: 4,
            seed: 11,
            window: 1.0,
            time_samples: 51,
            data: InitialData::RandomSobolev {
                s: 1.0,
                k_min: 1,
                k_max: 60,
                amplitude: 1.0,
            },
        }
    }

    fn grid() -> SpatialGrid<f64> {
        SpatialGrid::<f64>::new(256, 16.0 * std::f64::consts::PI).unwrap()
    }

    #[test]
    fn inadmissible_pairs_are_rejected() {
        let g = grid();
        let mut cfg = config(0.1);
        cfg.r = 4.0;
        assert!(strichartz_ratios(&g, &cfg).is_err());
        let mut cfg = config(0.1);
        cfg.q = 5.0;
        cfg.r = 2.0; // 3/5 + 1/2 != 1/2 and q <= 6
        assert!(strichartz_ratios(&g, &cfg).is_err());
        // (8, 8) is admissible: 3/8 + 1/8 = 1/2.
        let mut cfg = config(0.1);
        cfg.q = 8.0;
        cfg.r = 8.0;
        assert!(strichartz_ratios(&g, &cfg).is_ok());
    }

    #[test]
    fn zero_data_yields_zero_ratio() {
        let g = grid();
        let mut cfg = config(0.1);
        cfg.data = InitialData::SechSquared {
            amplitude: 0.0,
            width: 1.0,
            center: 0.0,
        };
        let ratios = strichartz_ratios(&g, &cfg).unwrap();
        assert!(ratios.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn ratio_is_amplitude_invariant() {
        let g = grid();
        let cfg = config(0.1);
        let base = strichartz_ratios(&g, &cfg).unwrap();
        let mut scaled_cfg = cfg.clone();
        scaled_cfg.data = InitialData::RandomSobolev {
            s: 1.0,
            k_min: 1,
            k_max: 60,
            amplitude: 32.0,
        };
        let scaled = strichartz_ratios(&g, &scaled_cfg).unwrap();
        for (a, b) in base.iter().zip(&scaled) {
            assert!((a - b).abs() <= 1e-12 * a.max(1e-30), "{a} vs {b}");
        }
    }

    #[test]
    fn ratios_are_reproducible_and_finite() {
        let g = grid();
        let cfg = config(0.2);
        let a = strichartz_ratios(&g, &cfg).unwrap();
        let b = strichartz_ratios(&g, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|r| r.is_finite() && *r > 0.0));
    }
}
