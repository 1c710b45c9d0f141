//! Frame-scaling maps between the rescaled solutions and the physical
//! long-wave frame.
//!
//! With `alpha = eps^2`, a rescaled-frame snapshot `w(t, y)` corresponds to
//! the physical-frame comparison field
//! `v(t_p, x) = alpha w(alpha^(3/2) t_p, alpha^(1/2) (x - t_p))`.
//! Both directions are exact on band-limited fields: the dilation is a
//! reinterpretation of the spectral coefficients on a dilated grid (the mode
//! count is unchanged and `xi_k` scales by `alpha^(1/2)`), and the moving
//! frame is a spectral phase shift. No resampling, hence no resolution loss.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::spectral::{Field, SpatialGrid};
use crate::Real;

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if !(alpha > T::zero() && alpha <= T::one()) || !alpha.is_finite() {
        return Err(Error::Config(format!(
            "scaling parameter alpha = {alpha} must lie in (0, 1]"
        )));
    }
    Ok(())
}

/// Maps a rescaled-frame trace `(t, w(t))` to the physical frame:
/// `t_p = t / alpha^(3/2)` and field `alpha w(t, alpha^(1/2)(x - t_p))` on
/// the dilated grid of length `L alpha^(-1/2)`.
pub fn rescale_to_physical<T: Real>(
    trace: &[(T, Field<T>)],
    alpha: T,
) -> Result<Vec<(T, Field<T>)>> {
    check_alpha(alpha)?;
    if trace.is_empty() {
        return Err(Error::EmptyInput("rescaled trace"));
    }
    let src = trace[0].1.grid();
    let root = alpha.sqrt();
    let pow32 = alpha * root;
    let target = SpatialGrid::new(src.n(), src.length() / root)?;
    trace
        .iter()
        .map(|(t, f)| {
            if f.grid() != src {
                return Err(Error::GridMismatch);
            }
            let t_phys = *t / pow32;
            let modes: Vec<Complex<T>> = target
                .frequencies()
                .iter()
                .zip(f.spectral())
                .map(|(&xi_p, &c)| {
                    c.scale(alpha) * Complex::from_polar(T::one(), -xi_p * t_phys)
                })
                .collect();
            Ok((t_phys, Field::from_spectral(target.clone(), modes)?))
        })
        .collect()
}

/// Inverse of [`rescale_to_physical`] with `alpha = eps^2`: recovers the
/// rescaled-frame trace from physical-frame snapshots by undoing the phase
/// shift, amplitude factor and grid dilation, and reindexing time as
/// `t = alpha^(3/2) t_p`.
pub fn unscale_to_rescaled<T: Real>(
    trace: &[(T, Field<T>)],
    eps: T,
) -> Result<Vec<(T, Field<T>)>> {
    let alpha = eps * eps;
    check_alpha(alpha)?;
    if trace.is_empty() {
        return Err(Error::EmptyInput("physical trace"));
    }
    let src = trace[0].1.grid();
    let root = alpha.sqrt();
    let pow32 = alpha * root;
    let target = SpatialGrid::new(src.n(), src.length() * root)?;
    trace
        .iter()
        .map(|(t_phys, f)| {
            if f.grid() != src {
                return Err(Error::GridMismatch);
            }
            let modes: Vec<Complex<T>> = src
                .frequencies()
                .iter()
                .zip(f.spectral())
                .map(|(&xi_p, &c)| {
                    c.scale(alpha.recip()) * Complex::from_polar(T::one(), xi_p * *t_phys)
                })
                .collect();
            Ok((pow32 * *t_phys, Field::from_spectral(target.clone(), modes)?))
        })
        .collect()
}

/// Extracts the rescaled-frame snapshot at rescaled time `t`; the matching
/// physical time `t / alpha^(3/2)` must be present in the trace.
pub fn unscale_at<T: Real>(
    trace: &[(T, Field<T>)],
    eps: T,
    t_rescaled: T,
) -> Result<(T, Field<T>)> {
    let alpha = eps * eps;
    check_alpha(alpha)?;
    let t_phys = t_rescaled / (alpha * alpha.sqrt());
    let tol = T::from_f64_c(1e-9) * t_phys.abs().max(T::one());
    let hit = trace
        .iter()
        .position(|(t, _)| (*t - t_phys).abs() <= tol)
        .ok_or(Error::TimeNotInTrace {
            time: t_phys.to_f64().unwrap_or(f64::NAN),
        })?;
    let mapped = unscale_to_rescaled(&trace[hit..=hit], eps)?;
    Ok(mapped.into_iter().next().expect("one snapshot in, one out"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::InitialData;

    fn band_limited(grid: &SpatialGrid<f64>, seed: u64) -> Field<f64> {
        InitialData::RandomSobolev {
            s: 1.0,
            k_min: 1,
            k_max: grid.n() / 4,
            amplitude: 1.0,
        }
        .realize(grid, seed)
        .unwrap()
    }

    #[test]
    fn alpha_one_at_time_zero_is_identity() {
        let g = SpatialGrid::<f64>::new(128, 40.0).unwrap();
        let f = band_limited(&g, 3);
        let out = rescale_to_physical(&[(0.0, f.clone())], 1.0).unwrap();
        assert_eq!(out[0].0, 0.0);
        for (a, b) in f.physical().iter().zip(out[0].1.physical()) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn dilation_scales_l2_norm_by_alpha_three_quarters() {
        let g = SpatialGrid::<f64>::new(256, 60.0).unwrap();
        let f = band_limited(&g, 11);
        for alpha in [1.0, 0.5, 0.25, 0.04] {
            let out = rescale_to_physical(&[(0.0, f.clone())], alpha).unwrap();
            let expect = alpha.powf(0.75) * f.l2_norm();
            let got = out[0].1.l2_norm();
            assert!(
                (got - expect).abs() <= 1e-10 * expect.max(1e-30),
                "alpha = {alpha}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn translation_only_case_is_a_phase_shift() {
        let g = SpatialGrid::<f64>::new(128, 40.0).unwrap();
        let f = band_limited(&g, 5);
        let t = 0.7;
        let out = rescale_to_physical(&[(t, f.clone())], 1.0).unwrap();
        assert_eq!(out[0].0, t);
        let shifted = f.translate(t);
        for (a, b) in shifted.physical().iter().zip(out[0].1.physical()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn round_trip_is_the_identity_on_band_limited_fields() {
        let g = SpatialGrid::<f64>::new(256, 50.0).unwrap();
        let f = band_limited(&g, 21);
        for eps in [1.0, 0.5, 0.2, 0.1] {
            let alpha = eps * eps;
            let rescaled_trace = vec![(0.3, f.clone()), (0.6, f.translate(1.0))];
            let phys = rescale_to_physical(&rescaled_trace, alpha).unwrap();
            let back = unscale_to_rescaled(&phys, eps).unwrap();
            for ((t0, f0), (t1, f1)) in rescaled_trace.iter().zip(&back) {
                assert!((t0 - t1).abs() < 1e-12 * t0.abs().max(1.0));
                assert!((f0.grid().length() - f1.grid().length()).abs() < 1e-9);
                let scale = f0.max_abs().max(1e-30);
                for (a, b) in f0.physical().iter().zip(f1.physical()) {
                    assert!((a - b).abs() <= 1e-10 * scale, "eps = {eps}");
                }
            }
        }
    }

    #[test]
    fn unit_eps_unscale_reindexes_time_only() {
        let g = SpatialGrid::<f64>::new(128, 30.0).unwrap();
        let f = band_limited(&g, 9);
        let out = unscale_to_rescaled(&[(0.0, f.clone())], 1.0).unwrap();
        assert_eq!(out[0].0, 0.0);
        for (a, b) in f.physical().iter().zip(out[0].1.physical()) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn unscale_at_requires_matching_time() {
        let g = SpatialGrid::<f64>::new(64, 20.0).unwrap();
        let f = band_limited(&g, 1);
        let trace = vec![(0.0, f.clone()), (1.0, f)];
        let eps = 0.5f64;
        let alpha = eps * eps;
        let ok = unscale_at(&trace, eps, alpha * alpha.sqrt()).unwrap();
        assert!((ok.0 - alpha * alpha.sqrt()).abs() < 1e-12);
        assert!(matches!(
            unscale_at(&trace, eps, 0.33),
            Err(Error::TimeNotInTrace { .. })
        ));
    }

    #[test]
    fn invalid_alpha_is_rejected() {
        let g = SpatialGrid::<f64>::new(64, 20.0).unwrap();
        let f = Field::zero(&g);
        let trace = vec![(0.0, f)];
        assert!(rescale_to_physical(&trace, 0.0).is_err());
        assert!(rescale_to_physical(&trace, 1.5).is_err());
        assert!(rescale_to_physical::<f64>(&[], 0.5).is_err());
    }
}
