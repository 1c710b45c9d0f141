//! Closed-form dispersion symbols for the two flows, their derivatives and
//! critical points, and the two-wave resonance function: pure scalar math
//! with machine-checkable identities.
//!
//! Everything is written in algebraically stabilized factored form: large
//! frequencies of size `1/eps` are exactly the regime these functions are
//! evaluated in, so differences such as `xi^3 - s_eps(xi)` are never formed
//! by subtraction.

use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

use crate::error::{Error, Result};
use crate::Real;

/// Which dispersive flow is being evolved, together with its parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DispersionModel<T: Real> {
    /// Regularized flow with symbol `xi^3 / (1 + eps^2 xi^2)`, `eps in (0,1]`.
    BbmEps { eps: T },
    /// Limit flow with symbol `xi^3`.
    Kdv,
}

/// Zeros of the second and third symbol derivatives, in increasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct InflectionPoints<T> {
    pub d2_zeros: Vec<T>,
    pub d3_zeros: Vec<T>,
}

/// `<x>^2 = 1 + x^2`.
fn bracket_sq<T: Real>(x: T) -> T {
    T::one() + x * x
}

impl<T: Real> DispersionModel<T> {
    pub fn bbm(eps: T) -> Result<Self> {
        if !(eps > T::zero() && eps <= T::one()) || !eps.is_finite() {
            return Err(Error::Config(format!(
                "dispersion parameter eps = {eps} must lie in (0, 1]"
            )));
        }
        Ok(Self::BbmEps { eps })
    }

    pub fn kdv() -> Self {
        Self::Kdv
    }

    pub fn eps(&self) -> Option<T> {
        match self {
            Self::BbmEps { eps } => Some(*eps),
            Self::Kdv => None,
        }
    }

    /// Dispersion symbol: `xi^3 / (1 + eps^2 xi^2)` or `xi^3`. Odd in `xi`.
    pub fn symbol(&self, xi: T) -> T {
        match self {
            Self::BbmEps { eps } => xi * xi * xi / bracket_sq(*eps * xi),
            Self::Kdv => xi * xi * xi,
        }
    }

    /// First derivative, in the split form `3 xi^2 / <eps xi>^2 -
    /// 2 eps^2 xi^4 / <eps xi>^4` (just `3 xi^2` in the limit flow).
    pub fn symbol_d1(&self, xi: T) -> T {
        let three = T::from_f64_c(3.0);
        match self {
            Self::BbmEps { eps } => {
                let b = bracket_sq(*eps * xi);
                let x2 = xi * xi;
                three * x2 / b - T::from_f64_c(2.0) * (*eps * *eps) * x2 * x2 / (b * b)
            }
            Self::Kdv => three * xi * xi,
        }
    }

    /// Second derivative: `2 xi (3 - eps^2 xi^2) / <eps xi>^6`, or `6 xi`.
    pub fn symbol_d2(&self, xi: T) -> T {
        match self {
            Self::BbmEps { eps } => {
                let y = *eps * xi;
                let b = bracket_sq(y);
                T::from_f64_c(2.0) * xi * (T::from_f64_c(3.0) - y * y) / (b * b * b)
            }
            Self::Kdv => T::from_f64_c(6.0) * xi,
        }
    }

    /// Third derivative: `6 (1 - 6 eps^2 xi^2 + eps^4 xi^4) / <eps xi>^8`,
    /// or the constant 6.
    pub fn symbol_d3(&self, xi: T) -> T {
        let six = T::from_f64_c(6.0);
        match self {
            Self::BbmEps { eps } => {
                let y2 = (*eps * xi) * (*eps * xi);
                let b = bracket_sq(*eps * xi);
                six * (T::one() - six * y2 + y2 * y2) / (b * b * b * b)
            }
            Self::Kdv => six,
        }
    }

    /// Exact zeros of the second and third derivatives: `+-sqrt(3)/eps` and
    /// `+-sqrt(3 +- 2 sqrt(2))/eps`. Empty for the limit flow.
    pub fn inflection_points(&self) -> InflectionPoints<T> {
        match self {
            Self::BbmEps { eps } => {
                let sqrt3 = T::from_f64_c(3.0).sqrt();
                let two_sqrt2 = T::from_f64_c(2.0) * T::from_f64_c(2.0).sqrt();
                let inner = (T::from_f64_c(3.0) - two_sqrt2).sqrt() / *eps;
                let outer = (T::from_f64_c(3.0) + two_sqrt2).sqrt() / *eps;
                InflectionPoints {
                    d2_zeros: vec![-sqrt3 / *eps, sqrt3 / *eps],
                    d3_zeros: vec![-outer, -inner, inner, outer],
                }
            }
            Self::Kdv => InflectionPoints {
                d2_zeros: Vec::new(),
                d3_zeros: Vec::new(),
            },
        }
    }

    /// Resonance function `z(xi1) = s(xi1) + s(xi - xi1)`, symmetric under
    /// `xi1 -> xi - xi1`.
    pub fn resonance_z(&self, xi: T, xi1: T) -> T {
        self.symbol(xi1) + self.symbol(xi - xi1)
    }

    /// `d z / d xi1` in factored form:
    /// `xi (2 xi1 - xi) / (<eps xi1>^2 <eps(xi-xi1)>^2) *
    ///  (2/<eps xi1>^2 + 2/<eps(xi-xi1)>^2 - 1)`.
    pub fn resonance_z_prime(&self, xi: T, xi1: T) -> T {
        let two = T::from_f64_c(2.0);
        match self {
            Self::BbmEps { eps } => {
                let b1 = bracket_sq(*eps * xi1);
                let b2 = bracket_sq(*eps * (xi - xi1));
                xi * (two * xi1 - xi) / (b1 * b2) * (two / b1 + two / b2 - T::one())
            }
            Self::Kdv => T::from_f64_c(3.0) * xi * (two * xi1 - xi),
        }
    }

    /// `d z / d xi1` evaluated as the difference of first-derivative terms;
    /// agrees with [`Self::resonance_z_prime`] up to roundoff and serves as
    /// its cross-check.
    pub fn resonance_z_prime_split(&self, xi: T, xi1: T) -> T {
        self.symbol_d1(xi1) - self.symbol_d1(xi - xi1)
    }

    /// Resonance gap `z(xi/2) - s(xi)` in closed form:
    /// `-(3/4) xi^3 <eps xi>^-2 <eps xi / 2>^-2` (`-(3/4) xi^3` in the limit).
    pub fn resonance_gap(&self, xi: T) -> T {
        let c = T::from_f64_c(-0.75);
        match self {
            Self::BbmEps { eps } => {
                let half = T::from_f64_c(0.5);
                c * xi * xi * xi / (bracket_sq(*eps * xi) * bracket_sq(*eps * xi * half))
            }
            Self::Kdv => c * xi * xi * xi,
        }
    }

    /// Resonance gap by direct evaluation, `z(xi, xi/2) - s(xi)`.
    pub fn resonance_gap_direct(&self, xi: T) -> T {
        self.resonance_z(xi, xi / T::from_f64_c(2.0)) - self.symbol(xi)
    }

    /// Stabilized distance to the limit symbol,
    /// `xi^3 - s_eps(xi) = eps^2 xi^5 / (1 + eps^2 xi^2)` (zero for the limit
    /// flow). Never formed by subtraction.
    pub fn kdv_defect(&self, xi: T) -> T {
        match self {
            Self::BbmEps { eps } => {
                let x2 = xi * xi;
                (*eps * *eps) * x2 * x2 * xi / bracket_sq(*eps * xi)
            }
            Self::Kdv => T::zero(),
        }
    }

    /// Magnitude of the nonlinear-term multiplier: `xi / (1 + eps^2 xi^2)`
    /// or `xi`. The actual Fourier multiplier is `i` times this.
    pub fn nonlinear_multiplier(&self, xi: T) -> T {
        match self {
            Self::BbmEps { eps } => xi / bracket_sq(*eps * xi),
            Self::Kdv => xi,
        }
    }
}

/// Residual tolerances for the random identity suite: factored vs split
/// `z'`, closed-form vs direct resonance gap, and the derivative zeros.
pub const Z_PRIME_TOL: f64 = 1e-10;
pub const GAP_TOL: f64 = 1e-12;
pub const ROOT_TOL: f64 = 1e-10;

/// Worst residuals over a seeded random identity sweep.
#[derive(Clone, Copy, Debug)]
pub struct IdentityReport {
    pub samples: usize,
    pub max_z_prime_rel: f64,
    pub max_gap_rel: f64,
    pub max_d2_at_root: f64,
    pub max_d3_at_root: f64,
}

impl IdentityReport {
    pub fn pass(&self) -> bool {
        self.max_z_prime_rel <= Z_PRIME_TOL
            && self.max_gap_rel <= GAP_TOL
            && self.max_d2_at_root <= ROOT_TOL
            && self.max_d3_at_root <= ROOT_TOL
    }
}

fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Relative difference with an explicit magnitude floor. Used where the
/// compared quantity is a difference of large terms that cancels on a zero
/// set (z' at the interaction midpoint): there the achievable agreement is
/// relative to the term magnitude, not to the vanishing value.
fn rel_diff_floored(a: f64, b: f64, floor: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(floor);
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Runs the closed-form identity suite over `samples` seeded random
/// `(xi, xi1, eps)` triples.
///
/// The sampler draws `eps` log-uniformly from `[0.01, 1]` and frequencies as
/// `u * (1/eps)^a` with `u ~ U(-3, 3)` and `a ~ U(0, 1)`, covering unit
/// through `1/eps`-scale interactions.
pub fn identity_check(seed: u64, samples: usize) -> Result<IdentityReport> {
    if samples == 0 {
        return Err(Error::Config("identity check needs at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = IdentityReport {
        samples,
        max_z_prime_rel: 0.0,
        max_gap_rel: 0.0,
        max_d2_at_root: 0.0,
        max_d3_at_root: 0.0,
    };
    for _ in 0..samples {
        let eps = 10f64.powf(rng.random_range(-2.0..0.0));
        let model = DispersionModel::bbm(eps).expect("sampled eps is in range");
        let inv = 1.0 / eps;
        let xi = rng.random_range(-3.0..3.0) * inv.powf(rng.random_range(0.0..1.0));
        let xi1 = rng.random_range(-3.0..3.0) * inv.powf(rng.random_range(0.0..1.0));

        let term_scale =
            model.symbol_d1(xi1).abs() + model.symbol_d1(xi - xi1).abs();
        let zp = rel_diff_floored(
            model.resonance_z_prime(xi, xi1),
            model.resonance_z_prime_split(xi, xi1),
            term_scale,
        );
        report.max_z_prime_rel = report.max_z_prime_rel.max(zp);

        let gap = rel_diff(model.resonance_gap(xi), model.resonance_gap_direct(xi));
        report.max_gap_rel = report.max_gap_rel.max(gap);

        let roots = model.inflection_points();
        for r in roots.d2_zeros {
            report.max_d2_at_root = report.max_d2_at_root.max(model.symbol_d2(r).abs());
        }
        for r in roots.d3_zeros {
            report.max_d3_at_root = report.max_d3_at_root.max(model.symbol_d3(r).abs());
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn symbol_point_values() {
        let m = DispersionModel::bbm(1.0f64).unwrap();
        assert_eq!(m.symbol(1.0), 0.5);
        assert_eq!(m.symbol(0.0), 0.0);
        let tiny = DispersionModel::bbm(1e-6f64).unwrap();
        assert!((tiny.symbol(2.0) - 8.0).abs() / 8.0 < 1e-9);
        assert_eq!(DispersionModel::<f64>::kdv().symbol(2.0), 8.0);
    }

    #[test]
    fn eps_domain_is_enforced() {
        assert!(DispersionModel::bbm(0.0f64).is_err());
        assert!(DispersionModel::bbm(-0.1f64).is_err());
        assert!(DispersionModel::bbm(1.5f64).is_err());
        assert!(DispersionModel::bbm(1.0f64).is_ok());
        assert!(DispersionModel::bbm(f64::NAN).is_err());
    }

    #[test]
    fn second_derivative_values_and_zeros() {
        let m = DispersionModel::bbm(1.0f64).unwrap();
        // 2*1*(3-1)/(1+1)^3 = 4/8.
        assert_eq!(m.symbol_d2(1.0), 0.5);
        assert_eq!(m.symbol_d2(0.0), 0.0);
        for eps in [1.0, 0.5, 0.07] {
            let m = DispersionModel::bbm(eps).unwrap();
            let r = 3f64.sqrt() / eps;
            assert!(m.symbol_d2(r).abs() < 1e-12, "eps = {eps}");
            assert!(m.symbol_d2(-r).abs() < 1e-12, "eps = {eps}");
        }
        assert_eq!(DispersionModel::<f64>::kdv().symbol_d2(2.5), 15.0);
    }

    #[test]
    fn third_derivative_values_and_zeros() {
        for eps in [1.0, 0.3, 0.02] {
            let m = DispersionModel::bbm(eps).unwrap();
            assert_eq!(m.symbol_d3(0.0), 6.0);
            for sign in [1.0, -1.0] {
                let inner = sign * (3.0 - 2.0 * 2f64.sqrt()).sqrt() / eps;
                let outer = sign * (3.0 + 2.0 * 2f64.sqrt()).sqrt() / eps;
                assert!(m.symbol_d3(inner).abs() < 1e-10);
                assert!(m.symbol_d3(outer).abs() < 1e-10);
            }
        }
        assert_eq!(DispersionModel::<f64>::kdv().symbol_d3(9.0), 6.0);
    }

    /// Bisection root-finder, the independent oracle for the closed-form
    /// inflection points.
    fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        assert!(f(a) * f(b) < 0.0, "root not bracketed");
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if f(a) * f(mid) <= 0.0 {
                b = mid;
            } else {
                a = mid;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn inflection_points_match_root_find_oracle() {
        let eps = 0.37;
        let m = DispersionModel::bbm(eps).unwrap();
        let pts = m.inflection_points();
        assert_eq!(pts.d2_zeros.len(), 2);
        assert_eq!(pts.d3_zeros.len(), 4);

        let d2_root = bisect(|x| m.symbol_d2(x), 0.1 / eps, 10.0 / eps);
        assert!((d2_root - pts.d2_zeros[1]).abs() < 1e-9 * d2_root);

        let d3_inner = bisect(|x| m.symbol_d3(x), 0.01 / eps, 1.0 / eps);
        let d3_outer = bisect(|x| m.symbol_d3(x), 1.0 / eps, 10.0 / eps);
        assert!((d3_inner - pts.d3_zeros[2]).abs() < 1e-9 * d3_inner.abs().max(1.0));
        assert!((d3_outer - pts.d3_zeros[3]).abs() < 1e-9 * d3_outer);
        // eps = 1 spot value from the expansion sqrt(3 - 2 sqrt 2) = sqrt2 - 1.
        let unit = DispersionModel::bbm(1.0f64).unwrap().inflection_points();
        assert!((unit.d3_zeros[2] - 0.41421356).abs() < 1e-7);
        assert!((unit.d2_zeros[1] - 1.7320508).abs() < 1e-6);
        assert!((DispersionModel::bbm(0.5f64).unwrap().inflection_points().d2_zeros[1]
            - 2.0 * 3f64.sqrt())
        .abs()
            < 1e-12);

        let kdv = DispersionModel::<f64>::kdv().inflection_points();
        assert!(kdv.d2_zeros.is_empty() && kdv.d3_zeros.is_empty());
    }

    #[test]
    fn resonance_z_point_values() {
        let near_limit = DispersionModel::bbm(1e-8f64).unwrap();
        assert!((near_limit.resonance_z(2.0, 1.0) - 2.0).abs() < 1e-6);
        let m = DispersionModel::bbm(0.43f64).unwrap();
        let xi = 3.7;
        assert!((m.resonance_z(xi, xi / 2.0) - 2.0 * m.symbol(xi / 2.0)).abs() < 1e-14);
        let unit = DispersionModel::bbm(1.0f64).unwrap();
        assert_eq!(unit.resonance_z(0.0, 1.0), 0.0);
    }

    #[test]
    fn z_prime_vanishes_at_midpoint_and_matches_finite_differences() {
        let m = DispersionModel::bbm(1.0f64).unwrap();
        assert_eq!(m.resonance_z_prime(4.2, 2.1), 0.0);

        // Central finite-difference oracle at (xi, xi1) = (1, 1).
        let h = 1e-6;
        let fd = (m.resonance_z(1.0, 1.0 + h) - m.resonance_z(1.0, 1.0 - h)) / (2.0 * h);
        let exact = m.resonance_z_prime(1.0, 1.0);
        assert!((fd - exact).abs() < 1e-6 * exact.abs().max(1.0));
    }

    #[test]
    fn z_prime_positive_in_low_frequency_wedge() {
        // |eps xi1|, |eps (xi - xi1)| <= 2/5 with xi > 0, xi1 > xi/2.
        let eps = 0.05;
        let m = DispersionModel::bbm(eps).unwrap();
        let cap = 0.4 / eps;
        for i in 1..40 {
            for j in 1..40 {
                let xi1 = cap * i as f64 / 40.0;
                let xi = xi1 * (2.0 - j as f64 / 40.0).min(2.0) - 1e-9;
                if xi <= 0.0 || (xi - xi1).abs() > cap || xi1 <= xi / 2.0 {
                    continue;
                }
                assert!(
                    m.resonance_z_prime(xi, xi1) > 0.0,
                    "wedge violated at xi = {xi}, xi1 = {xi1}"
                );
            }
        }
    }

    #[test]
    fn resonance_gap_point_values() {
        let near_limit = DispersionModel::bbm(1e-8f64).unwrap();
        assert!((near_limit.resonance_gap(2.0) + 6.0).abs() < 1e-6);
        let unit = DispersionModel::bbm(1.0f64).unwrap();
        assert_eq!(unit.resonance_gap(0.0), 0.0);
        // -(3/4) * 8 / (5 * 2).
        assert!((unit.resonance_gap(2.0) + 0.6).abs() < 1e-15);
    }

    #[test]
    fn identity_suite_passes_with_margin() {
        let report = identity_check(0, 2000).unwrap();
        assert!(report.pass(), "residuals: {report:?}");
        // The gap and root identities sit at roundoff; z' tolerates mild
        // cancellation near the symmetry point xi1 = xi/2.
        assert!(report.max_gap_rel < GAP_TOL / 10.0);
        assert!(report.max_d2_at_root < ROOT_TOL / 100.0);
    }

    #[test]
    fn identity_check_rejects_zero_samples() {
        assert!(identity_check(0, 0).is_err());
    }

    #[test]
    fn defect_is_monotone_in_eps_and_vanishes_in_the_limit() {
        let xi = 4.2;
        let kdv = DispersionModel::<f64>::kdv();
        let mut prev = 0.0;
        for eps in [1e-4, 1e-3, 1e-2, 0.1, 0.3, 1.0] {
            let m = DispersionModel::bbm(eps).unwrap();
            let gap = (kdv.symbol(xi) - m.symbol(xi)).abs();
            assert!(gap >= prev);
            // Stabilized form agrees with the naive subtraction where the
            // latter is well-conditioned.
            assert!((m.kdv_defect(xi) - gap).abs() < 1e-9 * gap.max(1e-12));
            prev = gap;
        }
        assert!(DispersionModel::bbm(1e-8f64).unwrap().kdv_defect(xi) < 1e-12);
    }

    proptest! {
        #[test]
        fn symbols_are_odd(xi in -50.0f64..50.0, eps in 0.01f64..1.0) {
            let m = DispersionModel::bbm(eps).unwrap();
            prop_assert!((m.symbol(-xi) + m.symbol(xi)).abs() < 1e-12 * m.symbol(xi).abs().max(1.0));
            prop_assert!((m.symbol_d2(-xi) + m.symbol_d2(xi)).abs() < 1e-12 * m.symbol_d2(xi).abs().max(1.0));
            let k = DispersionModel::<f64>::kdv();
            prop_assert_eq!(k.symbol(-xi), -k.symbol(xi));
        }

        #[test]
        fn z_is_symmetric_about_midpoint(
            xi in -20.0f64..20.0,
            xi1 in -20.0f64..20.0,
            eps in 0.01f64..1.0,
        ) {
            let m = DispersionModel::bbm(eps).unwrap();
            let a = m.resonance_z(xi, xi1);
            let b = m.resonance_z(xi, xi - xi1);
            prop_assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
        }

        #[test]
        fn derivatives_match_finite_differences(
            u in -10.0f64..10.0,
            eps in 0.05f64..1.0,
        ) {
            // Sample xi across the full interaction range [-10/eps, 10/eps].
            let xi = u / eps;
            let m = DispersionModel::bbm(eps).unwrap();
            let h = 1e-4;
            let d2 = (m.symbol_d1(xi + h) - m.symbol_d1(xi - h)) / (2.0 * h);
            let d3 = (m.symbol_d2(xi + h) - m.symbol_d2(xi - h)) / (2.0 * h);
            let s2 = m.symbol_d2(xi);
            let s3 = m.symbol_d3(xi);
            // Relative to the derivative scale, floored at 1 so the exact
            // zeros (where h^2 truncation dominates) stay checkable.
            prop_assert!((d2 - s2).abs() <= 1e-5 * s2.abs().max(1.0));
            prop_assert!((d3 - s3).abs() <= 1e-5 * s3.abs().max(1.0));
            let d1 = (m.symbol(xi + h) - m.symbol(xi - h)) / (2.0 * h);
            prop_assert!((d1 - m.symbol_d1(xi)).abs() <= 1e-5 * m.symbol_d1(xi).abs().max(1.0));
        }
    }
}
