//! Pseudo-spectral solvers and diagnostics for two long-wave models: the
//! regularized BBM flow with dispersion `xi^3 / (1 + eps^2 xi^2)` and the
//! normalized KdV flow with dispersion `xi^3`.
//!
//! The crate provides
//!
//! * a periodic spectral substrate ([`spectral`]): grids, FFT-backed fields,
//!   Fourier multipliers, two-thirds dealiasing, Littlewood-Paley projections
//!   and discrete Sobolev / mixed space-time norms,
//! * exact dispersion-symbol algebra ([`symbols`]): symbols, their
//!   derivatives and critical points, and the two-wave resonance function,
//! * time evolution ([`evolve`]): exact linear propagators combined with an
//!   integrating-factor RK4 stepper, plus an integral-equation residual
//!   self-check,
//! * conserved functionals and drift monitoring ([`invariants`]),
//! * convergence experiments ([`limit`]): BBM-vs-KdV error sweeps across the
//!   dispersion parameter, rate and growth fitting, frame-scaling maps and a
//!   dispersive mixed-norm ensemble diagnostic.
//!
//! All numerics are generic over the scalar type through [`Real`]; the
//! `*64` / `*32` aliases below pin the two supported precisions.

// Negated comparisons like `!(x > 0)` are NaN-rejecting validation guards.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod data;
pub mod error;
pub mod evolve;
pub mod fit;
pub mod invariants;
pub mod limit;
pub mod spectral;
pub mod symbols;

pub use error::{Error, Result};
// Multipliers are written against this type; re-exported so downstream
// crates need not track the num-complex version themselves.
pub use num_complex::Complex;

/// Scalar type the solvers are generic over: `f32` or `f64`.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + num_traits::NumAssign
    + rustfft::FftNum
    + std::iter::Sum
    + std::fmt::Display
    + std::fmt::LowerExp
{
    /// Lossless-enough conversion from `f64` for constants and tolerances.
    fn from_f64_c(x: f64) -> Self {
        Self::from_f64(x).expect("constant representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type Grid64 = spectral::SpatialGrid<f64>;
pub type Grid32 = spectral::SpatialGrid<f32>;
pub type Field64 = spectral::Field<f64>;
pub type Field32 = spectral::Field<f32>;
pub type Model64 = symbols::DispersionModel<f64>;
pub type Model32 = symbols::DispersionModel<f32>;
pub type State64 = evolve::EvolutionState<f64>;
pub type State32 = evolve::EvolutionState<f32>;
