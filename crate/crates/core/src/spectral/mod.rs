//! Periodic spectral substrate: grids, fields, multipliers, dealiasing,
//! Littlewood-Paley projections and discrete norms.
//!
//! Conventions, fixed once for the whole crate:
//!
//! * mode ordering is the standard DFT layout `k = 0, 1, ..., n/2-1, -n/2,
//!   ..., -1` with wavenumbers `xi_k = 2 pi k / L`,
//! * the forward transform is the plain unnormalized sum
//!   `F_k = sum_j f_j exp(-i xi_k x_j)`, the inverse carries the `1/n`,
//! * quadrature weights (`L/n` in physical space, `L/n^2` on modes) appear
//!   explicitly in every norm, so the `s = 0` Sobolev norm coincides with the
//!   trapezoidal L2 norm of the samples.

mod field;
mod grid;
mod lp;
mod norms;

pub use field::Field;
pub(crate) use field::dealias_modes;
pub use grid::SpatialGrid;
pub use lp::{eta, lp_project, lp_shells, ProjectionMode};
pub use norms::lp_tx_norm;
