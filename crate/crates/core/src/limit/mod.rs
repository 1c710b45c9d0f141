//! Convergence experiments between the regularized and limit flows: per-eps
//! error traces, power-law rate fits, exponential growth envelopes and
//! validity horizons, frame-scaling maps, and a dispersive mixed-norm
//! ensemble diagnostic.

mod scaling;
mod strichartz;
mod sweep;

pub use scaling::{rescale_to_physical, unscale_at, unscale_to_rescaled};
pub use strichartz::{strichartz_ratios, StrichartzConfig};
pub use sweep::{
    difference_l2, fit_growth, horizon_above, level_at, rate_threshold, run_pair, run_sweep,
    validity_horizon, ErrorTrace, GrowthFit, Perturbation, RateFit, SweepConfig, SweepPoint,
    SweepResult,
};
