use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::Real;

struct GridInner<T: Real> {
    n: usize,
    length: T,
    spacing: T,
    frequencies: Vec<T>,
    fwd: Arc<dyn Fft<T>>,
    inv: Arc<dyn Fft<T>>,
}

/// Uniform periodic 1-D grid of `n` points over a box of period `length`,
/// standing in for the real line at desk scale.
///
/// Sample points are `x_j = -L/2 + j L/n`; wavenumbers follow the DFT layout
/// documented in the module header. The grid owns its FFT plans, so clones
/// are cheap and the type is `Send + Sync`.
pub struct SpatialGrid<T: Real> {
    inner: Arc<GridInner<T>>,
}

impl<T: Real> Clone for SpatialGrid<T> {
    fn clone(&self) -> Self {
        Self {
            inner: Arc::clone(&self.inner),
        }
    }
}

impl<T: Real> PartialEq for SpatialGrid<T> {
    fn eq(&self, other: &Self) -> bool {
        self.inner.n == other.inner.n && self.inner.length == other.inner.length
    }
}

impl<T: Real> fmt::Debug for SpatialGrid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpatialGrid")
            .field("n", &self.inner.n)
            .field("length", &self.inner.length)
            .finish()
    }
}

impl<T: Real> SpatialGrid<T> {
    /// Builds a grid with `n` a power of two (at least 8) and `length > 0`.
    pub fn new(n: usize, length: T) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::Config(format!(
                "grid size n = {n} must be a power of two with n >= 8"
            )));
        }
        if !(length > T::zero()) || !length.is_finite() {
            return Err(Error::Config("grid length must be positive".into()));
        }
        let spacing = length / T::from_usize(n).unwrap();
        let base = T::TAU() / length;
        let half = n / 2;
        let frequencies = (0..n)
            .map(|i| {
                let k = if i < half {
                    i as isize
                } else {
                    i as isize - n as isize
                };
                base * T::from_isize(k).unwrap()
            })
            .collect();
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        Ok(Self {
            inner: Arc::new(GridInner {
                n,
                length,
                spacing,
                frequencies,
                fwd,
                inv,
            }),
        })
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn length(&self) -> T {
        self.inner.length
    }

    pub fn spacing(&self) -> T {
        self.inner.spacing
    }

    /// Wavenumbers in DFT order.
    pub fn frequencies(&self) -> &[T] {
        &self.inner.frequencies
    }

    /// Largest resolved wavenumber magnitude, `pi n / L`.
    pub fn nyquist(&self) -> T {
        T::PI() * T::from_usize(self.inner.n).unwrap() / self.inner.length
    }

    /// Left end of the box; samples live on `[x0, x0 + L)`.
    pub fn x0(&self) -> T {
        -self.inner.length / T::from_f64_c(2.0)
    }

    /// Sample coordinates `x_j = x0 + j L/n`.
    pub fn points(&self) -> Vec<T> {
        let x0 = self.x0();
        (0..self.inner.n)
            .map(|j| x0 + self.inner.spacing * T::from_usize(j).unwrap())
            .collect()
    }

    /// Signed integer index of the `i`-th stored mode.
    pub fn mode_number(&self, i: usize) -> isize {
        if i < self.inner.n / 2 {
            i as isize
        } else {
            i as isize - self.inner.n as isize
        }
    }

    /// Storage slot of signed mode `k`, if resolved.
    pub fn mode_index(&self, k: isize) -> Option<usize> {
        let half = self.inner.n as isize / 2;
        if (0..half).contains(&k) {
            Some(k as usize)
        } else if (-half..0).contains(&k) {
            Some((k + self.inner.n as isize) as usize)
        } else {
            None
        }
    }

    pub(crate) fn forward(&self, buf: &mut [Complex<T>]) {
        self.inner.fwd.process(buf);
    }

    /// Inverse transform including the `1/n` normalization.
    pub(crate) fn inverse_normalized(&self, buf: &mut [Complex<T>]) {
        self.inner.inv.process(buf);
        let scale = T::one() / T::from_usize(self.inner.n).unwrap();
        for v in buf.iter_mut() {
            *v = v.scale(scale);
        }
    }
}
