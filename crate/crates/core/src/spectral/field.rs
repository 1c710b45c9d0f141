use std::io;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::Real;

use super::SpatialGrid;

/// A real-valued function sampled on a [`SpatialGrid`], carrying both the
/// physical samples and the spectral modes.
///
/// The two representations are synchronized eagerly at construction, so every
/// `Field` handed out is internally consistent and safe to share across
/// threads. Round-tripping physical -> spectral -> physical reproduces the
/// samples to roundoff.
#[derive(Clone, Debug)]
pub struct Field<T: Real> {
    grid: SpatialGrid<T>,
    physical: Vec<T>,
    spectral: Vec<Complex<T>>,
}

impl<T: Real> Field<T> {
    /// Builds a field from physical samples; computes the forward transform.
    pub fn from_physical(grid: SpatialGrid<T>, samples: Vec<T>) -> Result<Self> {
        if samples.len() != grid.n() {
            return Err(Error::Config(format!(
                "sample count {} does not match grid size {}",
                samples.len(),
                grid.n()
            )));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("physical samples"));
        }
        let mut spectral: Vec<Complex<T>> =
            samples.iter().map(|&v| Complex::new(v, T::zero())).collect();
        grid.forward(&mut spectral);
        Ok(Self {
            grid,
            physical: samples,
            spectral,
        })
    }

    /// Builds a field from spectral modes; computes the inverse transform.
    ///
    /// The field is real-valued by contract: the imaginary part left by the
    /// inverse transform is dropped. For Hermitian-symmetric input it is zero
    /// to roundoff.
    pub fn from_spectral(grid: SpatialGrid<T>, modes: Vec<Complex<T>>) -> Result<Self> {
        if modes.len() != grid.n() {
            return Err(Error::Config(format!(
                "mode count {} does not match grid size {}",
                modes.len(),
                grid.n()
            )));
        }
        if modes.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite("spectral modes"));
        }
        let mut buf = modes.clone();
        grid.inverse_normalized(&mut buf);
        let physical = buf.iter().map(|c| c.re).collect();
        Ok(Self {
            grid,
            physical,
            spectral: modes,
        })
    }

    pub fn from_fn(grid: &SpatialGrid<T>, f: impl Fn(T) -> T) -> Result<Self> {
        let samples = grid.points().into_iter().map(f).collect();
        Self::from_physical(grid.clone(), samples)
    }

    pub fn zero(grid: &SpatialGrid<T>) -> Self {
        Self {
            grid: grid.clone(),
            physical: vec![T::zero(); grid.n()],
            spectral: vec![Complex::new(T::zero(), T::zero()); grid.n()],
        }
    }

    pub fn grid(&self) -> &SpatialGrid<T> {
        &self.grid
    }

    pub fn physical(&self) -> &[T] {
        &self.physical
    }

    pub fn spectral(&self) -> &[Complex<T>] {
        &self.spectral
    }

    /// Spectral coefficient of signed mode `k`; zero for unresolved modes.
    pub fn mode(&self, k: isize) -> Complex<T> {
        self.grid
            .mode_index(k)
            .map(|i| self.spectral[i])
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn max_abs(&self) -> T {
        self.physical
            .iter()
            .fold(T::zero(), |m, &v| m.max(v.abs()))
    }

    /// Applies the Fourier multiplier `m(xi)` mode by mode.
    ///
    /// Reality of the result is preserved whenever `m(-xi) = conj(m(xi))`.
    pub fn apply_multiplier(&self, m: impl Fn(T) -> Complex<T>) -> Result<Self> {
        let mut modes = Vec::with_capacity(self.grid.n());
        for (&xi, &c) in self.grid.frequencies().iter().zip(&self.spectral) {
            let w = m(xi);
            if !w.re.is_finite() || !w.im.is_finite() {
                return Err(Error::MultiplierDomain {
                    xi: xi.to_f64().unwrap_or(f64::NAN),
                });
            }
            modes.push(c * w);
        }
        Self::from_spectral(self.grid.clone(), modes)
    }

    /// Zeroes every mode with `|k| > n/3` (two-thirds rule).
    pub fn dealias(&self) -> Self {
        let mut modes = self.spectral.clone();
        dealias_modes(&mut modes, self.grid.n());
        Self::from_spectral(self.grid.clone(), modes).expect("dealiasing keeps modes finite")
    }

    /// Translation `f(x) -> f(x - delta)` via a spectral phase shift.
    pub fn translate(&self, delta: T) -> Self {
        let modes = self
            .grid
            .frequencies()
            .iter()
            .zip(&self.spectral)
            .map(|(&xi, &c)| c * Complex::from_polar(T::one(), -xi * delta))
            .collect();
        Self::from_spectral(self.grid.clone(), modes).expect("phase shift keeps modes finite")
    }

    /// Trapezoidal L2 norm of the samples, `((L/n) sum f_j^2)^(1/2)`.
    pub fn l2_norm(&self) -> T {
        let w = self.grid.length() / T::from_usize(self.grid.n()).unwrap();
        (self.physical.iter().map(|&v| v * v).sum::<T>() * w).sqrt()
    }

    /// Discrete Sobolev norm `(sum <xi_k>^(2s) |F_k|^2 L/n^2)^(1/2)`.
    ///
    /// At `s = 0` this equals [`Field::l2_norm`] by Parseval. Negative `s` is
    /// out of scope and rejected.
    pub fn sobolev_norm(&self, s: T) -> Result<T> {
        if s < T::zero() {
            return Err(Error::NegativeRegularity {
                s: s.to_f64().unwrap_or(f64::NAN),
            });
        }
        let n = T::from_usize(self.grid.n()).unwrap();
        let w = self.grid.length() / (n * n);
        let sum = self
            .grid
            .frequencies()
            .iter()
            .zip(&self.spectral)
            .map(|(&xi, c)| (T::one() + xi * xi).powf(s) * c.norm_sqr())
            .sum::<T>();
        Ok((sum * w).sqrt())
    }

    /// Writes `x,value` rows (with header) for the physical samples.
    pub fn write_physical_csv<W: io::Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,value")?;
        for (x, v) in self.grid.points().into_iter().zip(&self.physical) {
            writeln!(out, "{x},{v}")?;
        }
        Ok(())
    }

    /// Writes `k,re,im` rows (with header) for the spectral modes in DFT order.
    pub fn write_spectral_csv<W: io::Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "k,re,im")?;
        for (i, c) in self.spectral.iter().enumerate() {
            writeln!(out, "{},{},{}", self.grid.mode_number(i), c.re, c.im)?;
        }
        Ok(())
    }
}

/// In-place two-thirds dealiasing on a raw mode buffer.
pub(crate) fn dealias_modes<T: Real>(modes: &mut [Complex<T>], n: usize) {
    for (i, c) in modes.iter_mut().enumerate() {
        let k = if i < n / 2 {
            i as isize
        } else {
            i as isize - n as isize
        };
        if 3 * k.unsigned_abs() > n {
            *c = Complex::new(T::zero(), T::zero());
        }
    }
}
