//! Complex wavefunction samples on a uniform periodic grid.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MIN_POINTS: usize = 64;
pub const MAX_POINTS: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq)]
pub struct WavePacket<T> {
    samples: Vec<Complex<T>>,
    x0: T,
    spacing: T,
}

impl<T: Real> WavePacket<T> {
    /// Validate the grid and normalize so that `Σ|ψ|²·dx = 1`.
    pub fn new(samples: Vec<Complex<T>>, x0: T, spacing: T) -> Result<Self> {
        let mut packet = Self::from_raw(samples, x0, spacing)?;
        let norm = packet.norm();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::validation(
                "wave packet",
                format!("cannot normalize, norm = {norm}"),
            ));
        }
        let scale = norm.sqrt().recip();
        packet.samples.iter_mut().for_each(|z| *z = *z * scale);
        Ok(packet)
    }

    /// Validate the grid but keep the samples as given.
    pub fn from_raw(samples: Vec<Complex<T>>, x0: T, spacing: T) -> Result<Self> {
        let n = samples.len();
        if !n.is_power_of_two() || !(MIN_POINTS..=MAX_POINTS).contains(&n) {
            return Err(Error::validation(
                "grid size",
                format!("need a power of two in [{MIN_POINTS}, {MAX_POINTS}], got {n}"),
            ));
        }
        if !(spacing > T::zero()) || !spacing.is_finite() {
            return Err(Error::validation("grid spacing", format!("must be > 0, got {spacing}")));
        }
        if !x0.is_finite() {
            return Err(Error::validation("grid origin", "must be finite"));
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::validation("wave packet", "non-finite sample"));
        }
        Ok(WavePacket { samples, x0, spacing })
    }

    /// Gaussian `exp(-(x-center)²/(4σ²) + i k0 x)` sampled on `n` points from `x0`.
    ///
    /// `sigma` is the standard deviation of `|ψ|²`.
    pub fn gaussian(n: usize, x0: T, spacing: T, center: T, sigma: T, k0: T) -> Result<Self> {
        if !(sigma > T::zero()) {
            return Err(Error::validation("sigma", format!("must be > 0, got {sigma}")));
        }
        let four = T::lit(4.0);
        let samples = (0..n)
            .map(|i| {
                let x = x0 + spacing * T::from_count(i);
                let d = x - center;
                Complex::from_polar((-(d * d) / (four * sigma * sigma)).exp(), k0 * x)
            })
            .collect();
        Self::new(samples, x0, spacing)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn x0(&self) -> T {
        self.x0
    }

    pub fn spacing(&self) -> T {
        self.spacing
    }

    pub fn extent(&self) -> T {
        self.spacing * T::from_count(self.len())
    }

    pub fn position(&self, i: usize) -> T {
        self.x0 + self.spacing * T::from_count(i)
    }

    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    pub(crate) fn samples_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<Complex<T>> {
        self.samples
    }

    /// `Σ|ψ|²·dx`
    pub fn norm(&self) -> T {
        self.samples.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b) * self.spacing
    }

    pub fn density(&self) -> Vec<T> {
        self.samples.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Angular wavenumbers of the FFT bins in standard order.
    pub fn wavenumbers(&self) -> Vec<T> {
        wavenumbers(self.len(), self.spacing)
    }
}

pub fn wavenumbers<T: Real>(n: usize, spacing: T) -> Vec<T> {
    let dk = T::TAU() / (spacing * T::from_count(n));
    (0..n)
        .map(|j| {
            if j < n / 2 {
                dk * T::from_count(j)
            } else {
                -dk * T::from_count(n - j)
            }
        })
        .collect()
}

/// Forward and inverse FFT plans with shared scratch space.
pub(crate) struct Spectral<T: Real> {
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    scratch: Vec<Complex<T>>,
    inv_n: T,
}

impl<T: Real> Spectral<T> {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        Spectral {
            forward,
            inverse,
            scratch: vec![Complex::new(T::zero(), T::zero()); len],
            inv_n: T::from_count(n).recip(),
        }
    }

    pub fn forward(&mut self, buf: &mut [Complex<T>]) {
        self.forward.process_with_scratch(buf, &mut self.scratch);
    }

    /// Inverse transform including the `1/N` factor.
    pub fn inverse(&mut self, buf: &mut [Complex<T>]) {
        self.inverse.process_with_scratch(buf, &mut self.scratch);
        let s = self.inv_n;
        buf.iter_mut().for_each(|z| *z = *z * s);
    }
}
