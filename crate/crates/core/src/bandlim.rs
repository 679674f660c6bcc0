//! Tensor-product sinc test functions.
//!
//! `f(x) = A prod_i sin(sigma0 x_i) / (pi x_i)` has Fourier transform `A` times
//! the indicator of the cube `[-sigma0, sigma0]^n`, so it lies in the class of
//! functions band-limited to the ball of radius `sigma0 sqrt(n)`, and
//! `||f||_{L^2} = |A| (sigma0/pi)^(n/2)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Below this `|sigma0 x|` the sinc factor uses its Taylor expansion.
const SERIES_CUTOFF: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandLimitedTestFn {
    n: usize,
    sigma0: f64,
    amplitude: f64,
}

impl BandLimitedTestFn {
    pub fn sinc(n: usize, sigma0: f64) -> Result<Self> {
        Self::with_amplitude(n, sigma0, 1.0)
    }

    pub fn with_amplitude(n: usize, sigma0: f64, amplitude: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("dimension n must be positive"));
        }
        if !(sigma0.is_finite() && sigma0 > 0.0) {
            return Err(Error::domain(format!(
                "sigma0 must be positive, got {sigma0}"
            )));
        }
        if !amplitude.is_finite() {
            return Err(Error::domain("amplitude must be finite"));
        }
        Ok(BandLimitedTestFn {
            n,
            sigma0,
            amplitude,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Radius of the smallest ball containing the frequency support.
    pub fn band_radius(&self) -> f64 {
        self.sigma0 * (self.n as f64).sqrt()
    }

    fn factor(&self, x: f64) -> f64 {
        let t = self.sigma0 * x;
        if t.abs() < SERIES_CUTOFF {
            self.sigma0 / PI * (1.0 - t * t / 6.0)
        } else {
            t.sin() / (PI * x)
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n);
        self.amplitude * x.iter().map(|&xi| self.factor(xi)).product::<f64>()
    }

    pub fn l2_norm(&self) -> f64 {
        self.amplitude.abs() * (self.sigma0 / PI).powf(self.n as f64 / 2.0)
    }
}
