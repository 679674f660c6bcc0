//! The radial function `h(x) = Gamma(-beta/2) (c^2 + |x|^2)^(beta/2)`.

use crate::error::{Error, Result};
use crate::special::gamma;

fn is_even_nonneg_integer(beta: f64) -> bool {
    beta >= 0.0 && beta == beta.floor() && (beta / 2.0) == (beta / 2.0).floor()
}

/// Conditional positive definiteness order `m = max(0, ceil(beta / 2))`.
pub fn cpd_order(beta: f64) -> Result<usize> {
    if !beta.is_finite() {
        return Err(Error::domain(format!("beta must be finite, got {beta}")));
    }
    if is_even_nonneg_integer(beta) {
        return Err(Error::domain(format!(
            "beta = {beta} is an even nonnegative integer"
        )));
    }
    Ok((beta / 2.0).ceil().max(0.0) as usize)
}

/// Multiquadric (`beta > 0`) or inverse multiquadric (`beta < 0`) kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    beta: f64,
    c: f64,
    m: usize,
    gamma_factor: f64,
    half_beta: f64,
    c2: f64,
}

impl Kernel {
    pub fn new(beta: f64, c: f64) -> Result<Self> {
        let m = cpd_order(beta)?;
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::domain(format!(
                "shape parameter c must be positive, got {c}"
            )));
        }
        Ok(Kernel {
            beta,
            c,
            m,
            gamma_factor: gamma(-beta / 2.0)?,
            half_beta: beta / 2.0,
            c2: c * c,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Order of conditional positive definiteness.
    pub fn m(&self) -> usize {
        self.m
    }

    /// `Gamma(-beta/2)`.
    pub fn gamma_factor(&self) -> f64 {
        self.gamma_factor
    }

    /// `h` as a function of the squared radius.
    #[inline]
    pub fn eval_sq(&self, r2: f64) -> f64 {
        self.gamma_factor * (self.c2 + r2).powf(self.half_beta)
    }

    pub fn eval_radius(&self, r: f64) -> f64 {
        self.eval_sq(r * r)
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.eval_sq(x.iter().map(|v| v * v).sum())
    }

    /// `h(x - y)`.
    #[inline]
    pub fn between(&self, x: &[f64], y: &[f64]) -> f64 {
        self.eval_sq(x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum())
    }
}
