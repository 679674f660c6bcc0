//! Constants of the exponential-type error bound and its explicit right-hand sides
//! for band-limited data.
//!
//! `rho_delta0` evaluates the three-branch definition of `rho` and `Delta_0`;
//! `BoundConstants` adds `C = max(2/(3 b0), 8 rho)`, `delta_0 = 1/(3C)` and
//! `lambda' = (2/3)^(1/(3C))`. The error bound holds on an n-simplex of diameter
//! `r` in `[1/(3C), 2/(3C)]` for centers on the degree-`l` lattice with
//! `1/(3C delta) <= l <= 2/(3C delta)`.
//!
//! Fourier convention: `f^(xi) = int f(x) exp(-i <x, xi>) dx`. The Bessel-case
//! bracket replaces the band-limited spectral integrals by `||f||^2_{L^2}`
//! exactly as in the standard derivation of its MN function.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::cpd_order;
use crate::special::{bessel_k0, unit_ball_volume};

/// Which of the three cases defines `rho` and `Delta_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// `beta < n - 3`, `beta < 0`.
    #[serde(rename = "a-i")]
    AI,
    /// `beta < n - 3`, `beta > 0`.
    #[serde(rename = "a-ii")]
    AII,
    /// `n - 3 <= beta < n - 1`.
    #[serde(rename = "b")]
    B,
    /// `beta >= n - 1`.
    #[serde(rename = "c")]
    C,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::AI => "a-i",
            Branch::AII => "a-ii",
            Branch::B => "b",
            Branch::C => "c",
        }
    }
}

/// Reduced fraction `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fraction {
    pub num: u128,
    pub den: u128,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Fraction {
    fn new(num: u128, den: u128) -> Self {
        let g = gcd(num, den).max(1);
        Fraction {
            num: num / g,
            den: den / g,
        }
    }

    /// Correctly rounded when numerator and denominator are below `2^53`.
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn exactly_representable(&self) -> bool {
        const LIMIT: u128 = 1 << 53;
        self.num < LIMIT && self.den < LIMIT
    }
}

/// Product of the consecutive integers `lo..=hi` (empty product is 1).
fn descending_product(lo: i64, hi: i64) -> Option<u128> {
    (lo..=hi).try_fold(1u128, |acc, j| acc.checked_mul(u128::try_from(j).ok()?))
}

fn checked_pow(b: u128, e: u32) -> Option<u128> {
    b.checked_pow(e)
}

/// Output of the `rho`/`Delta_0` definition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoDelta0 {
    pub rho: f64,
    pub delta0_const: f64,
    /// Branch intermediate; absent for branch (b).
    pub s: Option<i64>,
    pub branch: Branch,
    pub rho_exact: Fraction,
    /// Exact `Delta_0` when the integer arithmetic fits in 128 bits.
    pub delta0_exact: Option<Fraction>,
}

/// Evaluates `rho` and `Delta_0` for dimension `n` and exponent `beta`.
pub fn rho_delta0(n: usize, beta: f64) -> Result<RhoDelta0> {
    if n == 0 {
        return Err(Error::domain("dimension n must be positive"));
    }
    cpd_order(beta)?;
    let nf = n as f64;
    let m = (beta / 2.0).ceil() as i64;
    let ceil_half = ((nf - beta - 3.0) / 2.0).ceil() as i64;

    let (branch, s, rho_exact, delta0_exact) = if beta < nf - 3.0 {
        let s = ceil_half;
        if beta < 0.0 {
            let rho = Fraction::new(3 + s as u128, 3);
            let delta0 = descending_product(3, 2 + s).and_then(|p| {
                let num = p.checked_mul(9)?;
                let den = checked_pow(3 + s as u128, 2)?;
                Some(Fraction::new(num, den))
            });
            (Branch::AI, Some(s), rho, delta0)
        } else {
            let q = (2 * m + 3) as u128;
            let rho = Fraction::new(q + s as u128, q);
            let k = (2 * m + 2) as u32;
            let delta0 = descending_product(2 * m + 3, 2 * m + 2 + s).and_then(|p| {
                let num = p.checked_mul(checked_pow(q, k)?)?;
                let den = checked_pow(q + s as u128, k)?;
                Some(Fraction::new(num, den))
            });
            (Branch::AII, Some(s), rho, delta0)
        }
    } else if beta < nf - 1.0 {
        let one = Fraction::new(1, 1);
        (Branch::B, None, one, Some(one))
    } else {
        let s = -ceil_half;
        let delta0 = descending_product(2 * m - s + 3, 2 * m + 2).map(|p| Fraction::new(1, p));
        (Branch::C, Some(s), Fraction::new(1, 1), delta0)
    };

    let rho = rho_exact.to_f64();
    let delta0_const = match delta0_exact {
        Some(f) if f.exactly_representable() => f.to_f64(),
        _ => delta0_float(branch, s.unwrap_or(0), m, rho),
    };
    Ok(RhoDelta0 {
        rho,
        delta0_const,
        s,
        branch,
        rho_exact,
        delta0_exact,
    })
}

// floating-point fallback for arguments whose integer products overflow
fn delta0_float(branch: Branch, s: i64, m: i64, rho: f64) -> f64 {
    let prod = |lo: i64, hi: i64| (lo..=hi).map(|j| j as f64).product::<f64>();
    match branch {
        Branch::AI => prod(3, 2 + s) / (rho * rho),
        Branch::AII => prod(2 * m + 3, 2 * m + 2 + s) / rho.powi((2 * m + 2) as i32),
        Branch::B => 1.0,
        Branch::C => 1.0 / prod(2 * m - s + 3, 2 * m + 2),
    }
}

/// All constants needed to state and evaluate the error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundConstants {
    pub n: usize,
    pub beta: f64,
    pub m: usize,
    pub b0: f64,
    pub rho: f64,
    pub delta0_const: f64,
    pub s: Option<i64>,
    pub branch: Branch,
    /// `C = max(2/(3 b0), 8 rho)`.
    #[serde(rename = "C")]
    pub c_const: f64,
    /// `delta_0 = 1/(3C)`.
    pub delta_max: f64,
    pub lambda_prime: f64,
}

impl BoundConstants {
    pub fn new(n: usize, beta: f64, b0: f64) -> Result<Self> {
        if !(b0.is_finite() && b0 > 0.0) {
            return Err(Error::domain(format!("b0 must be positive, got {b0}")));
        }
        let rd = rho_delta0(n, beta)?;
        let c_const = (2.0 / (3.0 * b0)).max(8.0 * rd.rho);
        Ok(BoundConstants {
            n,
            beta,
            m: cpd_order(beta)?,
            b0,
            rho: rd.rho,
            delta0_const: rd.delta0_const,
            s: rd.s,
            branch: rd.branch,
            c_const,
            delta_max: 1.0 / (3.0 * c_const),
            lambda_prime: (2.0f64 / 3.0).powf(1.0 / (3.0 * c_const)),
        })
    }

    /// Closed interval `[1/(3C delta), 2/(3C delta)]` of admissible lattice degrees.
    pub fn l_interval(&self, delta: f64) -> (f64, f64) {
        let base = 1.0 / (3.0 * self.c_const * delta);
        (base, 2.0 * base)
    }

    fn check_delta(&self, delta: f64) -> Result<()> {
        if delta.is_nan() || delta <= 0.0 || delta >= self.delta_max {
            return Err(Error::domain(format!(
                "delta = {delta} outside the admissible interval (0, {})",
                self.delta_max
            )));
        }
        Ok(())
    }

    /// Smallest integer lattice degree allowed for `delta`.
    pub fn admissible_l(&self, delta: f64) -> Result<usize> {
        self.check_delta(delta)?;
        let (lo, hi) = self.l_interval(delta);
        // absorb rounding in 1/(3 C delta) when it should be an integer
        let l = (lo * (1.0 - 1e-12)).ceil().max(1.0);
        if l > hi * (1.0 + 1e-12) {
            return Err(Error::domain(format!(
                "no integer degree in [{lo}, {hi}] for delta = {delta}"
            )));
        }
        Ok(l as usize)
    }

    /// Whether `l` lies in the admissible interval for `delta`.
    pub fn l_is_admissible(&self, delta: f64, l: usize) -> bool {
        let (lo, hi) = self.l_interval(delta);
        let lf = l as f64;
        lf >= lo * (1.0 - 1e-12) && lf <= hi * (1.0 + 1e-12)
    }

    /// Simplex diameters allowed by the theorem.
    pub fn diameter_interval(&self) -> (f64, f64) {
        (1.0 / (3.0 * self.c_const), 2.0 / (3.0 * self.c_const))
    }
}

/// One admissible configuration: `delta`, its lattice degree and a simplex diameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScheduleItem {
    pub delta: f64,
    pub l: usize,
    pub r: f64,
}

impl ScheduleItem {
    /// Smallest admissible `l`, diameter at the upper end `2/(3C)`.
    pub fn new(constants: &BoundConstants, delta: f64) -> Result<Self> {
        Ok(ScheduleItem {
            delta,
            l: constants.admissible_l(delta)?,
            r: constants.diameter_interval().1,
        })
    }
}

/// Which native-norm estimate (and hence which explicit bound) applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundCase {
    /// `beta > 0`.
    Multiquadric,
    /// `beta < 0` with `n + beta >= 1` or `n + beta = -1`.
    InverseMultiquadric,
    /// `beta = -1`, `n = 1`.
    Bessel,
}

const EXACT_TOL: f64 = 1e-12;

/// Selects the native-norm estimate for `(n, beta)`.
pub fn bound_case(n: usize, beta: f64) -> Result<BoundCase> {
    if n == 0 {
        return Err(Error::domain("dimension n must be positive"));
    }
    cpd_order(beta)?;
    let nb = n as f64 + beta;
    if beta > 0.0 {
        Ok(BoundCase::Multiquadric)
    } else if n == 1 && (beta + 1.0).abs() < EXACT_TOL {
        Ok(BoundCase::Bessel)
    } else if nb >= 1.0 || (nb + 1.0).abs() < EXACT_TOL {
        Ok(BoundCase::InverseMultiquadric)
    } else {
        Err(Error::Unsupported {
            n,
            beta,
            reason:
                "inverse multiquadric needs n + beta >= 1, n + beta = -1, or beta = -1 with n = 1"
                    .into(),
        })
    }
}

/// Inputs to the native-norm and right-hand-side evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    pub n: usize,
    pub beta: f64,
    pub c: f64,
    /// Band radius of the data.
    pub sigma: f64,
    pub l2_norm: f64,
    /// The unspecified constant `S(m, n)` of the multiquadric estimate.
    pub s_mn: f64,
}

impl BoundInputs {
    fn validate(&self) -> Result<BoundCase> {
        for (name, v) in [("c", self.c), ("sigma", self.sigma), ("s_mn", self.s_mn)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.l2_norm.is_finite() && self.l2_norm >= 0.0) {
            return Err(Error::domain("L2 norm must be finite and nonnegative"));
        }
        bound_case(self.n, self.beta)
    }
}

fn factorial(m: usize) -> f64 {
    (2..=m).map(|k| k as f64).product()
}

/// `{1/K0(1) + 2 sqrt(3) sqrt(c sigma) e^(c sigma)}^(1/2)` for `c > 1/sigma`,
/// `K0(1)^(-1/2)` otherwise.
pub fn bessel_bracket(c: f64, sigma: f64) -> f64 {
    let inv_k0 = 1.0 / bessel_k0(1.0).expect("K0(1) is finite");
    if c * sigma <= 1.0 {
        inv_k0.sqrt()
    } else {
        let cs = c * sigma;
        (inv_k0 + 2.0 * 3f64.sqrt() * cs.sqrt() * cs.exp()).sqrt()
    }
}

/// Upper bound on the native-space seminorm `||f||_h` of a band-limited `f`.
pub fn native_norm_bound(inp: &BoundInputs) -> Result<f64> {
    let case = inp.validate()?;
    let n = inp.n as f64;
    let (beta, c, sigma) = (inp.beta, inp.c, inp.sigma);
    let v = match case {
        BoundCase::Multiquadric => {
            let m = cpd_order(beta)?;
            (factorial(m) * inp.s_mn).sqrt()
                * 2f64.powf(-n - (1.0 + beta) / 4.0)
                * PI.powf(-n - 0.25)
                * sigma.powf((1.0 + beta + n) / 4.0)
                * (c * sigma / 2.0).exp()
                * c.powf((1.0 - beta - n) / 4.0)
                * inp.l2_norm
        }
        BoundCase::InverseMultiquadric => {
            2f64.powf(-n - (1.0 + beta) / 4.0)
                * PI.powf(-n - 0.25)
                * sigma.powf((1.0 + beta + n) / 4.0)
                * (c * sigma / 2.0).exp()
                * c.powf((1.0 - n - beta) / 4.0)
                * inp.l2_norm
        }
        BoundCase::Bessel => {
            (2.0 * PI).powf(-n) * 2f64.powf(-0.25) * bessel_bracket(c, sigma) * inp.l2_norm
        }
    };
    Ok(v)
}

/// The c-independent-of-data part of the general bound:
/// `2^((n+beta-7)/4) pi^((n-1)/4) sqrt(n alpha_n) c^(beta/2-l) sqrt(Delta_0)
/// sqrt(3C) sqrt(delta) lambda'^(1/delta)`, to be multiplied by `||f||_h`.
pub fn general_bound_factor(
    constants: &BoundConstants,
    c: f64,
    delta: f64,
    l: usize,
) -> Result<f64> {
    constants.check_delta(delta)?;
    let n = constants.n as f64;
    let beta = constants.beta;
    Ok(2f64.powf((n + beta - 7.0) / 4.0)
        * PI.powf((n - 1.0) / 4.0)
        * (n * unit_ball_volume(constants.n)).sqrt()
        * c.powf(beta / 2.0 - l as f64)
        * constants.delta0_const.sqrt()
        * (3.0 * constants.c_const).sqrt()
        * delta.sqrt()
        * constants.lambda_prime.powf(1.0 / delta))
}

/// Explicit right-hand side of the pointwise error bound for band-limited data.
///
/// Requires `0 < delta < delta_0` and `l` in the admissible interval.
pub fn error_bound_rhs(
    constants: &BoundConstants,
    inp: &BoundInputs,
    delta: f64,
    l: usize,
) -> Result<f64> {
    let case = inp.validate()?;
    if constants.n != inp.n || constants.beta != inp.beta {
        return Err(Error::domain(
            "constants were computed for a different (n, beta)",
        ));
    }
    constants.check_delta(delta)?;
    if !constants.l_is_admissible(delta, l) {
        let (lo, hi) = constants.l_interval(delta);
        return Err(Error::domain(format!(
            "lattice degree l = {l} outside [{lo}, {hi}] for delta = {delta}"
        )));
    }
    let n = inp.n as f64;
    let (beta, c, sigma) = (inp.beta, inp.c, inp.sigma);
    let lf = l as f64;
    let common = (n * unit_ball_volume(inp.n)).sqrt()
        * constants.delta0_const.sqrt()
        * (3.0 * constants.c_const).sqrt()
        * delta.sqrt()
        * constants.lambda_prime.powf(1.0 / delta);
    let v = match case {
        BoundCase::Multiquadric => {
            let m = cpd_order(beta)?;
            2f64.powf(-2.0 - 0.75 * n)
                * PI.powf((-2.0 - 3.0 * n) / 4.0)
                * common
                * (factorial(m) * inp.s_mn).sqrt()
                * sigma.powf((1.0 + beta + n) / 4.0)
                * c.powf((1.0 + beta - n) / 4.0 - lf)
                * (c * sigma / 2.0).exp()
                * inp.l2_norm
        }
        BoundCase::InverseMultiquadric => {
            2f64.powf(-2.0 - 0.75 * n)
                * PI.powf((-3.0 * n - 2.0) / 4.0)
                * common
                * sigma.powf((1.0 + beta + n) / 4.0)
                * c.powf((1.0 + beta - n) / 4.0 - lf)
                * (c * sigma / 2.0).exp()
                * inp.l2_norm
        }
        BoundCase::Bessel => {
            2f64.powf(-2.0 + (-3.0 * n + beta) / 4.0)
                * PI.powf((-3.0 * n - 1.0) / 4.0)
                * common
                * c.powf(beta / 2.0 - lf)
                * bessel_bracket(c, sigma)
                * inp.l2_norm
        }
    };
    Ok(v)
}
