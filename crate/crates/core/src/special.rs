//! Special functions needed by the kernel prefactor and the MN objective.
//!
//! Only real arguments are supported. Everything here is a pure function.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `sin(pi * x)` with exact zeros at the integers.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    // r in [-1, 1]
    if r.abs() == 1.0 || r == 0.0 {
        return 0.0 * x.signum();
    }
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

fn gamma_lanczos(x: f64) -> f64 {
    // valid for x >= 0.5
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &p) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // split the power so large arguments do not overflow before the exp
    let half = t.powf((z + 0.5) / 2.0);
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * acc
}

/// The gamma function for real `x` away from the poles `0, -1, -2, ...`.
///
/// Negative arguments go through the reflection formula.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("gamma: non-finite argument {x}")));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::domain(format!("gamma: pole at x = {x}")));
    }
    if x == x.floor() && x <= 21.0 {
        // exact factorial
        let mut f = 1.0;
        for k in 2..(x as u64) {
            f *= k as f64;
        }
        return Ok(f);
    }
    if x < 0.5 {
        Ok(PI / (sin_pi(x) * gamma_lanczos(1.0 - x)))
    } else {
        Ok(gamma_lanczos(x))
    }
}

/// Modified Bessel function of the second kind, order zero.
///
/// Power series below `x = 2`, Steed's continued fraction above.
pub fn bessel_k0(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::domain(format!("bessel_k0: requires x > 0, got {x}")));
    }
    if x <= 2.0 {
        Ok(k0_series(x))
    } else {
        Ok(k0_continued_fraction(x))
    }
}

// K0(x) = -(ln(x/2) + gamma) I0(x) + sum_{k>=1} H_k (x^2/4)^k / (k!)^2
fn k0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut i0 = 1.0;
    let mut harmonic = 0.0;
    let mut tail = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= q / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        tail += harmonic * term;
        if term < 1e-18 * i0 {
            break;
        }
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0 + tail
}

// Steed's algorithm (CF2) specialised to order zero.
fn k0_continued_fraction(x: f64) -> f64 {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    (PI / (2.0 * x)).sqrt() * (-x).exp() / s
}

/// Exact binomial coefficient `a choose b`.
pub fn binomial(a: u64, b: u64) -> Result<u64> {
    if b > a {
        return Err(Error::domain(format!("binomial: b = {b} exceeds a = {a}")));
    }
    let b = b.min(a - b);
    let mut r: u128 = 1;
    for i in 0..b as u128 {
        // r * (a - i) is always divisible by (i + 1)
        r = r * (a as u128 - i) / (i + 1);
        if r > u64::MAX as u128 {
            return Err(Error::domain(format!("binomial({a}, {b}) overflows u64")));
        }
    }
    Ok(r as u64)
}

/// Volume of the unit ball in `R^n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    // n/2 + 1 >= 1.5 is never a pole
    PI.powf(half) / gamma(half + 1.0).expect("positive argument")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn gamma_anchor_values() {
        assert!(rel(gamma(0.5).unwrap(), 1.772_453_850_905_516) < 1e-12);
        assert!(rel(gamma(-0.5).unwrap(), -3.544_907_701_811_032) < 1e-12);
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        assert_eq!(gamma(1.0).unwrap(), 1.0);
    }

    #[test]
    fn gamma_poles_are_rejected() {
        for x in [0.0, -1.0, -2.0, -17.0] {
            match gamma(x) {
                Err(Error::Domain(msg)) => assert!(msg.contains("pole")),
                other => panic!("expected pole error, got {other:?}"),
            }
        }
    }

    #[test]
    fn gamma_half_integers_match_closed_form() {
        // Gamma(k + 1/2) = (2k)! sqrt(pi) / (4^k k!)
        let mut expected = PI.sqrt();
        for k in 0..28u32 {
            let x = k as f64 + 0.5;
            assert!(rel(gamma(x).unwrap(), expected) < 1e-12, "x = {x}");
            expected *= x;
        }
    }

    #[test]
    fn gamma_large_factorials() {
        let mut f = 1.0f64;
        for k in 1..30u32 {
            f *= k as f64;
            // Gamma(k + 1) = k!; 22! and above go through Lanczos
            assert!(rel(gamma(k as f64 + 1.0).unwrap(), f) < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn k0_domain() {
        assert!(bessel_k0(0.0).is_err());
        assert!(bessel_k0(-1.0).is_err());
        assert!(bessel_k0(f64::NAN).is_err());
    }

    #[test]
    fn k0_regimes_agree_at_split() {
        let below = k0_series(2.0);
        let above = k0_continued_fraction(2.0);
        assert!(rel(below, above) < 1e-13, "{below} vs {above}");
    }

    #[test]
    fn k0_small_argument_asymptotics() {
        let x = 1e-6;
        let k = bessel_k0(x).unwrap();
        assert!(k > 10.0);
        let asym = -(x / 2.0).ln() - EULER_GAMMA;
        assert!(rel(k, asym) < 1e-10);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2).unwrap(), 6);
        assert_eq!(binomial(5, 3).unwrap(), 10);
        assert_eq!(binomial(9, 0).unwrap(), 1);
        assert_eq!(binomial(40, 20).unwrap(), 137_846_528_820);
        assert!(binomial(2, 3).is_err());
    }

    #[test]
    fn binomial_pascal_rule() {
        for a in 1..=20u64 {
            for b in 1..a {
                assert_eq!(
                    binomial(a, b).unwrap(),
                    binomial(a - 1, b - 1).unwrap() + binomial(a - 1, b).unwrap()
                );
            }
        }
    }

    #[test]
    fn unit_ball() {
        assert!(rel(unit_ball_volume(1), 2.0) < 1e-15);
        assert!(rel(unit_ball_volume(2), PI) < 1e-15);
        assert!(rel(unit_ball_volume(3), 4.0 * PI / 3.0) < 1e-14);
    }
}
