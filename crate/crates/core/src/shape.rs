//! The MN function and its minimization over the full range `c in (0, inf)`.
//!
//! | case | hypothesis                                   | MN(c)                                   |
//! |------|----------------------------------------------|-----------------------------------------|
//! | 1a   | `beta > 0`, `1 + beta - n - 4l >= 0`          | `e^(c sigma/2) c^p`, increasing          |
//! | 1b   | `beta > 0`, `1 + beta - n - 4l < 0`           | `e^(c sigma/2) c^p`                      |
//! | 2    | `beta < 0`, `n + beta >= 1` or `n + beta = -1` | `e^(c sigma/2) c^p`                      |
//! | 3    | `beta = -1`, `n = 1`                          | piecewise at `c = 1/sigma`, see below    |
//!
//! with `p = (1 + beta - n - 4l)/4` in cases 1 and 2 and `p = beta/2 - l` in case 3,
//! where the right piece is `c^p (1/K0(1) + 2 sqrt(3) sqrt(c sigma) e^(c sigma))^(1/2)`
//! and the left piece `K0(1)^(-1/2) c^p`.
//!
//! All searches run in `u = ln c`.

use serde::Serialize;

use crate::bounds::{bessel_bracket, bound_case, BoundCase};
use crate::error::{Error, Result};
use crate::golden::golden_section_by;
use crate::special::bessel_k0;

/// Absolute tolerance on `ln c` for the golden-section searches.
pub const LOG_C_TOL: f64 = 1e-10;

/// Which branch of the selection rule applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Case {
    #[serde(rename = "1a")]
    Case1a,
    #[serde(rename = "1b")]
    Case1b,
    #[serde(rename = "2")]
    Case2,
    #[serde(rename = "3")]
    Case3,
}

impl Case {
    pub fn as_str(&self) -> &'static str {
        match self {
            Case::Case1a => "1a",
            Case::Case1b => "1b",
            Case::Case2 => "2",
            Case::Case3 => "3",
        }
    }
}

/// Classifies `(n, beta, l)`; the gap between the inverse multiquadric
/// hypotheses is reported as unsupported.
pub fn classify(n: usize, beta: f64, l: usize) -> Result<Case> {
    if l == 0 {
        return Err(Error::domain("lattice degree l must be at least 1"));
    }
    Ok(match bound_case(n, beta)? {
        BoundCase::Multiquadric => {
            if 1.0 + beta - n as f64 - 4.0 * l as f64 >= 0.0 {
                Case::Case1a
            } else {
                Case::Case1b
            }
        }
        BoundCase::InverseMultiquadric => Case::Case2,
        BoundCase::Bessel => Case::Case3,
    })
}

/// `c* = -2p/sigma = (n + 4l - beta - 1)/(2 sigma)`, the stationary point of
/// `e^(c sigma/2) c^p`. Only defined for cases 1b and 2.
pub fn closed_form_cstar(n: usize, beta: f64, l: usize, sigma: f64) -> Result<f64> {
    let problem = MnProblem::new(n, beta, sigma, l)?;
    match problem.case {
        Case::Case1b | Case::Case2 => Ok(-2.0 * problem.exponent / sigma),
        other => Err(Error::domain(format!(
            "closed-form minimizer only exists in cases 1b and 2, not {}",
            other.as_str()
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MnProblem {
    pub case: Case,
    pub n: usize,
    pub beta: f64,
    pub sigma: f64,
    pub l: usize,
    /// Power of `c` in MN.
    pub exponent: f64,
    /// Positive constant multiplying MN; never moves the minimizer.
    pub scale: f64,
}

impl MnProblem {
    pub fn new(n: usize, beta: f64, sigma: f64, l: usize) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::domain(format!(
                "sigma must be positive, got {sigma}"
            )));
        }
        let case = classify(n, beta, l)?;
        let lf = l as f64;
        let exponent = match case {
            Case::Case3 => beta / 2.0 - lf,
            _ => (1.0 + beta - n as f64 - 4.0 * lf) / 4.0,
        };
        Ok(MnProblem {
            case,
            n,
            beta,
            sigma,
            l,
            exponent,
            scale: 1.0,
        })
    }

    pub fn with_scale(mut self, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::domain(format!(
                "scale must be positive, got {scale}"
            )));
        }
        self.scale = scale;
        Ok(self)
    }

    /// `1/sigma`, where the case-3 pieces meet.
    pub fn breakpoint(&self) -> f64 {
        1.0 / self.sigma
    }

    fn inv_k0() -> f64 {
        1.0 / bessel_k0(1.0).expect("K0(1) is finite")
    }

    // ln of the right piece without the scale; overflow-free for large c sigma
    fn log_right_piece(&self, c: f64) -> f64 {
        let cs = c * self.sigma;
        let b = 2.0 * 3f64.sqrt() * cs.sqrt();
        let bracket_log = cs + b.ln() + (Self::inv_k0() * (-cs).exp() / b).ln_1p();
        self.exponent * c.ln() + 0.5 * bracket_log
    }

    fn log_left_piece(&self, c: f64) -> f64 {
        self.exponent * c.ln() - 0.5 * bessel_k0(1.0).expect("finite").ln()
    }

    /// `ln MN(c)` without the scale factor.
    pub fn log_mn(&self, c: f64) -> Result<f64> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::domain(format!("c must be positive, got {c}")));
        }
        Ok(match self.case {
            Case::Case3 if c * self.sigma <= 1.0 => self.log_left_piece(c),
            Case::Case3 => self.log_right_piece(c),
            _ => 0.5 * c * self.sigma + self.exponent * c.ln(),
        })
    }

    pub fn mn_value(&self, c: f64) -> Result<f64> {
        if self.case == Case::Case3 && c * self.sigma > 1.0 && c * self.sigma < 600.0 {
            // direct formula where it cannot overflow
            return Ok(self.scale * c.powf(self.exponent) * bessel_bracket(c, self.sigma));
        }
        if self.case == Case::Case3 && c > 0.0 && c * self.sigma <= 1.0 {
            return Ok(self.scale * c.powf(self.exponent) * Self::inv_k0().sqrt());
        }
        Ok(self.scale * self.log_mn(c)?.exp())
    }

    /// Right-hand limit of MN at the case-3 breakpoint.
    pub fn right_limit_at_breakpoint(&self) -> f64 {
        self.scale * self.log_right_piece(self.breakpoint()).exp()
    }

    // ln MN(e^u1) - ln MN(e^u2), evaluated without cancellation in cases 1 and 2
    fn log_mn_diff(&self, u1: f64, u2: f64) -> f64 {
        match self.case {
            Case::Case3 => self.log_right_piece(u1.exp()) - self.log_right_piece(u2.exp()),
            _ => {
                let d = u1 - u2;
                0.5 * self.sigma * u2.exp() * d.exp_m1() + self.exponent * d
            }
        }
    }

    /// Minimizes MN over the sweep interval `[c_lo, c_hi]` (cases 1a, 3) or
    /// over all of `(0, inf)` (cases 1b, 2, where the minimizer is explicit).
    pub fn optimal_c(&self, c_lo: f64, c_hi: f64) -> Result<MnResult> {
        if !(c_lo > 0.0 && c_hi > c_lo && c_hi.is_finite()) {
            return Err(Error::domain(format!(
                "invalid sweep interval [{c_lo}, {c_hi}]"
            )));
        }
        match self.case {
            Case::Case1a => self.optimal_boundary(c_lo, c_hi),
            Case::Case1b | Case::Case2 => self.optimal_closed_form(c_lo, c_hi),
            Case::Case3 => self.optimal_piecewise(c_lo, c_hi),
        }
    }

    fn optimal_boundary(&self, c_lo: f64, c_hi: f64) -> Result<MnResult> {
        Ok(MnResult {
            case: self.case,
            optimal_c: c_lo,
            mn_at_optimum: self.mn_value(c_lo)?,
            boundary_optimum: true,
            branch_note: Some("MN is increasing: c as small as the sweep allows".into()),
            diagnostics: Diagnostics {
                sweep: (c_lo, c_hi),
                within_sweep: true,
                ..Diagnostics::default()
            },
        })
    }

    fn optimal_closed_form(&self, c_lo: f64, c_hi: f64) -> Result<MnResult> {
        let closed = -2.0 * self.exponent / self.sigma;
        let u = closed.ln();
        let g = golden_section_by(
            |a, b| self.log_mn_diff(a, b),
            u - 10f64.ln(),
            u + 10f64.ln(),
            LOG_C_TOL,
        );
        let numeric = g.x.exp();
        let agreement = ((numeric - closed) / closed).abs();
        let within = closed >= c_lo && closed <= c_hi;
        Ok(MnResult {
            case: self.case,
            optimal_c: closed,
            mn_at_optimum: self.mn_value(closed)?,
            boundary_optimum: false,
            branch_note: (!within)
                .then(|| "minimizer lies outside the requested sweep interval".to_string()),
            diagnostics: Diagnostics {
                iterations: g.iterations,
                bracket: Some((g.bracket.0.exp(), g.bracket.1.exp())),
                closed_form_c: Some(closed),
                golden_c: Some(numeric),
                relative_agreement: Some(agreement),
                sweep: (c_lo, c_hi),
                within_sweep: within,
                ..Diagnostics::default()
            },
        })
    }

    fn optimal_piecewise(&self, c_lo: f64, c_hi: f64) -> Result<MnResult> {
        let brk = self.breakpoint();
        let mut diag = Diagnostics {
            sweep: (c_lo, c_hi),
            within_sweep: true,
            ..Diagnostics::default()
        };

        // left piece is strictly decreasing, so its infimum sits at its right end
        let left = (c_lo <= brk).then(|| {
            let c = brk.min(c_hi);
            Candidate {
                c,
                mn: self.scale * self.log_left_piece(c).exp(),
            }
        });

        let right = if c_hi > brk {
            let lo = c_lo.max(brk).ln();
            let hi = c_hi.ln();
            // coarse scan to bracket the global minimum, then refine
            const SCAN: usize = 256;
            let step = (hi - lo) / SCAN as f64;
            let best = (0..=SCAN)
                .map(|i| (i, self.log_right_piece((lo + step * i as f64).exp())))
                .fold(
                    (0, f64::INFINITY),
                    |acc, v| if v.1 < acc.1 { v } else { acc },
                )
                .0;
            let a = lo + step * best.saturating_sub(1) as f64;
            let b = (lo + step * (best + 1) as f64).min(hi);
            let g = golden_section_by(|x, y| self.log_mn_diff(x, y), a, b, LOG_C_TOL);
            diag.iterations = g.iterations;
            diag.bracket = Some((g.bracket.0.exp(), g.bracket.1.exp()));
            diag.golden_c = Some(g.x.exp());
            diag.truncation_warning = (hi - g.x).abs() < 1e-6;
            let c = g.x.exp();
            Some(Candidate {
                c,
                mn: self.scale * self.log_right_piece(c).exp(),
            })
        } else {
            diag.truncation_warning = true;
            None
        };

        diag.left_candidate = left;
        diag.right_candidate = right;
        let (winner, note) = match (left, right) {
            (Some(l), Some(r)) if l.mn <= r.mn => (l, "left piece (c <= 1/sigma)"),
            (_, Some(r)) => (r, "right piece (c > 1/sigma)"),
            (Some(l), None) => (l, "left piece (c <= 1/sigma)"),
            (None, None) => unreachable!("sweep interval is nonempty"),
        };
        Ok(MnResult {
            case: self.case,
            optimal_c: winner.c,
            mn_at_optimum: winner.mn,
            boundary_optimum: false,
            branch_note: Some(note.into()),
            diagnostics: diag,
        })
    }

    /// Samples MN on `grid`. In case 3 both one-sided values at `1/sigma` are
    /// included whenever the breakpoint lies inside the grid range.
    pub fn mn_curve(&self, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
        let mut out = Vec::with_capacity(grid.len() + 2);
        let brk = self.breakpoint();
        let insert_break = self.case == Case::Case3
            && grid.first().is_some_and(|&a| a <= brk)
            && grid.last().is_some_and(|&b| b >= brk);
        let mut inserted = false;
        for &c in grid {
            if insert_break && !inserted && c >= brk {
                out.push((brk, self.mn_value(brk)?));
                out.push((brk, self.right_limit_at_breakpoint()));
                inserted = true;
            }
            // grid points that only differ from 1/sigma by rounding are the breakpoint
            if insert_break && (c - brk).abs() <= 1e-12 * brk {
                continue;
            }
            out.push((c, self.mn_value(c)?));
        }
        Ok(out)
    }
}

/// `points` log-spaced values from `c_lo` to `c_hi` inclusive.
pub fn log_grid(c_lo: f64, c_hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(c_lo > 0.0 && c_hi > c_lo && c_hi.is_finite()) || points < 2 {
        return Err(Error::domain(format!(
            "log grid needs 0 < c_lo < c_hi and at least 2 points, got [{c_lo}, {c_hi}] x {points}"
        )));
    }
    let (a, b) = (c_lo.ln(), c_hi.ln());
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|i| match i {
            0 => c_lo,
            _ if i == points - 1 => c_hi,
            _ => (a + (b - a) * i as f64 / last).exp(),
        })
        .collect())
}

/// Default sweep `[1e-3, 1e3] / sigma`.
pub fn default_sweep(sigma: f64) -> (f64, f64) {
    (1e-3 / sigma, 1e3 / sigma)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Candidate {
    pub c: f64,
    pub mn: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct Diagnostics {
    pub iterations: usize,
    pub bracket: Option<(f64, f64)>,
    pub closed_form_c: Option<f64>,
    pub golden_c: Option<f64>,
    pub relative_agreement: Option<f64>,
    pub left_candidate: Option<Candidate>,
    pub right_candidate: Option<Candidate>,
    /// The right-piece minimizer sits at the top of the sweep.
    pub truncation_warning: bool,
    pub sweep: (f64, f64),
    pub within_sweep: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MnResult {
    pub case: Case,
    pub optimal_c: f64,
    pub mn_at_optimum: f64,
    pub boundary_optimum: bool,
    pub branch_note: Option<String>,
    pub diagnostics: Diagnostics,
}
