//! Golden-section search for one-dimensional minimization.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenResult {
    pub x: f64,
    pub iterations: usize,
    /// Final bracket.
    pub bracket: (f64, f64),
}

/// Minimizes on `[a, b]` using only the sign of `diff(x, y) = f(x) - f(y)`.
///
/// Supplying the difference directly lets callers evaluate it without the
/// cancellation that limits plain value comparisons near a smooth minimum.
pub fn golden_section_by<D>(diff: D, mut a: f64, mut b: f64, tol: f64) -> GoldenResult
where
    D: Fn(f64, f64) -> f64,
{
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut iterations = 0;
    while b - a > tol && iterations < 500 {
        if diff(x1, x2) < 0.0 {
            b = x2;
            x2 = x1;
            x1 = b - INV_PHI * (b - a);
        } else {
            a = x1;
            x1 = x2;
            x2 = a + INV_PHI * (b - a);
        }
        iterations += 1;
    }
    GoldenResult {
        x: 0.5 * (a + b),
        iterations,
        bracket: (a, b),
    }
}

/// Plain golden-section search on `f`.
pub fn golden_section<F>(f: F, a: f64, b: f64, tol: f64) -> GoldenResult
where
    F: Fn(f64) -> f64,
{
    golden_section_by(|x, y| f(x) - f(y), a, b, tol)
}
