//! Polynomial-augmented RBF interpolation.
//!
//! The interpolant is `s(x) = p(x) + sum_j c_j h(x - x_j)` with `p` of degree
//! at most `m - 1`, determined by the saddle-point system
//!
//! ```text
//! [ A   P ] [c]   [y]
//! [ P^T 0 ] [a] = [0]
//! ```
//!
//! where `A_ij = h(x_i - x_j)` and `P_iq = q(x_i)` over the monomial basis.

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::linalg::{LuFactor, Matrix};
use crate::simplex::{lattice_indices, NodeSet, Point};

/// Pivots below this fraction of `||M||_1` are treated as singular.
pub const PIVOT_REL_TOL: f64 = 1e-13;

/// Monomials of total degree `<= m - 1` in `n` variables, graded colex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyBasis {
    n: usize,
    degree: Option<usize>,
    exponents: Vec<Vec<u32>>,
}

impl PolyBasis {
    /// Basis of `P_{m-1}^n`; empty when `m = 0`.
    pub fn for_order(n: usize, m: usize) -> Self {
        let degree = m.checked_sub(1);
        let mut exponents = Vec::new();
        if let Some(d) = degree {
            for t in 0..=d {
                exponents.extend(lattice_indices(n, t).into_iter().map(|b| b.k));
            }
        }
        PolyBasis {
            n,
            degree,
            exponents,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exponents
    }

    /// Value of the `q`-th monomial at `x`.
    pub fn monomial(&self, q: usize, x: &[f64]) -> f64 {
        self.exponents[q]
            .iter()
            .zip(x)
            .map(|(&e, &xi)| xi.powi(e as i32))
            .product()
    }

    pub fn eval_all(&self, x: &[f64]) -> Vec<f64> {
        (0..self.len()).map(|q| self.monomial(q, x)).collect()
    }
}

/// Solved interpolant together with solve diagnostics.
#[derive(Debug, Clone)]
pub struct Interpolant {
    pub kernel: Kernel,
    pub centers: Vec<Point>,
    pub basis: PolyBasis,
    pub coeffs: Vec<f64>,
    pub poly_coeffs: Vec<f64>,
    /// 1-norm condition estimate of the full saddle-point matrix.
    pub cond_estimate: f64,
    /// `max_i |s(x_i) - y_i|`.
    pub node_residual: f64,
}

impl Interpolant {
    /// Fits on a lattice, checking that its degree determines `P_{m-1}^n`.
    pub fn fit_nodes(kernel: Kernel, nodes: &NodeSet, values: &[f64]) -> Result<Self> {
        Self::fit(kernel, &nodes.points, values, Some(nodes.degree))
    }

    /// Fits arbitrary centers. `lattice_degree`, when known, is checked against `m - 1`.
    pub fn fit(
        kernel: Kernel,
        centers: &[Point],
        values: &[f64],
        lattice_degree: Option<usize>,
    ) -> Result<Self> {
        let big_n = centers.len();
        if big_n == 0 {
            return Err(Error::domain("no interpolation centers"));
        }
        if values.len() != big_n {
            return Err(Error::domain(format!(
                "{} values for {big_n} centers",
                values.len()
            )));
        }
        let n = centers[0].len();
        if n == 0 || centers.iter().any(|p| p.len() != n) {
            return Err(Error::domain("centers must share a positive dimension"));
        }
        if values
            .iter()
            .chain(centers.iter().flatten())
            .any(|v| !v.is_finite())
        {
            return Err(Error::domain("centers and values must be finite"));
        }
        let m = kernel.m();
        if let Some(l) = lattice_degree {
            if m >= 1 && l < m - 1 {
                return Err(Error::Unisolvent {
                    degree: l,
                    required: m - 1,
                });
            }
        }
        let basis = PolyBasis::for_order(n, m);
        let q = basis.len();
        if q > big_n {
            return Err(Error::Unisolvent {
                degree: lattice_degree.unwrap_or(0),
                required: m - 1,
            });
        }

        let size = big_n + q;
        let mut sys = Matrix::zeros(size);
        for i in 0..big_n {
            sys.set(i, i, kernel.eval_sq(0.0));
            for j in i + 1..big_n {
                let h = kernel.between(&centers[i], &centers[j]);
                sys.set(i, j, h);
                sys.set(j, i, h);
            }
            for (k, v) in basis.eval_all(&centers[i]).into_iter().enumerate() {
                sys.set(i, big_n + k, v);
                sys.set(big_n + k, i, v);
            }
        }
        let lu = LuFactor::new(&sys, PIVOT_REL_TOL).map_err(|p| Error::Conditioning {
            c: kernel.c(),
            pivot: p.pivot,
            threshold: p.threshold,
            row: p.row,
        })?;
        let mut rhs = values.to_vec();
        rhs.resize(size, 0.0);
        let sol = lu.solve_refined(&sys, &rhs);
        let cond_estimate = lu.cond_estimate();

        let mut s = Interpolant {
            kernel,
            centers: centers.to_vec(),
            basis,
            coeffs: sol[..big_n].to_vec(),
            poly_coeffs: sol[big_n..].to_vec(),
            cond_estimate,
            node_residual: 0.0,
        };
        s.node_residual = centers
            .iter()
            .zip(values)
            .map(|(x, y)| (s.eval(x) - y).abs())
            .fold(0.0, f64::max);
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Polynomial part `p(x)`.
    pub fn poly_part(&self, x: &[f64]) -> f64 {
        self.poly_coeffs
            .iter()
            .enumerate()
            .map(|(q, a)| a * self.basis.monomial(q, x))
            .sum()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let kernel_part: f64 = self
            .coeffs
            .iter()
            .zip(&self.centers)
            .map(|(c, xj)| c * self.kernel.between(x, xj))
            .sum();
        self.poly_part(x) + kernel_part
    }

    /// `|sum_j c_j q(x_j)|` for every basis monomial `q`.
    pub fn side_condition_residuals(&self) -> Vec<f64> {
        (0..self.basis.len())
            .map(|q| {
                self.coeffs
                    .iter()
                    .zip(&self.centers)
                    .map(|(c, x)| c * self.basis.monomial(q, x))
                    .sum::<f64>()
                    .abs()
            })
            .collect()
    }
}

/// `max |f(x) - s(x)|` over `grid`.
pub fn max_error_on_grid<F>(s: &Interpolant, f: F, grid: &[Point]) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    grid.iter()
        .map(|x| (f(x) - s.eval(x)).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::Simplex;
    use std::f64::consts::PI;

    #[test]
    fn basis_sizes_and_order() {
        assert!(PolyBasis::for_order(3, 0).is_empty());
        assert_eq!(PolyBasis::for_order(3, 1).exponents(), &[vec![0, 0, 0]]);
        let b = PolyBasis::for_order(2, 3);
        assert_eq!(b.len(), 6);
        assert_eq!(
            b.exponents(),
            &[
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
        assert_eq!(b.monomial(4, &[2.0, 3.0]), 6.0);
    }

    #[test]
    fn two_node_hand_solution() {
        let k = Kernel::new(-1.0, 1.0).unwrap();
        let s = Interpolant::fit(k, &[vec![0.0], vec![1.0]], &[1.0, 0.0], None).unwrap();
        assert!((s.coeffs[0] - 2.0 / PI.sqrt()).abs() < 1e-12);
        assert!((s.coeffs[1] + 2f64.sqrt() / PI.sqrt()).abs() < 1e-12);
        assert!(s.poly_coeffs.is_empty());
        assert!((s.eval(&[0.0]) - 1.0).abs() < 1e-12);
        assert!(s.eval(&[1.0]).abs() < 1e-12);
        let mid = s.coeffs[0] * k.eval_radius(0.5) + s.coeffs[1] * k.eval_radius(0.5);
        assert!((s.eval(&[0.5]) - mid).abs() < 1e-14);
    }

    #[test]
    fn zero_data_gives_zero_interpolant() {
        let nodes = Simplex::corner(2).unwrap().evenly_spaced_points(3).unwrap();
        let k = Kernel::new(-1.0, 0.8).unwrap();
        let s = Interpolant::fit_nodes(k, &nodes, &vec![0.0; nodes.len()]).unwrap();
        assert!(s.coeffs.iter().all(|&c| c == 0.0));
        assert_eq!(s.eval(&[0.2, 0.3]), 0.0);
    }

    #[test]
    fn constants_are_reproduced_with_linear_order() {
        let nodes = Simplex::corner(2).unwrap().evenly_spaced_points(2).unwrap();
        let k = Kernel::new(1.0, 1.0).unwrap();
        let s = Interpolant::fit_nodes(k, &nodes, &vec![1.0; nodes.len()]).unwrap();
        assert_eq!(s.poly_coeffs.len(), 1);
        assert!((s.poly_coeffs[0] - 1.0).abs() < 1e-12);
        assert!(s.coeffs.iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn unisolvency_is_checked() {
        // beta = 5 gives m = 3, so the lattice needs degree >= 2
        let nodes = Simplex::corner(2).unwrap().evenly_spaced_points(1).unwrap();
        let k = Kernel::new(5.0, 1.0).unwrap();
        let err = Interpolant::fit_nodes(k, &nodes, &[1.0, 2.0, 3.0]).unwrap_err();
        assert_eq!(
            err,
            Error::Unisolvent {
                degree: 1,
                required: 2
            }
        );
    }

    #[test]
    fn duplicate_centers_are_a_conditioning_error() {
        let k = Kernel::new(-1.0, 1.0).unwrap();
        let err = Interpolant::fit(k, &[vec![0.5], vec![0.5]], &[1.0, 1.0], None).unwrap_err();
        assert!(matches!(err, Error::Conditioning { c, .. } if c == 1.0));
    }

    #[test]
    fn mismatched_lengths() {
        let k = Kernel::new(-1.0, 1.0).unwrap();
        assert!(Interpolant::fit(k, &[vec![0.0], vec![1.0]], &[1.0], None).is_err());
        assert!(Interpolant::fit(k, &[], &[], None).is_err());
    }

    #[test]
    fn permuting_nodes_permutes_coefficients() {
        let nodes = Simplex::corner(2).unwrap().evenly_spaced_points(3).unwrap();
        let k = Kernel::new(1.0, 0.7).unwrap();
        let y: Vec<f64> = nodes
            .points
            .iter()
            .map(|p| (p[0] - 2.0 * p[1]).sin())
            .collect();
        let s = Interpolant::fit(k, &nodes.points, &y, Some(3)).unwrap();
        let perm: Vec<usize> = (0..nodes.len()).rev().collect();
        let pts: Vec<Point> = perm.iter().map(|&i| nodes.points[i].clone()).collect();
        let yp: Vec<f64> = perm.iter().map(|&i| y[i]).collect();
        let sp = Interpolant::fit(k, &pts, &yp, Some(3)).unwrap();
        for (j, &i) in perm.iter().enumerate() {
            assert!((sp.coeffs[j] - s.coeffs[i]).abs() < 1e-12 * (1.0 + s.coeffs[i].abs()));
        }
    }

    #[test]
    fn grid_error_is_max_abs() {
        let k = Kernel::new(-1.0, 1.0).unwrap();
        let s = Interpolant::fit(k, &[vec![0.0], vec![1.0]], &[0.0, 0.0], None).unwrap();
        let err = max_error_on_grid(&s, |x| x[0], &[vec![0.0], vec![0.5], vec![1.0]]);
        assert_eq!(err, 1.0);
    }
}
