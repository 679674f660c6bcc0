//! n-simplex geometry and the evenly spaced lattice points used as centers.

use crate::error::{Error, Result};
use crate::linalg::{LuFactor, Matrix};
use crate::special::binomial;

/// A point in `R^n`.
pub type Point = Vec<f64>;

/// Convex hull of `n + 1` affinely independent points in `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertices: Vec<Point>,
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

impl Simplex {
    /// Validates vertex count, dimensions and affine independence.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::domain("a simplex needs at least two vertices"));
        }
        let n = vertices.len() - 1;
        if let Some((i, v)) = vertices.iter().enumerate().find(|(_, v)| v.len() != n) {
            return Err(Error::domain(format!(
                "vertex {i} has {} coordinates, expected {n}",
                v.len()
            )));
        }
        if vertices.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::domain("vertex coordinates must be finite"));
        }
        let s = Simplex { vertices };
        let scale = s.diameter();
        let det = LuFactor::new(&s.edge_matrix(), 0.0)
            .ok()
            .map(|lu| lu.determinant().abs())
            .unwrap_or(0.0);
        if det.is_nan() || det <= 1e-12 * scale.powi(n as i32) {
            return Err(Error::domain(format!(
                "vertices are affinely dependent (|det| = {det:e})"
            )));
        }
        Ok(s)
    }

    /// The corner simplex `{0, e_1, ..., e_n}`.
    pub fn corner(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("dimension must be positive"));
        }
        let mut vertices = vec![vec![0.0; n]];
        for i in 0..n {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            vertices.push(e);
        }
        Simplex::new(vertices)
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    // columns are v_i - v_0
    fn edge_matrix(&self) -> Matrix {
        let n = self.dim();
        let v0 = &self.vertices[0];
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|r| (1..=n).map(|c| self.vertices[c][r] - v0[r]).collect())
            .collect();
        Matrix::from_rows(&rows)
    }

    /// Largest pairwise vertex distance.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(dist(a, b));
            }
        }
        d
    }

    /// Similarity transform about vertex 0 so that the diameter becomes `r`.
    pub fn scale_to_diameter(&self, r: f64) -> Result<Simplex> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::domain(format!("diameter must be positive, got {r}")));
        }
        let factor = r / self.diameter();
        let v0 = self.vertices[0].clone();
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&v0)
                    .map(|(x, o)| o + (x - o) * factor)
                    .collect()
            })
            .collect();
        Ok(Simplex { vertices })
    }

    /// `sum_i b_i v_i` for weights summing to one.
    pub fn barycentric_to_cartesian(&self, b: &[f64]) -> Result<Point> {
        if b.len() != self.vertices.len() {
            return Err(Error::domain(format!(
                "expected {} barycentric weights, got {}",
                self.vertices.len(),
                b.len()
            )));
        }
        let sum: f64 = b.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "barycentric weights sum to {sum}, not 1"
            )));
        }
        let mut x = vec![0.0; self.dim()];
        for (w, v) in b.iter().zip(&self.vertices) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += w * vi;
            }
        }
        Ok(x)
    }

    /// Recovers barycentric coordinates of `x` (which need not lie inside).
    pub fn cartesian_to_barycentric(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::domain(format!(
                "point has {} coordinates, expected {n}",
                x.len()
            )));
        }
        let lu = LuFactor::new(&self.edge_matrix(), 0.0)
            .map_err(|_| Error::domain("degenerate simplex"))?;
        let rhs: Vec<f64> = x
            .iter()
            .zip(&self.vertices[0])
            .map(|(a, o)| a - o)
            .collect();
        let tail = lu.solve(&rhs);
        let first = 1.0 - tail.iter().sum::<f64>();
        let mut b = Vec::with_capacity(n + 1);
        b.push(first);
        b.extend(tail);
        Ok(b)
    }

    /// Evenly spaced points of degree `l`, in colexicographic multi-index order.
    pub fn evenly_spaced_points(&self, l: usize) -> Result<NodeSet> {
        if l == 0 {
            return Err(Error::domain("lattice degree l must be at least 1"));
        }
        let indices = lattice_indices(self.vertices.len(), l);
        let lf = l as f64;
        let points = indices
            .iter()
            .map(|idx| {
                let mut x = vec![0.0; self.dim()];
                for (&k, v) in idx.k.iter().zip(&self.vertices) {
                    if k > 0 {
                        for (xi, vi) in x.iter_mut().zip(v) {
                            *xi += k as f64 * vi;
                        }
                    }
                }
                x.iter_mut().for_each(|xi| *xi /= lf);
                x
            })
            .collect();
        Ok(NodeSet {
            degree: l,
            points,
            indices,
            simplex: self.clone(),
        })
    }
}

/// Integer barycentric multi-index `(k_1, ..., k_{n+1})` with `sum k_i = l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BarycentricIndex {
    pub k: Vec<u32>,
    pub l: u32,
}

impl BarycentricIndex {
    pub fn weights(&self) -> Vec<f64> {
        self.k.iter().map(|&k| k as f64 / self.l as f64).collect()
    }
}

/// All multi-indices of `parts` nonnegative entries summing to `l`, colex order.
pub fn lattice_indices(parts: usize, l: usize) -> Vec<BarycentricIndex> {
    let mut out = Vec::new();
    let mut k = vec![0u32; parts];
    // enumerate with the last coordinate as the most significant digit
    fn rec(pos: usize, remaining: u32, k: &mut Vec<u32>, l: u32, out: &mut Vec<BarycentricIndex>) {
        if pos == 0 {
            k[0] = remaining;
            out.push(BarycentricIndex { k: k.clone(), l });
            return;
        }
        for v in 0..=remaining {
            k[pos] = v;
            rec(pos - 1, remaining - v, k, l, out);
        }
        k[pos] = 0;
    }
    if parts == 0 {
        return out;
    }
    rec(parts - 1, l as u32, &mut k, l as u32, &mut out);
    out
}

/// Lattice of evenly spaced interpolation centers on a simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    pub degree: usize,
    pub points: Vec<Point>,
    pub indices: Vec<BarycentricIndex>,
    pub simplex: Simplex,
}

impl NodeSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `binomial(n + l, n)`.
    pub fn expected_len(n: usize, l: usize) -> u64 {
        binomial((n + l) as u64, n as u64).expect("n <= n + l")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn barycentric_examples() {
        let unit = Simplex::new(vec![vec![0.0], vec![1.0]]).unwrap();
        assert_eq!(
            unit.barycentric_to_cartesian(&[1.0, 0.0]).unwrap(),
            vec![0.0]
        );
        let tri = Simplex::corner(2).unwrap();
        let c = tri.barycentric_to_cartesian(&[1.0 / 3.0; 3]).unwrap();
        assert!(close(&c, &[1.0 / 3.0, 1.0 / 3.0], 1e-15));
        let seg = Simplex::new(vec![vec![0.0], vec![2.0]]).unwrap();
        assert_eq!(
            seg.barycentric_to_cartesian(&[0.25, 0.75]).unwrap(),
            vec![1.5]
        );
    }

    #[test]
    fn barycentric_rejects_bad_weights() {
        let tri = Simplex::corner(2).unwrap();
        assert!(tri.barycentric_to_cartesian(&[0.5, 0.5]).is_err());
        assert!(tri.barycentric_to_cartesian(&[0.5, 0.5, 0.5]).is_err());
    }

    #[test]
    fn rejects_degenerate_simplex() {
        let flat = Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]);
        assert!(matches!(flat, Err(Error::Domain(_))));
        assert!(Simplex::new(vec![vec![0.0, 0.0], vec![1.0]]).is_err());
    }

    #[test]
    fn triangle_degree_two() {
        let tri = Simplex::corner(2).unwrap();
        let nodes = tri.evenly_spaced_points(2).unwrap();
        let expected = [
            [0.0, 0.0],
            [0.5, 0.0],
            [1.0, 0.0],
            [0.0, 0.5],
            [0.5, 0.5],
            [0.0, 1.0],
        ];
        assert_eq!(nodes.len(), 6);
        for (p, e) in nodes.points.iter().zip(expected) {
            assert!(close(p, &e, 1e-15), "{p:?} vs {e:?}");
        }
    }

    #[test]
    fn interval_degree_three() {
        let unit = Simplex::corner(1).unwrap();
        let nodes = unit.evenly_spaced_points(3).unwrap();
        let xs: Vec<f64> = nodes.points.iter().map(|p| p[0]).collect();
        assert!(close(&xs, &[0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0], 1e-15));
    }

    #[test]
    fn degree_one_is_vertex_set() {
        let s = Simplex::new(vec![
            vec![0.3, -1.0, 2.0],
            vec![1.0, 0.0, 0.5],
            vec![0.0, 2.0, 1.0],
            vec![-1.0, 0.0, 0.0],
        ])
        .unwrap();
        let nodes = s.evenly_spaced_points(1).unwrap();
        assert_eq!(nodes.points, s.vertices().to_vec());
    }

    #[test]
    fn degree_zero_rejected() {
        assert!(Simplex::corner(2).unwrap().evenly_spaced_points(0).is_err());
    }

    #[test]
    fn diameters_and_scaling() {
        assert_eq!(Simplex::corner(1).unwrap().diameter(), 1.0);
        let tri = Simplex::corner(2).unwrap();
        assert!((tri.diameter() - 2f64.sqrt()).abs() < 1e-15);
        let small = tri.scale_to_diameter(0.05).unwrap();
        assert!((small.diameter() - 0.05).abs() < 1e-12);
        let r = 2.0 / (3.0 * 8.0);
        let s3 = Simplex::corner(3).unwrap().scale_to_diameter(r).unwrap();
        assert!((s3.diameter() - 1.0 / 12.0).abs() < 1e-12);
        assert!(tri.scale_to_diameter(0.0).is_err());
        assert!(tri.scale_to_diameter(-1.0).is_err());
    }

    #[test]
    fn recovered_barycentric_coordinates() {
        let s = Simplex::corner(3).unwrap().scale_to_diameter(0.3).unwrap();
        let nodes = s.evenly_spaced_points(4).unwrap();
        for (p, idx) in nodes.points.iter().zip(&nodes.indices) {
            let b = s.cartesian_to_barycentric(p).unwrap();
            assert!((b.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            assert!(b.iter().all(|&w| (-1e-10..=1.0 + 1e-10).contains(&w)));
            assert!(close(&b, &idx.weights(), 1e-10));
        }
    }
}
