//! Error-bound driven selection of the shape parameter `c` for multiquadric
//! and inverse multiquadric radial basis function interpolation.
//!
//! The kernel is `h(x) = Gamma(-beta/2) (c^2 + |x|^2)^(beta/2)`. Interpolation
//! centers are the evenly spaced lattice points of a simplex, and the data are
//! band-limited. For that setting the pointwise error bound factors into
//! constants times a function `MN(c)`; [`shape::MnProblem::optimal_c`] minimizes
//! it over `c in (0, inf)`, and the `verify-bound` command checks the bound
//! against actual interpolation errors.

pub mod bandlim;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod golden;
pub mod interp;
pub mod kernel;
pub mod linalg;
pub mod output;
pub mod shape;
pub mod simplex;
pub mod special;

pub use error::{Error, Result};
