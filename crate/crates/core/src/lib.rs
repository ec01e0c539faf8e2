//! Exact-arithmetic differential invariants of rank-2 vector distributions.
//!
//! The crate computes, over exact rationals, the classical data attached to a
//! rank-2 distribution spanned by two vector fields: growth vectors, the
//! characteristic vector field on the annihilator of the squared
//! distribution, the flag of that annihilator under the characteristic flow,
//! the fundamental form and projective Ricci curvature (dimension five), and
//! weight-jump loci (dimension six and up). An independent analyzer for
//! curves of symmetric matrices in the Lagrange Grassmannian cross-validates
//! the pipeline through their common invariants.

pub mod chart;
pub mod error;
pub mod expr;
pub mod linalg;
pub mod par;
pub mod parse;
pub mod poly;
pub mod scalar;
pub mod series;

pub mod manifold;

pub mod cotangent;

pub mod invariants;

pub mod grasscurve;

pub mod catalog;

pub use chart::{Chart, ChartBuilder};
pub use error::{Error, Result};
pub use expr::Expr;
pub use parse::parse_expr;
pub use scalar::Rat;
