//! Analysis of the Z2n-equivariant planar vector field family
//!
//! ```text
//! z' = p z^(n-1) zbar^(n-2) + s z^n zbar^(n-1) - zbar^(2n-1),   p = p1 + i p2,  s = s1 + i s2
//! ```
//!
//! The crate computes the equilibria of the family in closed form and
//! classifies them, reduces the search for limit cycles around the origin
//! to a scalar Abel equation, certifies when at most one cycle exists, and
//! locates cycles numerically through Poincare return maps. Every closed-form
//! result has an independent brute-force counterpart in [`oracle`].
//!
//! Polar quantities use `r = |z|^2` and the time-rescaled system
//! `r' = 2r(p1 + r s1 - r cos 2n theta)`, `theta' = p2 + r(s2 + sin 2n theta)`,
//! which has the same oriented orbits as the planar field for `r > 0`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod abel;
pub mod equilibria;
mod error;
pub mod field;
pub mod flow;
pub mod linalg;
pub mod oracle;
pub mod quadrature;
mod tol;

pub use error::{Error, NoReturnReason, Result};
pub use field::{CartesianPoint, Params, PolarState};
pub use tol::Tolerances;
