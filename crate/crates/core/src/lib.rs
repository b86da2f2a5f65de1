//! Decides whether a map between closed oriented manifolds of odd codimension
//! is homotopic to an immersion, working entirely with rational
//! characteristic-class data.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`]: exact rational matrices, row reduction and affine subspaces.
//! * [`cdga`]: free graded-commutative dgas, finite presentations, morphisms.
//! * [`lift`]: linear systems of differential equations in a dga and the
//!   decision whether a dga map out of a relative model exists.
//! * [`mono`]: the relative model of the bundle of fibrewise monomorphisms
//!   `Mono(m-planes, n-planes) → BSO(m) × BSO(n)`.
//! * [`immersion`]: problem files, the end-to-end decision and its reports.

pub mod cdga;
pub mod error;
pub mod immersion;
pub mod lift;
pub mod linalg;
pub mod mono;

pub use error::{Error, Result};
