//! Free graded-commutative differential algebras over Q and their
//! finite-dimensional presentations.

mod algebra;
mod element;
mod free;
mod generators;
mod monomial;
mod morphism;
mod presentation;

pub use algebra::{GradedAlgebra, GradedVector};
pub use element::Element;
pub use free::{basis_of_degree, coordinates, element_from_coordinates, FreeCdga};
pub use generators::{Generator, GeneratorSet};
pub use monomial::Monomial;
pub use morphism::CdgaMorphism;
pub use presentation::{FinitePresentation, ProductEntry};
