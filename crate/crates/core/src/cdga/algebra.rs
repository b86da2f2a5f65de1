use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{
    is_zero_vector, solve_affine, zero_vector, AffineSubspace, Rational, RationalMatrix,
};

/// A homogeneous element written in the canonical basis of its degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedVector {
    pub degree: u32,
    pub coords: Vec<Rational>,
}

impl GradedVector {
    pub fn new(degree: u32, coords: Vec<Rational>) -> Self {
        Self { degree, coords }
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.coords)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            degree: self.degree,
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree || self.coords.len() != other.coords.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot add degree {} and degree {} vectors",
                self.degree, other.degree
            )));
        }
        Ok(Self {
            degree: self.degree,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

/// A commutative differential graded algebra over Q that can be enumerated
/// degree by degree.
///
/// Implemented by free models ([`super::FreeCdga`]) and by finite
/// presentations given through product tables ([`super::FinitePresentation`]).
pub trait GradedAlgebra {
    fn dim(&self, degree: u32) -> usize;

    /// Matrix of `d: A^k → A^(k+1)`, of shape `dim(k+1) × dim(k)`.
    fn differential_matrix(&self, degree: u32) -> RationalMatrix;

    fn product(&self, a: &GradedVector, b: &GradedVector) -> Result<GradedVector>;

    fn unit(&self) -> GradedVector;

    /// Highest degree with a nonzero piece, when the algebra is finite.
    fn top_degree(&self) -> Option<u32>;

    /// Human-readable labels for the basis of a degree.
    fn basis_labels(&self, degree: u32) -> Vec<String>;

    fn has_zero_differential(&self) -> bool {
        false
    }

    fn zero(&self, degree: u32) -> GradedVector {
        GradedVector::new(degree, zero_vector(self.dim(degree)))
    }

    fn check_vector(&self, a: &GradedVector) -> Result<()> {
        let d = self.dim(a.degree);
        if a.coords.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in degree {} of dimension {d}",
                a.coords.len(),
                a.degree
            )));
        }
        Ok(())
    }

    fn apply_differential(&self, a: &GradedVector) -> Result<GradedVector> {
        self.check_vector(a)?;
        if self.has_zero_differential() {
            return Ok(self.zero(a.degree + 1));
        }
        let coords = self.differential_matrix(a.degree).mul_vec(&a.coords)?;
        Ok(GradedVector::new(a.degree + 1, coords))
    }

    /// Matrix of `v ↦ a·v` from degree `k` to degree `|a| + k`.
    fn left_multiplication_matrix(&self, a: &GradedVector, k: u32) -> Result<RationalMatrix> {
        self.check_vector(a)?;
        let src = self.dim(k);
        let dst = self.dim(a.degree + k);
        let mut m = RationalMatrix::zeros(dst, src);
        if a.is_zero() {
            return Ok(m);
        }
        for j in 0..src {
            let mut e = zero_vector(src);
            e[j] = Rational::from_integer(1.into());
            let prod = self.product(a, &GradedVector::new(k, e))?;
            for (i, x) in prod.coords.into_iter().enumerate() {
                if !x.is_zero() {
                    m[(i, j)] = x;
                }
            }
        }
        Ok(m)
    }

    /// `ker(d)` in degree `k`, as a linear subspace.
    fn cocycles(&self, k: u32) -> AffineSubspace {
        let n = self.dim(k);
        if self.has_zero_differential() {
            return AffineSubspace::full(n);
        }
        let d = self.differential_matrix(k);
        solve_affine(&d, &zero_vector(d.rows())).expect("shapes agree")
    }

    fn cohomology_dim(&self, k: u32) -> usize {
        let n = self.dim(k);
        if self.has_zero_differential() {
            return n;
        }
        let kernel = n - self.differential_matrix(k).rank();
        let boundaries = if k == 0 {
            0
        } else {
            self.differential_matrix(k - 1).rank()
        };
        kernel - boundaries
    }

    /// For a closed `a` of degree `k`, some `b` of degree `k - 1` with
    /// `db = a`, or `None` when `a` is not exact. In degree 0 the only exact
    /// element is 0 and its witness is the empty vector.
    fn exact_witness(&self, a: &GradedVector) -> Result<Option<GradedVector>> {
        self.check_vector(a)?;
        if !self.apply_differential(a)?.is_zero() {
            return Err(Error::NotClosed(format!(
                "degree-{} element has nonzero differential",
                a.degree
            )));
        }
        if a.degree == 0 {
            return Ok(a.is_zero().then(|| GradedVector::new(0, Vec::new())));
        }
        if self.has_zero_differential() {
            return Ok(a.is_zero().then(|| self.zero(a.degree - 1)));
        }
        let d = self.differential_matrix(a.degree - 1);
        let sol = solve_affine(&d, &a.coords)?;
        Ok(sol
            .point()
            .map(|p| GradedVector::new(a.degree - 1, p.to_vec())))
    }
}
