//! Exact linear algebra over the rationals.
//!
//! Everything here is dense and arbitrary precision. Matrices at the scale this
//! crate works with are at most a few hundred columns, so plain Gauss-Jordan
//! elimination is all that is needed.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. `num_rational` keeps every value in lowest terms with
/// a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("`{s}` is not a rational number of the form p/q"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("`{s}` has a zero denominator")));
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn zero_vector(len: usize) -> Vec<Rational> {
    vec![Rational::zero(); len]
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|r| self.row(r).iter().map(format_rational).collect())
            .collect();
        write!(f, "RationalMatrix{rows:?}")
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: zero_vector(rows * cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from explicit rows. All rows must share a length; with
    /// no rows the column count must be given separately via [`Self::zeros`].
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row {bad} has {} entries, expected {cols}",
                rows[bad].len()
            )));
        }
        let n = rows.len();
        Ok(Self {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
        .expect("ragged literal matrix")
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {c} has the wrong length");
            for (r, x) in col.iter().enumerate() {
                m[(r, c)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.data)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply a {}x{} matrix to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Places `other` with its top-left corner at `(row, col)`, subtracting
    /// instead of adding when `negate` is set. Overlapping entries accumulate.
    pub fn add_block(&mut self, row: usize, col: usize, other: &Self, negate: bool) {
        assert!(row + other.rows <= self.rows && col + other.cols <= self.cols);
        for r in 0..other.rows {
            for c in 0..other.cols {
                let x = &other[(r, c)];
                if x.is_zero() {
                    continue;
                }
                if negate {
                    self[(row + r, col + c)] -= x;
                } else {
                    self[(row + r, col + c)] += x;
                }
            }
        }
    }

    /// Appends `b` as an extra column.
    pub fn augment(&self, b: &[Rational]) -> Result<Self> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut out = Self::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self[(r, c)].clone();
            }
            out[(r, self.cols)] = b[r].clone();
        }
        Ok(out)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Reduced row-echelon form together with its pivot columns.
    pub fn rref_with_pivots(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(lead, p);
            let inv = m[(lead, col)].recip();
            for c in col..m.cols {
                let x = &m[(lead, c)] * &inv;
                m[(lead, c)] = x;
            }
            for r in 0..m.rows {
                if r == lead || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    if m[(lead, c)].is_zero() {
                        continue;
                    }
                    let delta = &factor * &m[(lead, c)];
                    m[(r, c)] -= delta;
                }
            }
            pivots.push(col);
            lead += 1;
        }
        (m, pivots)
    }

    pub fn rref(&self) -> Self {
        self.rref_with_pivots().0
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Basis of `{x : Ax = 0}`, one vector per free column, with that free
    /// variable set to 1 and the other free variables 0.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref_with_pivots();
        kernel_from_rref(&r, &pivots, self.cols)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Self::zeros(0, 0));
        }
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = Rational::one();
        }
        let (red, pivots) = aug.rref_with_pivots();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = red[(r, n + c)].clone();
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;

    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

fn kernel_from_rref(r: &RationalMatrix, pivots: &[usize], cols: usize) -> Vec<Vec<Rational>> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = zero_vector(cols);
            v[free] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, free)].clone();
            }
            v
        })
        .collect()
}

/// A possibly empty affine subspace of `Q^d`, stored as a point plus an
/// independent list of direction vectors.
///
/// Subspaces produced by [`solve_affine`] and [`intersect_affine`] are in
/// canonical form: the point has every free variable of the reduced system set
/// to zero and the directions are the reduced kernel basis. Two canonical
/// subspaces are equal as point sets iff they are equal as values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineSubspace {
    ambient_dim: usize,
    inner: Option<Flat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Flat {
    point: Vec<Rational>,
    directions: Vec<Vec<Rational>>,
}

impl AffineSubspace {
    pub fn empty(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            inner: None,
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let directions = (0..ambient_dim)
            .map(|i| {
                let mut v = zero_vector(ambient_dim);
                v[i] = Rational::one();
                v
            })
            .collect();
        Self {
            ambient_dim,
            inner: Some(Flat {
                point: zero_vector(ambient_dim),
                directions,
            }),
        }
    }

    /// Wraps an explicit point and direction list. Directions must be
    /// independent; the result is not canonicalised.
    pub fn from_parts(point: Vec<Rational>, directions: Vec<Vec<Rational>>) -> Result<Self> {
        let d = point.len();
        if let Some(bad) = directions.iter().find(|v| v.len() != d) {
            return Err(Error::DimensionMismatch(format!(
                "direction of length {} in ambient dimension {d}",
                bad.len()
            )));
        }
        if !directions.is_empty()
            && RationalMatrix::from_rows(directions.clone())?.rank() != directions.len()
        {
            return Err(Error::Input(
                "affine directions are linearly dependent".into(),
            ));
        }
        Ok(Self {
            ambient_dim: d,
            inner: Some(Flat { point, directions }),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_none()
    }

    pub fn point(&self) -> Option<&[Rational]> {
        self.inner.as_ref().map(|f| f.point.as_slice())
    }

    pub fn directions(&self) -> &[Vec<Rational>] {
        self.inner.as_ref().map_or(&[], |f| f.directions.as_slice())
    }

    /// Dimension of the subspace, `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        self.inner.as_ref().map(|f| f.directions.len())
    }

    /// `point + Σ cᵢ·directionᵢ`.
    pub fn sample(&self, coefficients: &[Rational]) -> Option<Vec<Rational>> {
        let flat = self.inner.as_ref()?;
        assert_eq!(coefficients.len(), flat.directions.len());
        let mut v = flat.point.clone();
        for (c, dir) in coefficients.iter().zip(&flat.directions) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(dir) {
                *x += c * y;
            }
        }
        Some(v)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        let Some(flat) = &self.inner else {
            return false;
        };
        if x.len() != self.ambient_dim {
            return false;
        }
        let diff: Vec<Rational> = x.iter().zip(&flat.point).map(|(a, b)| a - b).collect();
        in_span(&flat.directions, &diff, self.ambient_dim)
    }

    /// `self ⊆ other` as point sets.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        let Some(flat) = &self.inner else { return true };
        let Some(of) = &other.inner else { return false };
        other.contains(&flat.point)
            && flat
                .directions
                .iter()
                .all(|d| in_span(&of.directions, d, other.ambient_dim))
    }

    pub fn same_points(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.is_subset_of(other)
            && other.is_subset_of(self)
    }

    /// Implicit equations `(A, b)` with `self = {x : Ax = b}`.
    fn equations(&self) -> Option<(RationalMatrix, Vec<Rational>)> {
        let flat = self.inner.as_ref()?;
        let normals = if flat.directions.is_empty() {
            RationalMatrix::identity(self.ambient_dim).row_vectors()
        } else {
            RationalMatrix::from_rows(flat.directions.clone())
                .expect("directions share the ambient dimension")
                .kernel()
        };
        let rhs = normals.iter().map(|n| dot(n, &flat.point)).collect();
        let a = if normals.is_empty() {
            RationalMatrix::zeros(0, self.ambient_dim)
        } else {
            RationalMatrix::from_rows(normals).expect("normals share a length")
        };
        Some((a, rhs))
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

fn in_span(basis: &[Vec<Rational>], v: &[Rational], dim: usize) -> bool {
    if is_zero_vector(v) {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let m = RationalMatrix::from_columns(dim, basis);
    !solve_affine(&m, v).expect("shapes agree").is_empty()
}

/// All solutions of `Ax = b`, in canonical form.
pub fn solve_affine(a: &RationalMatrix, b: &[Rational]) -> Result<AffineSubspace> {
    let aug = a.augment(b)?;
    let (r, pivots) = aug.rref_with_pivots();
    let n = a.cols();
    if pivots.last() == Some(&n) {
        return Ok(AffineSubspace::empty(n));
    }
    let mut point = zero_vector(n);
    for (row, &p) in pivots.iter().enumerate() {
        point[p] = r[(row, n)].clone();
    }
    let directions = kernel_from_rref(&r, &pivots, n);
    Ok(AffineSubspace {
        ambient_dim: n,
        inner: Some(Flat { point, directions }),
    })
}

/// `S ∩ T`, computed by stacking the implicit equations of both and solving.
pub fn intersect_affine(s: &AffineSubspace, t: &AffineSubspace) -> Result<AffineSubspace> {
    if s.ambient_dim != t.ambient_dim {
        return Err(Error::DimensionMismatch(format!(
            "cannot intersect subspaces of Q^{} and Q^{}",
            s.ambient_dim, t.ambient_dim
        )));
    }
    let (Some((a1, b1)), Some((a2, b2))) = (s.equations(), t.equations()) else {
        return Ok(AffineSubspace::empty(s.ambient_dim));
    };
    let a = a1.vstack(&a2)?;
    let b: Vec<Rational> = b1.into_iter().chain(b2).collect();
    solve_affine(&a, &b)
}

/// For an inconsistent system `Ax = b`, a row functional `y` with `yA = 0`
/// and `y·b = 1`. Returns `None` when the system is consistent.
pub fn inconsistency_witness(a: &RationalMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    // yA = 0, y·b = 1  <=>  [Aᵀ; bᵀ] y = (0, …, 0, 1)
    let mut stacked = a.transpose();
    stacked = stacked.vstack(&RationalMatrix::from_rows(vec![b.to_vec()])?)?;
    let mut rhs = zero_vector(a.cols());
    rhs.push(Rational::one());
    let sol = solve_affine(&stacked, &rhs)?;
    Ok(sol.point().map(<[Rational]>::to_vec))
}

/// Smallest positive integer multiple of `v` with integer entries, used when
/// rendering certificates.
pub fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, q| {
        num_integer::lcm(acc, q.denom().clone())
    });
    v.iter()
        .map(|q| (q * Rational::from_integer(lcm.clone())).to_integer())
        .collect()
}

pub fn abs_max(v: &[Rational]) -> Rational {
    v.iter()
        .map(Signed::abs)
        .max()
        .unwrap_or_else(Rational::zero)
}
