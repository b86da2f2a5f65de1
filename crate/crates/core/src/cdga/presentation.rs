use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::algebra::{GradedAlgebra, GradedVector};
use crate::error::{Error, Result};
use crate::linalg::{is_zero_vector, zero_vector, Rational, RationalMatrix};

/// A finite-dimensional graded-commutative algebra given degree by degree:
/// basis names in degrees `0..=top`, a product table on basis pairs, and
/// optionally a differential.
///
/// This is the usual way to hand over the rational cohomology ring of a
/// manifold, in which case the differential is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePresentation {
    basis: Vec<Vec<String>>,
    /// `(deg a, index a, deg b, index b) → coordinates of a·b`, nonzero entries only.
    products: BTreeMap<(u32, usize, u32, usize), Vec<Rational>>,
    /// `differential[k]` is `d: A^k → A^(k+1)`.
    differential: Vec<RationalMatrix>,
    zero_diff: bool,
}

/// One entry of a product table: `left · right = coefficients` in degree
/// `|left| + |right|`.
#[derive(Clone, Debug)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub coefficients: Vec<Rational>,
}

fn koszul(da: u32, db: u32) -> bool {
    da % 2 == 1 && db % 2 == 1
}

impl FinitePresentation {
    /// Validates and completes a presentation.
    ///
    /// Products with the unit are implicit. A product given for `(a, b)` but
    /// not `(b, a)` is completed by graded commutativity; unlisted pairs are
    /// zero. Associativity, graded commutativity, `d² = 0` and the Leibniz
    /// rule are all checked on basis elements.
    pub fn new(
        basis: Vec<Vec<String>>,
        products: Vec<ProductEntry>,
        differentials: BTreeMap<u32, RationalMatrix>,
    ) -> Result<Self> {
        if basis.is_empty() || basis[0].len() != 1 {
            return Err(Error::Input(
                "degree 0 must have exactly one basis element (the unit)".into(),
            ));
        }
        let top = basis.len() as u32 - 1;
        let mut index: BTreeMap<&str, (u32, usize)> = BTreeMap::new();
        for (deg, names) in basis.iter().enumerate() {
            for (i, name) in names.iter().enumerate() {
                if index.insert(name.as_str(), (deg as u32, i)).is_some() {
                    return Err(Error::Input(format!("duplicate basis name `{name}`")));
                }
            }
        }
        let dim = |k: u32| if k <= top { basis[k as usize].len() } else { 0 };

        let mut table: BTreeMap<(u32, usize, u32, usize), Vec<Rational>> = BTreeMap::new();
        let mut given: BTreeMap<(u32, usize, u32, usize), Vec<Rational>> = BTreeMap::new();
        for p in &products {
            let lookup = |n: &str| {
                index.get(n).copied().ok_or_else(|| {
                    Error::Input(format!("unknown basis element `{n}` in product table"))
                })
            };
            let (da, ia) = lookup(&p.left)?;
            let (db, ib) = lookup(&p.right)?;
            let want = dim(da + db);
            let coeffs = if p.coefficients.is_empty() && want == 0 {
                Vec::new()
            } else if p.coefficients.len() != want {
                return Err(Error::DimensionMismatch(format!(
                    "product {}·{} lands in degree {} of dimension {want}, got {} coefficients",
                    p.left,
                    p.right,
                    da + db,
                    p.coefficients.len()
                )));
            } else {
                p.coefficients.clone()
            };
            if given.insert((da, ia, db, ib), coeffs).is_some() {
                return Err(Error::Input(format!(
                    "product {}·{} listed twice",
                    p.left, p.right
                )));
            }
        }
        for (&(da, ia, db, ib), c) in &given {
            let swapped: Vec<Rational> = if koszul(da, db) {
                c.iter().map(|x| -x).collect()
            } else {
                c.clone()
            };
            if let Some(other) = given.get(&(db, ib, da, ia)) {
                if *other != swapped {
                    return Err(Error::Input(format!(
                        "product table violates graded commutativity for {}·{}",
                        basis[da as usize][ia], basis[db as usize][ib]
                    )));
                }
            }
            if !is_zero_vector(c) {
                table.insert((da, ia, db, ib), c.clone());
                table.insert((db, ib, da, ia), swapped);
            }
        }

        let mut differential = Vec::with_capacity(basis.len());
        for (&k, m) in &differentials {
            if k > top {
                return Err(Error::Input(format!(
                    "differential given in degree {k} above the top degree {top}"
                )));
            }
            if m.rows() != dim(k + 1) || m.cols() != dim(k) {
                // an empty source or target may be written with no rows
                if !(m.rows() == 0 && (dim(k) == 0 || dim(k + 1) == 0)) {
                    return Err(Error::DimensionMismatch(format!(
                        "differential in degree {k} should be {}x{}, got {}x{}",
                        dim(k + 1),
                        dim(k),
                        m.rows(),
                        m.cols()
                    )));
                }
            }
        }
        for k in 0..=top {
            let m = differentials
                .get(&k)
                .filter(|m| m.rows() == dim(k + 1) && m.cols() == dim(k))
                .cloned()
                .unwrap_or_else(|| RationalMatrix::zeros(dim(k + 1), dim(k)));
            differential.push(m);
        }
        let zero_diff = differential.iter().all(RationalMatrix::is_zero);
        let pres = Self {
            basis,
            products: table,
            differential,
            zero_diff,
        };
        pres.validate_unit(&given)?;
        pres.validate_associativity()?;
        pres.validate_differential()?;
        Ok(pres)
    }

    /// Graded-commutative algebra with zero differential.
    pub fn cohomology_ring(basis: Vec<Vec<String>>, products: Vec<ProductEntry>) -> Result<Self> {
        Self::new(basis, products, BTreeMap::new())
    }

    /// `Q[x]/(x^(k+1))` with `|x| = degree` even, basis named `x`, `x^2`, ….
    pub fn truncated_polynomial(name: &str, degree: u32, k: u32) -> Result<Self> {
        if degree == 0 || degree % 2 == 1 {
            return Err(Error::Input(
                "truncated polynomial generator must have positive even degree".into(),
            ));
        }
        let top = degree * k;
        let mut basis = vec![Vec::new(); top as usize + 1];
        basis[0].push("1".to_string());
        let label = |p: u32| {
            if p == 1 {
                name.to_string()
            } else {
                format!("{name}^{p}")
            }
        };
        for p in 1..=k {
            basis[(p * degree) as usize].push(label(p));
        }
        let mut products = Vec::new();
        for p in 1..=k {
            for q in p..=k {
                if p + q <= k {
                    products.push(ProductEntry {
                        left: label(p),
                        right: label(q),
                        coefficients: vec![Rational::one()],
                    });
                }
            }
        }
        Self::cohomology_ring(basis, products)
    }

    pub fn basis_names(&self) -> &[Vec<String>] {
        &self.basis
    }

    pub fn differentials(&self) -> &[RationalMatrix] {
        &self.differential
    }

    /// Nonzero product-table entries, keyed by `(deg a, index a, deg b, index b)`.
    pub fn product_table(&self) -> &BTreeMap<(u32, usize, u32, usize), Vec<Rational>> {
        &self.products
    }

    pub fn top(&self) -> u32 {
        self.basis.len() as u32 - 1
    }

    pub fn locate(&self, name: &str) -> Option<(u32, usize)> {
        self.basis
            .iter()
            .enumerate()
            .find_map(|(d, names)| names.iter().position(|n| n == name).map(|i| (d as u32, i)))
    }

    /// Product of two basis elements, as coordinates in degree `da + db`.
    pub fn basis_product(&self, da: u32, ia: usize, db: u32, ib: usize) -> Vec<Rational> {
        let n = self.dim(da + db);
        if da == 0 {
            let mut v = zero_vector(n);
            v[ib] = Rational::one();
            return v;
        }
        if db == 0 {
            let mut v = zero_vector(n);
            v[ia] = Rational::one();
            return v;
        }
        self.products
            .get(&(da, ia, db, ib))
            .cloned()
            .unwrap_or_else(|| zero_vector(n))
    }

    fn basis_vector(&self, k: u32, i: usize) -> GradedVector {
        let mut v = zero_vector(self.dim(k));
        v[i] = Rational::one();
        GradedVector::new(k, v)
    }

    fn all_basis(&self) -> Vec<(u32, usize)> {
        self.basis
            .iter()
            .enumerate()
            .flat_map(|(d, names)| (0..names.len()).map(move |i| (d as u32, i)))
            .collect()
    }

    fn validate_unit(
        &self,
        given: &BTreeMap<(u32, usize, u32, usize), Vec<Rational>>,
    ) -> Result<()> {
        for (&(da, ia, db, ib), c) in given {
            if da == 0 || db == 0 {
                let expect = self.basis_product(da, ia, db, ib);
                if *c != expect {
                    return Err(Error::Input(
                        "product with the unit must be the identity".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn validate_associativity(&self) -> Result<()> {
        let all = self.all_basis();
        for &(da, ia) in &all {
            for &(db, ib) in &all {
                if da + db > self.top() || da == 0 || db == 0 {
                    continue;
                }
                let ab = GradedVector::new(da + db, self.basis_product(da, ia, db, ib));
                for &(dc, ic) in &all {
                    if da + db + dc > self.top() || dc == 0 {
                        continue;
                    }
                    let c = self.basis_vector(dc, ic);
                    let left = self.product(&ab, &c)?;
                    let bc = GradedVector::new(db + dc, self.basis_product(db, ib, dc, ic));
                    let right = self.product(&self.basis_vector(da, ia), &bc)?;
                    if left != right {
                        return Err(Error::Input(format!(
                            "product table is not associative on ({}, {}, {})",
                            self.basis[da as usize][ia],
                            self.basis[db as usize][ib],
                            self.basis[dc as usize][ic]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn validate_differential(&self) -> Result<()> {
        if self.zero_diff {
            return Ok(());
        }
        for k in 0..self.top() {
            if !self.differential[k as usize + 1]
                .mul(&self.differential[k as usize])?
                .is_zero()
            {
                return Err(Error::InvalidDifferential(format!(
                    "d∘d ≠ 0 starting in degree {k}"
                )));
            }
        }
        if !self.differential[0].is_zero() {
            return Err(Error::InvalidDifferential("the unit must be closed".into()));
        }
        let all = self.all_basis();
        for &(da, ia) in &all {
            for &(db, ib) in &all {
                if da + db > self.top() {
                    continue;
                }
                let a = self.basis_vector(da, ia);
                let b = self.basis_vector(db, ib);
                let lhs = self.apply_differential(&self.product(&a, &b)?)?;
                let mut rhs = self.product(&self.apply_differential(&a)?, &b)?;
                let second = self.product(&a, &self.apply_differential(&b)?)?;
                rhs = rhs.add(&if da % 2 == 1 {
                    second.scale(&-Rational::one())
                } else {
                    second
                })?;
                if lhs != rhs {
                    return Err(Error::InvalidDifferential(format!(
                        "Leibniz rule fails on {}·{}",
                        self.basis[da as usize][ia], self.basis[db as usize][ib]
                    )));
                }
            }
        }
        Ok(())
    }
}

impl GradedAlgebra for FinitePresentation {
    fn dim(&self, degree: u32) -> usize {
        self.basis.get(degree as usize).map_or(0, Vec::len)
    }

    fn differential_matrix(&self, degree: u32) -> RationalMatrix {
        self.differential
            .get(degree as usize)
            .cloned()
            .unwrap_or_else(|| RationalMatrix::zeros(self.dim(degree + 1), self.dim(degree)))
    }

    fn product(&self, a: &GradedVector, b: &GradedVector) -> Result<GradedVector> {
        self.check_vector(a)?;
        self.check_vector(b)?;
        let k = a.degree + b.degree;
        let mut out = zero_vector(self.dim(k));
        if out.is_empty() {
            return Ok(GradedVector::new(k, out));
        }
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let p = self.basis_product(a.degree, i, b.degree, j);
                let xy = x * y;
                for (o, c) in out.iter_mut().zip(&p) {
                    if !c.is_zero() {
                        *o += &xy * c;
                    }
                }
            }
        }
        Ok(GradedVector::new(k, out))
    }

    fn unit(&self) -> GradedVector {
        GradedVector::new(0, vec![Rational::one()])
    }

    fn top_degree(&self) -> Option<u32> {
        Some(self.top())
    }

    fn basis_labels(&self, degree: u32) -> Vec<String> {
        self.basis.get(degree as usize).cloned().unwrap_or_default()
    }

    fn has_zero_differential(&self) -> bool {
        self.zero_diff
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn names(xs: &[&[&str]]) -> Vec<Vec<String>> {
        xs.iter()
            .map(|d| d.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    #[test]
    fn cp2_ring() {
        let a = FinitePresentation::truncated_polynomial("x", 2, 2).unwrap();
        assert_eq!(a.top(), 4);
        let x = GradedVector::new(2, vec![rat(1)]);
        assert_eq!(
            a.product(&x, &x).unwrap(),
            GradedVector::new(4, vec![rat(1)])
        );
        assert_eq!(
            a.product(&a.product(&x, &x).unwrap(), &x)
                .unwrap()
                .coords
                .len(),
            0
        );
        assert_eq!(
            (0..=4).map(|k| a.cohomology_dim(k)).collect::<Vec<_>>(),
            vec![1, 0, 1, 0, 1]
        );
    }

    #[test]
    fn odd_products_completed_with_sign() {
        // S³ × S³: a·b = ab, so b·a = −ab
        let p = FinitePresentation::cohomology_ring(
            names(&[&["1"], &[], &[], &["a", "b"], &[], &[], &["ab"]]),
            vec![ProductEntry {
                left: "a".into(),
                right: "b".into(),
                coefficients: vec![rat(1)],
            }],
        )
        .unwrap();
        let a = GradedVector::new(3, vec![rat(1), rat(0)]);
        let b = GradedVector::new(3, vec![rat(0), rat(1)]);
        assert_eq!(p.product(&b, &a).unwrap().coords, vec![rat(-1)]);
    }

    #[test]
    fn inconsistent_commutativity_rejected() {
        let r = FinitePresentation::cohomology_ring(
            names(&[&["1"], &[], &[], &["a", "b"], &[], &[], &["ab"]]),
            vec![
                ProductEntry {
                    left: "a".into(),
                    right: "b".into(),
                    coefficients: vec![rat(1)],
                },
                ProductEntry {
                    left: "b".into(),
                    right: "a".into(),
                    coefficients: vec![rat(1)],
                },
            ],
        );
        assert!(r.is_err());
    }

    #[test]
    fn non_associative_table_rejected() {
        // (x·y)·y = top but x·(y·y) = 0
        let r = FinitePresentation::cohomology_ring(
            names(&[&["1"], &[], &["x", "y"], &[], &["xy", "yy"], &[], &["top"]]),
            vec![
                ProductEntry {
                    left: "x".into(),
                    right: "y".into(),
                    coefficients: vec![rat(1), rat(0)],
                },
                ProductEntry {
                    left: "y".into(),
                    right: "y".into(),
                    coefficients: vec![rat(0), rat(0)],
                },
                ProductEntry {
                    left: "xy".into(),
                    right: "y".into(),
                    coefficients: vec![rat(1)],
                },
            ],
        );
        assert!(r.is_err());
    }

    #[test]
    fn differential_validated() {
        // d(a) = b; every product of positive-degree classes lands above the top
        let mut d = BTreeMap::new();
        d.insert(2, RationalMatrix::from_i64_rows(&[&[1]]));
        let p = FinitePresentation::new(names(&[&["1"], &[], &["a"], &["b"]]), vec![], d).unwrap();
        assert!(!p.has_zero_differential());
        assert_eq!(
            (0..=3).map(|k| p.cohomology_dim(k)).collect::<Vec<_>>(),
            vec![1, 0, 0, 0]
        );
        let a = GradedVector::new(3, vec![rat(1)]);
        assert_eq!(
            p.exact_witness(&a).unwrap(),
            Some(GradedVector::new(2, vec![rat(1)]))
        );
    }

    #[test]
    fn unit_must_be_single() {
        assert!(FinitePresentation::cohomology_ring(names(&[&["1", "u"]]), vec![]).is_err());
    }
}
