use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};

use super::algebra::{GradedAlgebra, GradedVector};
use super::element::Element;
use super::generators::GeneratorSet;
use super::monomial::Monomial;
use crate::error::{Error, Result};
use crate::linalg::{zero_vector, AffineSubspace, Rational, RationalMatrix};

/// All monomials of degree exactly `k`, in canonical order.
pub fn basis_of_degree(gens: &GeneratorSet, k: u32) -> Vec<Monomial> {
    fn go(
        gens: &GeneratorSet,
        i: usize,
        remaining: u32,
        exps: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if i == gens.len() {
            if remaining == 0 {
                out.push(Monomial::from_exponents(exps.clone()));
            }
            return;
        }
        let deg = gens.degree(i);
        let max = if gens.is_odd(i) {
            (remaining >= deg) as u32
        } else {
            remaining / deg
        };
        // largest exponent first gives descending lexicographic order
        for e in (0..=max).rev() {
            exps.push(e);
            go(gens, i + 1, remaining - e * deg, exps, out);
            exps.pop();
        }
    }
    let mut out = Vec::new();
    go(gens, 0, k, &mut Vec::with_capacity(gens.len()), &mut out);
    out
}

/// Coordinates of a homogeneous element in `basis`.
pub fn coordinates(a: &Element, basis: &[Monomial]) -> Result<Vec<Rational>> {
    let mut v = zero_vector(basis.len());
    for (m, c) in a.terms() {
        let i = basis.binary_search(m).map_err(|_| {
            Error::Internal(format!(
                "monomial {} is missing from the enumerated basis",
                m.render(a.generators())
            ))
        })?;
        v[i] = c.clone();
    }
    Ok(v)
}

pub fn element_from_coordinates(
    gens: &Arc<GeneratorSet>,
    basis: &[Monomial],
    v: &[Rational],
) -> Element {
    assert_eq!(basis.len(), v.len());
    Element::from_terms(gens, v.iter().cloned().zip(basis.iter().cloned()))
        .expect("basis monomials are valid")
}

/// Leibniz extension of the generator differentials `diffs` to `a`.
fn leibniz(gens: &Arc<GeneratorSet>, diffs: &[Element], a: &Element) -> Result<Element> {
    let n = gens.len();
    let mut out = Element::zero(gens);
    for (m, c) in a.terms() {
        for i in 0..n {
            let e = m.exponents()[i];
            if e == 0 || diffs[i].is_zero() {
                continue;
            }
            // d(P · g^e · S) = (−1)^|P| · P · (e g^(e−1) dg) · S, with g even when e > 1
            let prefix = m.restrict(0..i);
            let suffix = m.restrict(i + 1..n);
            let mut power = Monomial::one(n).exponents().to_vec();
            power[i] = e - 1;
            let sign = if prefix.degree(gens) % 2 == 1 {
                -Rational::one()
            } else {
                Rational::one()
            };
            let coeff = c * Rational::from_integer(e.into()) * sign;
            let left = Element::monomial(gens, prefix, coeff).mul(&Element::monomial(
                gens,
                Monomial::from_exponents(power),
                Rational::one(),
            ))?;
            let term =
                left.mul(&diffs[i])?
                    .mul(&Element::monomial(gens, suffix, Rational::one()))?;
            out = out.add(&term)?;
        }
    }
    Ok(out)
}

/// Free graded-commutative algebra `ΛV` on finitely many generators of degree
/// at least 2, with a differential fixed by its values on generators.
pub struct FreeCdga {
    gens: Arc<GeneratorSet>,
    diff: Vec<Element>,
    zero_diff: bool,
    bases: RwLock<BTreeMap<u32, Arc<Vec<Monomial>>>>,
    diff_matrices: RwLock<BTreeMap<u32, Arc<RationalMatrix>>>,
}

impl Clone for FreeCdga {
    fn clone(&self) -> Self {
        Self::unchecked(Arc::clone(&self.gens), self.diff.clone())
    }
}

impl PartialEq for FreeCdga {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens && self.diff == other.diff
    }
}

impl Eq for FreeCdga {}

impl fmt::Debug for FreeCdga {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = f.debug_struct("FreeCdga");
        s.field("generators", &self.gens);
        for (g, d) in self.gens.iter().zip(&self.diff) {
            s.field(&format!("d({})", g.name), &format_args!("{d}"));
        }
        s.finish()
    }
}

impl FreeCdga {
    fn unchecked(gens: Arc<GeneratorSet>, diff: Vec<Element>) -> Self {
        let zero_diff = diff.iter().all(Element::is_zero);
        Self {
            gens,
            diff,
            zero_diff,
            bases: RwLock::default(),
            diff_matrices: RwLock::default(),
        }
    }

    /// Validates `deg(dg) = deg(g) + 1` and `d(dg) = 0` on every generator.
    pub fn new(gens: Arc<GeneratorSet>, diff: Vec<Element>) -> Result<Self> {
        if diff.len() != gens.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} differentials for {} generators",
                diff.len(),
                gens.len()
            )));
        }
        for (g, d) in gens.iter().zip(&diff) {
            if d.generators().as_ref() != gens.as_ref() {
                return Err(Error::GeneratorSetMismatch);
            }
            if !d.is_homogeneous_of(g.degree + 1) {
                return Err(Error::InvalidDifferential(format!(
                    "d({}) = {d} is not homogeneous of degree {}",
                    g.name,
                    g.degree + 1
                )));
            }
        }
        let diff: Vec<Element> = diff
            .into_iter()
            .map(|d| d.embed(&gens))
            .collect::<Result<_>>()?;
        for (g, d) in gens.iter().zip(&diff) {
            let dd = leibniz(&gens, &diff, d)?;
            if !dd.is_zero() {
                return Err(Error::InvalidDifferential(format!(
                    "d(d({})) = {dd} ≠ 0",
                    g.name
                )));
            }
        }
        Ok(Self::unchecked(gens, diff))
    }

    pub fn with_zero_differential(gens: Arc<GeneratorSet>) -> Self {
        let diff = (0..gens.len()).map(|_| Element::zero(&gens)).collect();
        Self::unchecked(gens, diff)
    }

    /// Builds from `(name, degree, differential)` triples where each
    /// differential is a closure over the generator set built so far.
    pub fn from_named<F>(spec: &[(&str, u32)], diffs: F) -> Result<Self>
    where
        F: FnOnce(&Arc<GeneratorSet>) -> Result<Vec<Element>>,
    {
        let gens = GeneratorSet::new(spec.iter().map(|&(n, d)| (n, d)))?;
        let diff = diffs(&gens)?;
        Self::new(gens, diff)
    }

    pub fn generators(&self) -> &Arc<GeneratorSet> {
        &self.gens
    }

    pub fn generator_differential(&self, i: usize) -> &Element {
        &self.diff[i]
    }

    pub fn generator(&self, name: &str) -> Result<Element> {
        Element::named(&self.gens, name)
    }

    pub fn apply_diff(&self, a: &Element) -> Result<Element> {
        if a.generators().as_ref() != self.gens.as_ref() {
            return Err(Error::GeneratorSetMismatch);
        }
        if self.zero_diff {
            return Ok(Element::zero(&self.gens));
        }
        leibniz(&self.gens, &self.diff, a)
    }

    pub fn basis(&self, k: u32) -> Arc<Vec<Monomial>> {
        if let Some(b) = self.bases.read().expect("basis cache poisoned").get(&k) {
            return Arc::clone(b);
        }
        let b = Arc::new(basis_of_degree(&self.gens, k));
        self.bases
            .write()
            .expect("basis cache poisoned")
            .insert(k, Arc::clone(&b));
        b
    }

    pub fn coordinates(&self, a: &Element, k: u32) -> Result<Vec<Rational>> {
        if !a.is_homogeneous_of(k) {
            return Err(Error::IllGraded(format!(
                "{a} is not homogeneous of degree {k}"
            )));
        }
        coordinates(a, &self.basis(k))
    }

    pub fn to_vector(&self, a: &Element, k: u32) -> Result<GradedVector> {
        Ok(GradedVector::new(k, self.coordinates(a, k)?))
    }

    pub fn to_element(&self, v: &GradedVector) -> Result<Element> {
        self.check_vector(v)?;
        Ok(element_from_coordinates(
            &self.gens,
            &self.basis(v.degree),
            &v.coords,
        ))
    }

    /// Some `b` with `db = a`, for a closed homogeneous `a` of degree `k`.
    pub fn exact_element_witness(&self, a: &Element, k: u32) -> Result<Option<Element>> {
        let v = self.to_vector(a, k)?;
        match self.exact_witness(&v)? {
            Some(w) if k > 0 => Ok(Some(self.to_element(&w)?)),
            Some(_) => Ok(Some(Element::zero(&self.gens))),
            None => Ok(None),
        }
    }

    pub fn cohomology_dims(&self, max_degree: u32) -> Vec<usize> {
        (0..=max_degree).map(|k| self.cohomology_dim(k)).collect()
    }

    pub fn cocycle_space(&self, k: u32) -> AffineSubspace {
        self.cocycles(k)
    }
}

impl GradedAlgebra for FreeCdga {
    fn dim(&self, degree: u32) -> usize {
        self.basis(degree).len()
    }

    fn differential_matrix(&self, degree: u32) -> RationalMatrix {
        if let Some(m) = self
            .diff_matrices
            .read()
            .expect("matrix cache poisoned")
            .get(&degree)
        {
            return m.as_ref().clone();
        }
        let src = self.basis(degree);
        let dst = self.basis(degree + 1);
        let mut m = RationalMatrix::zeros(dst.len(), src.len());
        if !self.zero_diff {
            for (j, mono) in src.iter().enumerate() {
                let image = leibniz(
                    &self.gens,
                    &self.diff,
                    &Element::monomial(&self.gens, mono.clone(), Rational::one()),
                )
                .expect("generator sets agree");
                for (i, x) in coordinates(&image, &dst)
                    .expect("differential preserves grading")
                    .into_iter()
                    .enumerate()
                {
                    if !x.is_zero() {
                        m[(i, j)] = x;
                    }
                }
            }
        }
        self.diff_matrices
            .write()
            .expect("matrix cache poisoned")
            .insert(degree, Arc::new(m.clone()));
        m
    }

    fn product(&self, a: &GradedVector, b: &GradedVector) -> Result<GradedVector> {
        let p = self.to_element(a)?.mul(&self.to_element(b)?)?;
        self.to_vector(&p, a.degree + b.degree)
    }

    fn unit(&self) -> GradedVector {
        GradedVector::new(0, vec![Rational::one()])
    }

    fn top_degree(&self) -> Option<u32> {
        // finite exactly when every generator is odd
        self.gens
            .iter()
            .all(|g| g.is_odd())
            .then(|| self.gens.iter().map(|g| g.degree).sum())
    }

    fn basis_labels(&self, degree: u32) -> Vec<String> {
        self.basis(degree)
            .iter()
            .map(|m| m.render(&self.gens))
            .collect()
    }

    fn has_zero_differential(&self) -> bool {
        self.zero_diff
    }

    fn apply_differential(&self, a: &GradedVector) -> Result<GradedVector> {
        self.check_vector(a)?;
        if self.zero_diff {
            return Ok(self.zero(a.degree + 1));
        }
        let image = self.apply_diff(&self.to_element(a)?)?;
        self.to_vector(&image, a.degree + 1)
    }
}
