use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::generators::GeneratorSet;
use super::monomial::Monomial;
use crate::error::{Error, Result};
use crate::linalg::{format_rational, Rational};

/// A graded-commutative polynomial with exact rational coefficients.
///
/// Zero coefficients are never stored. Elements need not be homogeneous;
/// [`Element::degree`] reports the common degree when there is one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    gens: Arc<GeneratorSet>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Element {
    pub fn zero(gens: &Arc<GeneratorSet>) -> Self {
        Self {
            gens: Arc::clone(gens),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(gens: &Arc<GeneratorSet>) -> Self {
        Self::monomial(gens, Monomial::one(gens.len()), Rational::one())
    }

    pub fn scalar(gens: &Arc<GeneratorSet>, c: Rational) -> Self {
        Self::monomial(gens, Monomial::one(gens.len()), c)
    }

    pub fn generator(gens: &Arc<GeneratorSet>, i: usize) -> Self {
        Self::monomial(gens, Monomial::generator(gens.len(), i), Rational::one())
    }

    /// Generator looked up by name.
    pub fn named(gens: &Arc<GeneratorSet>, name: &str) -> Result<Self> {
        let i = gens
            .index_of(name)
            .ok_or_else(|| Error::Input(format!("unknown generator `{name}`")))?;
        Ok(Self::generator(gens, i))
    }

    pub fn monomial(gens: &Arc<GeneratorSet>, m: Monomial, c: Rational) -> Self {
        let mut e = Self::zero(gens);
        if !c.is_zero() {
            e.terms.insert(m, c);
        }
        e
    }

    /// Collects `(coefficient, monomial)` pairs, validating each monomial.
    pub fn from_terms(
        gens: &Arc<GeneratorSet>,
        terms: impl IntoIterator<Item = (Rational, Monomial)>,
    ) -> Result<Self> {
        let mut e = Self::zero(gens);
        for (c, m) in terms {
            if !m.is_valid_for(gens) {
                return Err(Error::Input(format!(
                    "monomial {:?} is not valid over {:?}",
                    m.exponents(),
                    gens
                )));
            }
            e.add_term(m, c);
        }
        Ok(e)
    }

    pub fn generators(&self) -> &Arc<GeneratorSet> {
        &self.gens
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common degree of all terms; `None` for zero or inhomogeneous elements.
    pub fn degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| m.degree(&self.gens));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// True when zero or homogeneous of degree `k`.
    pub fn is_homogeneous_of(&self, k: u32) -> bool {
        self.terms.keys().all(|m| m.degree(&self.gens) == k)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.gens, &other.gens) || self.gens == other.gens {
            Ok(())
        } else {
            Err(Error::GeneratorSetMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.gens);
        }
        Self {
            gens: Arc::clone(&self.gens),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Graded-commutative product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(&self.gens);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, negative)) = ma.mul(mb, &self.gens) {
                    let c = ca * cb;
                    out.add_term(m, if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut out = Self::one(&self.gens);
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Re-expresses the element over `target`, of which the current generator
    /// set must be an initial segment.
    pub fn embed(&self, target: &Arc<GeneratorSet>) -> Result<Self> {
        if !self.gens.is_prefix_of(target) {
            return Err(Error::GeneratorSetMismatch);
        }
        Ok(Self {
            gens: Arc::clone(target),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.extend_to(target.len()), c.clone()))
                .collect(),
        })
    }

    /// Inverse of [`Element::embed`]: drops trailing generators, failing if
    /// any term uses them.
    pub fn restrict_to(&self, prefix: &Arc<GeneratorSet>) -> Result<Self> {
        if !prefix.is_prefix_of(&self.gens) {
            return Err(Error::GeneratorSetMismatch);
        }
        let n = prefix.len();
        let mut out = Self::zero(prefix);
        for (m, c) in &self.terms {
            if m.weight_from(n) != 0 {
                return Err(Error::Input(format!(
                    "term {} does not lie in the subalgebra on {:?}",
                    m.render(&self.gens),
                    prefix
                )));
            }
            out.add_term(
                Monomial::from_exponents(m.exponents()[..n].to_vec()),
                c.clone(),
            );
        }
        Ok(out)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let abs = c.abs();
            if m.is_one() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", m.render(&self.gens))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), m.render(&self.gens))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}
