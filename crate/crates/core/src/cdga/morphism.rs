use super::algebra::{GradedAlgebra, GradedVector};
use super::element::Element;
use super::free::FreeCdga;
use crate::error::{Error, Result};

/// A dga map out of a free model, determined by generator images.
///
/// Construction checks degrees and `φ(dg) = d(φg)` on every generator, which
/// by the Leibniz rule is enough for `φ∘d = d∘φ` everywhere.
pub struct CdgaMorphism<'a, T: GradedAlgebra + ?Sized> {
    source: &'a FreeCdga,
    target: &'a T,
    images: Vec<GradedVector>,
}

impl<'a, T: GradedAlgebra + ?Sized> CdgaMorphism<'a, T> {
    pub fn new(source: &'a FreeCdga, target: &'a T, images: Vec<GradedVector>) -> Result<Self> {
        let m = Self::unvalidated(source, target, images)?;
        if let Some(name) = m.first_chain_map_failure(None)? {
            return Err(Error::Input(format!(
                "morphism does not commute with the differential on generator `{name}`"
            )));
        }
        Ok(m)
    }

    /// Checks shapes and degrees only.
    pub fn unvalidated(
        source: &'a FreeCdga,
        target: &'a T,
        images: Vec<GradedVector>,
    ) -> Result<Self> {
        let gens = source.generators();
        if images.len() != gens.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} generators",
                images.len(),
                gens.len()
            )));
        }
        for (g, img) in gens.iter().zip(&images) {
            if img.degree != g.degree {
                return Err(Error::IllGraded(format!(
                    "image of `{}` has degree {}, expected {}",
                    g.name, img.degree, g.degree
                )));
            }
            target.check_vector(img)?;
        }
        Ok(Self {
            source,
            target,
            images,
        })
    }

    pub fn source(&self) -> &FreeCdga {
        self.source
    }

    pub fn target(&self) -> &T {
        self.target
    }

    pub fn images(&self) -> &[GradedVector] {
        &self.images
    }

    /// `φ(a)` for `a` homogeneous of degree `k` (or zero).
    pub fn apply(&self, a: &Element, k: u32) -> Result<GradedVector> {
        if a.generators().as_ref() != self.source.generators().as_ref() {
            return Err(Error::GeneratorSetMismatch);
        }
        if !a.is_homogeneous_of(k) {
            return Err(Error::IllGraded(format!(
                "{a} is not homogeneous of degree {k}"
            )));
        }
        let mut out = self.target.zero(k);
        for (m, c) in a.terms() {
            let mut acc = self.target.unit();
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    acc = self.target.product(&acc, &self.images[i])?;
                }
            }
            if !acc.is_zero() {
                out = out.add(&acc.scale(c))?;
            }
        }
        Ok(out)
    }

    /// Name of the first generator (among those of degree `<= max_degree`,
    /// if given) on which `φ∘d ≠ d∘φ`.
    pub fn first_chain_map_failure(&self, max_degree: Option<u32>) -> Result<Option<String>> {
        for (i, g) in self.source.generators().iter().enumerate() {
            if max_degree.is_some_and(|m| g.degree > m) {
                continue;
            }
            let lhs = self.apply(self.source.generator_differential(i), g.degree + 1)?;
            let rhs = self.target.apply_differential(&self.images[i])?;
            if lhs != rhs {
                return Ok(Some(g.name.clone()));
            }
        }
        Ok(None)
    }
}

impl<'a> CdgaMorphism<'a, FreeCdga> {
    /// Images given as elements of a free target.
    pub fn from_elements(
        source: &'a FreeCdga,
        target: &'a FreeCdga,
        images: &[Element],
    ) -> Result<Self> {
        let gens = source.generators();
        if images.len() != gens.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} generators",
                images.len(),
                gens.len()
            )));
        }
        let vectors = gens
            .iter()
            .zip(images)
            .map(|(g, e)| target.to_vector(e, g.degree))
            .collect::<Result<Vec<_>>>()?;
        CdgaMorphism::new(source, target, vectors)
    }
}
