use std::sync::Arc;

use crate::cdga::{Element, FreeCdga, GeneratorSet, Monomial};
use crate::error::{Error, Result};

/// A relative model `(B ⊗ ΛW, d)`: a base model `B`, fibre generators `W`
/// and their differentials in the total algebra.
///
/// The total algebra lists the base generators first, so a monomial is always
/// written `(base part)·(fibre part)`.
#[derive(Clone, Debug)]
pub struct RelativeModel {
    base: FreeCdga,
    fiber: Arc<GeneratorSet>,
    total: FreeCdga,
    linear_through: u32,
}

/// `dw = m + Σ m_l·w_l` with `m` and every `m_l` in the base.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm {
    pub constant: Element,
    /// `(fibre generator index, base coefficient)`, ordered by index.
    pub coefficients: Vec<(usize, Element)>,
}

impl RelativeModel {
    /// `fiber_diff[j]` is `d(w_j)` as an element over `base ∪ fiber`.
    ///
    /// Fails if `d² ≠ 0`, or if some fibre generator of degree
    /// `<= linear_through` has a differential that is not affine-linear in the
    /// fibre generators.
    pub fn new(
        base: FreeCdga,
        fiber: Arc<GeneratorSet>,
        fiber_diff: Vec<Element>,
        linear_through: u32,
    ) -> Result<Self> {
        if fiber_diff.len() != fiber.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} fibre differentials for {} fibre generators",
                fiber_diff.len(),
                fiber.len()
            )));
        }
        let gens = base.generators().concat(&fiber)?;
        let mut diffs = Vec::with_capacity(gens.len());
        for i in 0..base.generators().len() {
            diffs.push(base.generator_differential(i).embed(&gens)?);
        }
        for d in fiber_diff {
            if d.generators().as_ref() != gens.as_ref() {
                return Err(Error::GeneratorSetMismatch);
            }
            diffs.push(d.embed(&gens)?);
        }
        let total = FreeCdga::new(gens, diffs)?;
        let model = Self {
            base,
            fiber,
            total,
            linear_through,
        };
        for j in 0..model.fiber.len() {
            if model.fiber.degree(j) <= linear_through {
                model.linear_form(j)?;
            }
        }
        Ok(model)
    }

    pub fn base(&self) -> &FreeCdga {
        &self.base
    }

    pub fn fiber(&self) -> &Arc<GeneratorSet> {
        &self.fiber
    }

    pub fn total(&self) -> &FreeCdga {
        &self.total
    }

    pub fn linear_through(&self) -> u32 {
        self.linear_through
    }

    /// Index of fibre generator `j` in the total algebra.
    pub fn total_index(&self, j: usize) -> usize {
        self.base.generators().len() + j
    }

    pub fn fiber_differential(&self, j: usize) -> &Element {
        self.total.generator_differential(self.total_index(j))
    }

    /// Splits `d(w_j)` into its constant and fibre-linear parts.
    pub fn linear_form(&self, j: usize) -> Result<LinearForm> {
        let nb = self.base.generators().len();
        let base_gens = self.base.generators();
        let mut constant = Element::zero(base_gens);
        let mut coefficients: Vec<(usize, Element)> = Vec::new();
        for (m, c) in self.fiber_differential(j).terms() {
            let base_part = Monomial::from_exponents(m.exponents()[..nb].to_vec());
            let fiber_exps = &m.exponents()[nb..];
            let term = Element::monomial(base_gens, base_part, c.clone());
            match fiber_exps.iter().sum::<u32>() {
                0 => constant = constant.add(&term)?,
                1 => {
                    let l = fiber_exps.iter().position(|&e| e == 1).expect("weight one");
                    match coefficients.iter_mut().find(|(k, _)| *k == l) {
                        Some((_, e)) => *e = e.add(&term)?,
                        None => coefficients.push((l, term)),
                    }
                }
                _ => {
                    return Err(Error::Unsupported(format!(
                        "d({}) = {} is not linear in the fibre generators",
                        self.fiber.get(j).name,
                        self.fiber_differential(j)
                    )))
                }
            }
        }
        coefficients.retain(|(_, e)| !e.is_zero());
        coefficients.sort_by_key(|(l, _)| *l);
        Ok(LinearForm {
            constant,
            coefficients,
        })
    }

    /// True when every fibre differential lies in the base.
    pub fn is_fiber_constant(&self) -> bool {
        (0..self.fiber.len()).all(|j| {
            self.fiber_differential(j)
                .terms()
                .all(|(m, _)| m.weight_from(self.base.generators().len()) == 0)
        })
    }
}
