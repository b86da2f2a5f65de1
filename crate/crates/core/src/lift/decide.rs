use std::collections::BTreeMap;

use super::relative::RelativeModel;
use super::system::{solve_linear_dga_system, LinearDgaSystem};
use crate::cdga::{CdgaMorphism, Element, FreeCdga, GradedAlgebra, GradedVector};
use crate::error::{Error, Result};
use crate::linalg::{
    inconsistency_witness, intersect_affine, solve_affine, Rational, RationalMatrix,
};

/// A degree-preserving linear map, stored as one matrix per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    blocks: BTreeMap<u32, RationalMatrix>,
}

impl GradedMap {
    pub fn from_blocks(blocks: BTreeMap<u32, RationalMatrix>) -> Self {
        Self { blocks }
    }

    pub fn identity<X: GradedAlgebra + ?Sized>(algebra: &X, max_degree: u32) -> Self {
        Self {
            blocks: (0..=max_degree)
                .map(|k| (k, RationalMatrix::identity(algebra.dim(k))))
                .collect(),
        }
    }

    /// The underlying linear map of a morphism out of a free model.
    pub fn from_morphism<A: GradedAlgebra + ?Sized>(
        f: &CdgaMorphism<'_, A>,
        max_degree: u32,
    ) -> Result<Self> {
        let src = f.source();
        let mut blocks = BTreeMap::new();
        for k in 0..=max_degree {
            let basis = src.basis(k);
            let mut cols = Vec::with_capacity(basis.len());
            for m in basis.iter() {
                let e = Element::monomial(
                    src.generators(),
                    m.clone(),
                    Rational::from_integer(1.into()),
                );
                cols.push(f.apply(&e, k)?.coords);
            }
            blocks.insert(k, RationalMatrix::from_columns(f.target().dim(k), &cols));
        }
        Ok(Self { blocks })
    }

    pub fn matrix(&self, degree: u32) -> Option<&RationalMatrix> {
        self.blocks.get(&degree)
    }

    pub fn apply(&self, v: &GradedVector) -> Result<GradedVector> {
        let m = self.blocks.get(&v.degree).ok_or_else(|| {
            Error::Input(format!(
                "graded map has no component in degree {}",
                v.degree
            ))
        })?;
        Ok(GradedVector::new(v.degree, m.mul_vec(&v.coords)?))
    }
}

/// The optional data `(ma, f, i)` of a relative lifting problem.
pub struct LiftConstraint<'a, A: GradedAlgebra + ?Sized> {
    pub ma: &'a A,
    /// `f: base ⊗ ΛW → ma`.
    pub f: &'a CdgaMorphism<'a, A>,
    /// `i: mx → ma`.
    pub i: &'a GradedMap,
}

/// Find `ψ: base ⊗ ΛW → mx` extending `phi`, with `i∘ψ = f` when a
/// constraint is given.
pub struct LiftProblem<'a, X: GradedAlgebra + ?Sized, A: GradedAlgebra + ?Sized> {
    pub model: &'a RelativeModel,
    pub mx: &'a X,
    pub phi: &'a CdgaMorphism<'a, X>,
    pub constraint: Option<LiftConstraint<'a, A>>,
    /// Degree through which `mx` is enumerated; defaults to its top degree.
    pub cutoff: Option<u32>,
}

impl<'a, X: GradedAlgebra + ?Sized> LiftProblem<'a, X, X> {
    pub fn unconstrained(
        model: &'a RelativeModel,
        mx: &'a X,
        phi: &'a CdgaMorphism<'a, X>,
    ) -> Self {
        Self {
            model,
            mx,
            phi,
            constraint: None,
            cutoff: None,
        }
    }
}

impl<'a, X: GradedAlgebra + ?Sized, A: GradedAlgebra + ?Sized> LiftProblem<'a, X, A> {
    /// `ma`, `f` and `i` must be given together or not at all.
    pub fn new(
        model: &'a RelativeModel,
        mx: &'a X,
        phi: &'a CdgaMorphism<'a, X>,
        ma: Option<&'a A>,
        f: Option<&'a CdgaMorphism<'a, A>>,
        i: Option<&'a GradedMap>,
    ) -> Result<Self> {
        let constraint = match (ma, f, i) {
            (None, None, None) => None,
            (Some(ma), Some(f), Some(i)) => Some(LiftConstraint { ma, f, i }),
            _ => {
                return Err(Error::Input(
                    "the constraint needs all of the target algebra, f and i, or none of them"
                        .into(),
                ))
            }
        };
        Ok(Self {
            model,
            mx,
            phi,
            constraint,
            cutoff: None,
        })
    }

    pub fn with_cutoff(mut self, cutoff: u32) -> Self {
        self.cutoff = Some(cutoff);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberImage {
    pub name: String,
    pub vector: GradedVector,
    /// False for generators above the cutoff, which are sent to zero.
    pub constrained: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftWitness {
    pub images: Vec<FiberImage>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftObstruction {
    /// `φ(dw)` is a non-exact cocycle (decoupled systems).
    NotExact {
        generator: String,
        class: GradedVector,
    },
    /// A functional `y` on the stacked equation space with `yM = 0`,
    /// `y·rhs = 1`, proving the combined system has no solution.
    Inconsistent { functional: Vec<Rational> },
    /// No element of `mx` maps to `f(w)` under `i`.
    ConstraintUnsatisfiable {
        generator: String,
        class: GradedVector,
    },
    /// `i∘φ ≠ f` already on a base generator.
    BaseIncompatible { generator: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftOutcome {
    Exists(LiftWitness),
    Obstructed(LiftObstruction),
}

impl LiftOutcome {
    pub fn exists(&self) -> bool {
        matches!(self, LiftOutcome::Exists(_))
    }
}

struct Prepared<'p, X: GradedAlgebra + ?Sized> {
    cutoff: u32,
    /// Fibre indices of degree `<= cutoff`, sorted by degree.
    order: Vec<usize>,
    system: LinearDgaSystem<'p, X>,
}

fn prepare<'p, X: GradedAlgebra + ?Sized, A: GradedAlgebra + ?Sized>(
    p: &LiftProblem<'p, X, A>,
) -> Result<Prepared<'p, X>> {
    let model = p.model;
    if p.phi.source().generators().as_ref() != model.base().generators().as_ref() {
        return Err(Error::Input(
            "phi is not defined on the base of the relative model".into(),
        ));
    }
    let cutoff = match p.cutoff.or_else(|| p.mx.top_degree()) {
        Some(c) => c,
        None => {
            return Err(Error::Input(
                "an infinite target algebra needs an explicit degree cutoff".into(),
            ))
        }
    };
    let fiber = model.fiber();
    let mut order: Vec<usize> = (0..fiber.len())
        .filter(|&j| fiber.degree(j) <= cutoff)
        .collect();
    order.sort_by_key(|&j| (fiber.degree(j), j));
    let position: BTreeMap<usize, usize> =
        order.iter().enumerate().map(|(pos, &j)| (j, pos)).collect();

    let mut degrees = Vec::with_capacity(order.len());
    let mut constants = Vec::with_capacity(order.len());
    let mut coefficients = Vec::with_capacity(order.len());
    for &j in &order {
        let n = fiber.degree(j);
        let form = model.linear_form(j)?;
        degrees.push(n);
        constants.push(p.phi.apply(&form.constant, n + 1)?);
        let mut row: Vec<Option<GradedVector>> = vec![None; order.len()];
        for (l, m) in &form.coefficients {
            // a generator above the cutoff is sent to zero, so its term drops
            if let Some(&pos) = position.get(l) {
                let deg = n + 1 - fiber.degree(*l);
                row[pos] = Some(p.phi.apply(m, deg)?);
            }
        }
        coefficients.push(row);
    }
    let system = LinearDgaSystem::new(p.mx, degrees, constants, coefficients)?;
    Ok(Prepared {
        cutoff,
        order,
        system,
    })
}

/// Decides whether the lift exists; on success returns the canonical
/// witness, otherwise a certificate of failure.
pub fn decide_dga_lift<X: GradedAlgebra + ?Sized, A: GradedAlgebra + ?Sized>(
    p: &LiftProblem<'_, X, A>,
) -> Result<LiftOutcome> {
    decide(p, true)
}

/// As [`decide_dga_lift`], always going through the assembled linear system.
pub fn decide_dga_lift_general<X: GradedAlgebra + ?Sized, A: GradedAlgebra + ?Sized>(
    p: &LiftProblem<'_, X, A>,
) -> Result<LiftOutcome> {
    decide(p, false)
}

fn decide<X: GradedAlgebra + ?Sized, A: GradedAlgebra + ?Sized>(
    p: &LiftProblem<'_, X, A>,
    allow_fast: bool,
) -> Result<LiftOutcome> {
    let prep = prepare(p)?;
    let fiber = p.model.fiber();
    let sys = &prep.system;

    if let Some(c) = &p.constraint {
        let base = p.model.base();
        for (b, g) in base.generators().iter().enumerate() {
            let elem = Element::generator(base.generators(), b);
            let via_i = c.i.apply(&p.phi.apply(&elem, g.degree)?)?;
            let total_elem = Element::generator(p.model.total().generators(), b);
            if via_i != c.f.apply(&total_elem, g.degree)? {
                return Ok(LiftOutcome::Obstructed(LiftObstruction::BaseIncompatible {
                    generator: g.name.clone(),
                }));
            }
        }
        for j in 0..fiber.len() {
            if fiber.degree(j) > prep.cutoff && !constraint_value(p, c, j)?.is_zero() {
                return Err(Error::Unsupported(format!(
                    "f({}) is nonzero above the cutoff {}",
                    fiber.get(j).name,
                    prep.cutoff
                )));
            }
        }
    }

    let point = if allow_fast && p.constraint.is_none() && sys.is_decoupled() {
        let mut parts = Vec::with_capacity(prep.order.len());
        for (pos, &j) in prep.order.iter().enumerate() {
            let class = &sys.constants()[pos];
            match p.mx.exact_witness(class) {
                Ok(Some(w)) => parts.push(w),
                Ok(None) => {
                    return Ok(LiftOutcome::Obstructed(LiftObstruction::NotExact {
                        generator: fiber.get(j).name.clone(),
                        class: class.clone(),
                    }))
                }
                Err(Error::NotClosed(msg)) => {
                    return Err(Error::Internal(format!(
                        "image of d({}) is not closed: {msg}",
                        fiber.get(j).name
                    )))
                }
                Err(e) => return Err(e),
            }
        }
        parts
    } else {
        match general_point(p, &prep)? {
            Ok(parts) => parts,
            Err(obstruction) => return Ok(LiftOutcome::Obstructed(obstruction)),
        }
    };

    let mut images: Vec<FiberImage> = (0..fiber.len())
        .map(|j| {
            let g = fiber.get(j);
            FiberImage {
                name: g.name.clone(),
                vector: p.mx.zero(g.degree),
                constrained: false,
            }
        })
        .collect();
    for (pos, &j) in prep.order.iter().enumerate() {
        images[j].vector = point[pos].clone();
        images[j].constrained = true;
    }
    validate_witness(p, prep.cutoff, &images)?;
    Ok(LiftOutcome::Exists(LiftWitness { images }))
}

fn constraint_value<X: GradedAlgebra + ?Sized, A: GradedAlgebra + ?Sized>(
    p: &LiftProblem<'_, X, A>,
    c: &LiftConstraint<'_, A>,
    j: usize,
) -> Result<GradedVector> {
    let total = p.model.total();
    let idx = p.model.total_index(j);
    c.f.apply(
        &Element::generator(total.generators(), idx),
        total.generators().degree(idx),
    )
}

fn general_point<X: GradedAlgebra + ?Sized, A: GradedAlgebra + ?Sized>(
    p: &LiftProblem<'_, X, A>,
    prep: &Prepared<'_, X>,
) -> Result<std::result::Result<Vec<GradedVector>, LiftObstruction>> {
    let sys = &prep.system;
    let solutions = solve_linear_dga_system(sys)?;
    let (m, rhs) = sys.assemble()?;

    let (m, rhs, feasible) = match &p.constraint {
        None => (m, rhs, solutions),
        Some(c) => {
            let (col_off, cols) = sys.unknown_offsets();
            let fiber = p.model.fiber();
            let mut blocks: Vec<(RationalMatrix, Vec<Rational>)> =
                Vec::with_capacity(prep.order.len());
            for (pos, &j) in prep.order.iter().enumerate() {
                let n = fiber.degree(j);
                let target = constraint_value(p, c, j)?;
                let i_n =
                    c.i.matrix(n)
                        .ok_or_else(|| Error::Input(format!("i has no component in degree {n}")))?;
                if i_n.cols() != p.mx.dim(n) || i_n.rows() != c.ma.dim(n) {
                    return Err(Error::DimensionMismatch(format!(
                        "i in degree {n} has the wrong shape"
                    )));
                }
                if solve_affine(i_n, &target.coords)?.is_empty() {
                    return Ok(Err(LiftObstruction::ConstraintUnsatisfiable {
                        generator: fiber.get(j).name.clone(),
                        class: target,
                    }));
                }
                let mut wide = RationalMatrix::zeros(i_n.rows(), cols);
                wide.add_block(0, col_off[pos], i_n, false);
                blocks.push((wide, target.coords));
            }
            let mut cm = RationalMatrix::zeros(0, cols);
            let mut crhs = Vec::new();
            for (b, r) in blocks {
                cm = cm.vstack(&b)?;
                crhs.extend(r);
            }
            let constraint_space = solve_affine(&cm, &crhs)?;
            let feasible = intersect_affine(&solutions, &constraint_space)?;
            let mut all_rhs = rhs;
            all_rhs.extend(crhs);
            (m.vstack(&cm)?, all_rhs, feasible)
        }
    };

    match feasible.point() {
        Some(v) => Ok(Ok(sys.split(v))),
        None => {
            let functional = inconsistency_witness(&m, &rhs)?.ok_or_else(|| {
                Error::Internal("empty solution space without an inconsistency witness".into())
            })?;
            Ok(Err(LiftObstruction::Inconsistent { functional }))
        }
    }
}

/// Re-checks `φ∘d = d∘ψ` through the cutoff and the constraint equation,
/// evaluating products directly rather than through the solver's matrices.
fn validate_witness<X: GradedAlgebra + ?Sized, A: GradedAlgebra + ?Sized>(
    p: &LiftProblem<'_, X, A>,
    cutoff: u32,
    images: &[FiberImage],
) -> Result<()> {
    let mut all: Vec<GradedVector> = p.phi.images().to_vec();
    all.extend(images.iter().map(|im| im.vector.clone()));
    let psi = CdgaMorphism::unvalidated(p.model.total(), p.mx, all)?;
    if let Some(name) = psi.first_chain_map_failure(Some(cutoff))? {
        return Err(Error::Internal(format!(
            "lift witness fails the chain-map check on `{name}`"
        )));
    }
    if let Some(c) = &p.constraint {
        for (j, im) in images.iter().enumerate() {
            if c.i.matrix(im.vector.degree).is_none() && !im.constrained {
                continue;
            }
            if c.i.apply(&im.vector)? != constraint_value(p, c, j)? {
                return Err(Error::Internal(format!(
                    "lift witness fails i∘ψ = f on `{}`",
                    im.name
                )));
            }
        }
    }
    Ok(())
}

/// Convenience: decide with `mx` a free model truncated at `cutoff`.
pub fn decide_free_lift(
    model: &RelativeModel,
    mx: &FreeCdga,
    phi: &CdgaMorphism<'_, FreeCdga>,
    cutoff: u32,
) -> Result<LiftOutcome> {
    let p = LiftProblem {
        model,
        mx,
        phi,
        constraint: None::<LiftConstraint<'_, FreeCdga>>,
        cutoff: Some(cutoff),
    };
    decide_dga_lift(&p)
}
