use std::collections::BTreeMap;

use super::format::{
    free_model_from_document, parse_degree_key, parse_vector, CohomologyDocument, ProblemDocument,
    RationalText,
};
use crate::cdga::{
    CdgaMorphism, FinitePresentation, FreeCdga, GradedAlgebra, GradedVector, ProductEntry,
};
use crate::error::{Error, Result};
use crate::lift::RelativeModel;
use crate::linalg::RationalMatrix;
use crate::mono::{self, MonoModelSpec};

/// Rational cohomology of `M`, either as a finite presentation or as a free
/// model.
#[derive(Clone, Debug)]
pub enum Cohomology {
    Presentation(FinitePresentation),
    Free(FreeCdga),
}

impl GradedAlgebra for Cohomology {
    fn dim(&self, degree: u32) -> usize {
        match self {
            Cohomology::Presentation(p) => p.dim(degree),
            Cohomology::Free(f) => f.dim(degree),
        }
    }

    fn differential_matrix(&self, degree: u32) -> RationalMatrix {
        match self {
            Cohomology::Presentation(p) => p.differential_matrix(degree),
            Cohomology::Free(f) => f.differential_matrix(degree),
        }
    }

    fn product(&self, a: &GradedVector, b: &GradedVector) -> Result<GradedVector> {
        match self {
            Cohomology::Presentation(p) => p.product(a, b),
            Cohomology::Free(f) => f.product(a, b),
        }
    }

    fn unit(&self) -> GradedVector {
        match self {
            Cohomology::Presentation(p) => p.unit(),
            Cohomology::Free(f) => f.unit(),
        }
    }

    fn top_degree(&self) -> Option<u32> {
        match self {
            Cohomology::Presentation(p) => p.top_degree(),
            Cohomology::Free(f) => f.top_degree(),
        }
    }

    fn basis_labels(&self, degree: u32) -> Vec<String> {
        match self {
            Cohomology::Presentation(p) => p.basis_labels(degree),
            Cohomology::Free(f) => f.basis_labels(degree),
        }
    }

    fn has_zero_differential(&self) -> bool {
        match self {
            Cohomology::Presentation(p) => p.has_zero_differential(),
            Cohomology::Free(f) => f.has_zero_differential(),
        }
    }

    fn apply_differential(&self, a: &GradedVector) -> Result<GradedVector> {
        match self {
            Cohomology::Presentation(p) => p.apply_differential(a),
            Cohomology::Free(f) => f.apply_differential(a),
        }
    }
}

/// A validated immersion question at the level of characteristic classes.
#[derive(Clone, Debug)]
pub struct ImmersionProblem {
    pub name: Option<String>,
    pub m: u32,
    pub n: u32,
    pub cohomology: Cohomology,
    /// Fibre generators above this degree are not enumerated.
    pub cutoff: u32,
    /// `p_j(TM)` keyed by degree `4j`.
    pub tangent_pontrjagin: BTreeMap<u32, GradedVector>,
    pub euler_tangent: Option<GradedVector>,
    /// `f*p_i(TN)` keyed by degree `4i`.
    pub pullback_pontrjagin: BTreeMap<u32, GradedVector>,
    pub pullback_euler: Option<GradedVector>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Enumeration cutoff for free cohomology models.
    pub max_degree: Option<u32>,
}

pub fn parse_problem(text: &str) -> Result<ImmersionProblem> {
    parse_problem_with(text, ParseOptions::default())
}

pub fn parse_problem_with(text: &str, options: ParseOptions) -> Result<ImmersionProblem> {
    let doc: ProblemDocument =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    problem_from_document(doc, options)
}

pub fn problem_from_document(
    doc: ProblemDocument,
    options: ParseOptions,
) -> Result<ImmersionProblem> {
    let (m, n) = (doc.dimension_m, doc.dimension_n);
    let spec = MonoModelSpec::new(m, n)?;
    let cohomology = match doc.cohomology {
        CohomologyDocument::Presentation {
            basis,
            products,
            differential,
        } => {
            let products = products
                .into_iter()
                .map(|(left, right, c)| {
                    Ok(ProductEntry {
                        left,
                        right,
                        coefficients: parse_vector(&c)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let mut diffs = BTreeMap::new();
            for (k, rows) in differential {
                let k = parse_degree_key(&k)?;
                let rows = rows
                    .iter()
                    .map(|r| parse_vector(r))
                    .collect::<Result<Vec<_>>>()?;
                let expected = (
                    basis.get(k as usize + 1).map_or(0, Vec::len),
                    basis.get(k as usize).map_or(0, Vec::len),
                );
                let matrix = if rows.is_empty() {
                    RationalMatrix::zeros(expected.0, expected.1)
                } else {
                    RationalMatrix::from_rows(rows)?
                };
                if (matrix.rows(), matrix.cols()) != expected {
                    return Err(Error::DimensionMismatch(format!(
                        "differential on degree {k} must be {}x{}",
                        expected.0, expected.1
                    )));
                }
                diffs.insert(k, matrix);
            }
            Cohomology::Presentation(FinitePresentation::new(basis, products, diffs)?)
        }
        CohomologyDocument::Free { generators } => {
            Cohomology::Free(free_model_from_document(&generators)?)
        }
    };

    let h1 = cohomology.cohomology_dim(1);
    if h1 != 0 {
        return Err(Error::NonTrivialFirstCohomology { rank: h1 });
    }

    let cutoff = match (&cohomology, cohomology.top_degree()) {
        (Cohomology::Presentation(_), Some(top)) => top,
        _ => options.max_degree.unwrap_or_else(|| {
            let highest = mono::obstruction_degrees(&spec)
                .into_iter()
                .max()
                .unwrap_or(0);
            highest.max(m + 1)
        }),
    };
    // cohomology above m must vanish wherever it is enumerated
    for k in m + 1..=class_limit(&cohomology, cutoff) {
        let h = cohomology.cohomology_dim(k);
        if h != 0 {
            return Err(Error::Input(format!(
                "H^{k}(M;Q) has dimension {h}, but a closed {m}-manifold has no cohomology above degree {m}"
            )));
        }
    }

    let read_class = |label: &str, degree: u32, v: &[RationalText]| -> Result<GradedVector> {
        let coords = parse_vector(v)?;
        let dim = cohomology.dim(degree);
        if coords.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{label} in degree {degree} has {} coordinates, the basis has {dim}",
                coords.len()
            )));
        }
        let class = GradedVector::new(degree, coords);
        if !cohomology.apply_differential(&class)?.is_zero() {
            return Err(Error::NotClosed(format!(
                "{label} in degree {degree} is not a cocycle"
            )));
        }
        Ok(class)
    };
    let read_pontrjagin = |label: &str, map: &BTreeMap<String, Vec<RationalText>>| {
        let mut out = BTreeMap::new();
        for (key, v) in map {
            let degree = parse_degree_key(key)?;
            if degree == 0 || degree % 4 != 0 {
                return Err(Error::Input(format!(
                    "{label}: Pontrjagin classes live in degrees divisible by 4, got {degree}"
                )));
            }
            out.insert(degree, read_class(label, degree, v)?);
        }
        Ok::<_, Error>(out)
    };

    let tangent_pontrjagin = read_pontrjagin("tangent_pontrjagin", &doc.tangent_pontrjagin)?;
    let pullback_pontrjagin = read_pontrjagin("pullback_pontrjagin", &doc.pullback_pontrjagin)?;
    let euler_tangent = doc
        .euler_tangent
        .as_deref()
        .map(|v| read_class("euler_tangent", m, v))
        .transpose()?;
    if euler_tangent.is_some() && m % 2 == 1 {
        return Err(Error::Input(format!(
            "euler_tangent is only meaningful for even m, got m = {m}"
        )));
    }
    let pullback_euler = doc
        .pullback_euler
        .as_deref()
        .map(|v| read_class("pullback_euler", n, v))
        .transpose()?;
    if pullback_euler.is_some() && n % 2 == 1 {
        return Err(Error::Input(format!(
            "pullback_euler is only meaningful for even n, got n = {n}"
        )));
    }

    let problem = ImmersionProblem {
        name: doc.name,
        m,
        n,
        cohomology,
        cutoff,
        tangent_pontrjagin,
        euler_tangent,
        pullback_pontrjagin,
        pullback_euler,
    };
    // every required class must be present
    let model = mono::build_mono_model(&spec)?;
    problem.base_images(&model)?;
    Ok(problem)
}

/// Highest degree in which classes are evaluated: the top degree of a
/// presentation, or one past the cutoff for a free model.
fn class_limit(cohomology: &Cohomology, cutoff: u32) -> u32 {
    match cohomology {
        Cohomology::Presentation(p) => p.top(),
        Cohomology::Free(_) => cutoff + 1,
    }
}

impl ImmersionProblem {
    pub fn spec(&self, mode: mono::DifferentialMode) -> Result<MonoModelSpec> {
        MonoModelSpec::with_mode(self.m, self.n, mode)
    }

    pub fn class_limit(&self) -> u32 {
        class_limit(&self.cohomology, self.cutoff)
    }

    /// `α_i ↦ f*p_i(TN)`, `β_j ↦ p_j(TM)`, `ε ↦ f*e(TN)`, `ε_m ↦ e(TM)`.
    ///
    /// A class in a degree where `H(M)` vanishes (or beyond the enumerated
    /// range) may be omitted and is taken to be zero.
    pub fn base_images(&self, model: &RelativeModel) -> Result<Vec<GradedVector>> {
        let limit = self.class_limit();
        let mut images = Vec::new();
        for g in model.base().generators().iter() {
            let found = if g.name.starts_with("alpha_") {
                self.pullback_pontrjagin.get(&g.degree)
            } else if g.name.starts_with("beta_") {
                self.tangent_pontrjagin.get(&g.degree)
            } else if g.name == mono::EULER {
                self.pullback_euler.as_ref()
            } else if g.name == mono::EULER_M {
                self.euler_tangent.as_ref()
            } else {
                return Err(Error::Internal(format!(
                    "unexpected base generator `{}`",
                    g.name
                )));
            };
            let image = match found {
                Some(v) => v.clone(),
                None if g.degree > limit || self.cohomology.cohomology_dim(g.degree) == 0 => {
                    self.cohomology.zero(g.degree)
                }
                None => return Err(Error::MissingClass(describe_generator(&g.name, g.degree))),
            };
            images.push(image);
        }
        Ok(images)
    }
}

fn describe_generator(name: &str, degree: u32) -> String {
    let what = if let Some(i) = name.strip_prefix("alpha_") {
        format!("f*p_{i}(TN), key \"{degree}\" of pullback_pontrjagin")
    } else if let Some(j) = name.strip_prefix("beta_") {
        format!("p_{j}(TM), key \"{degree}\" of tangent_pontrjagin")
    } else if name == mono::EULER {
        "f*e(TN), field pullback_euler".to_string()
    } else {
        "e(TM), field euler_tangent".to_string()
    };
    format!("{name} ({what})")
}

/// The base morphism `φ` of the lifting problem.
pub fn assemble_phi<'a>(
    problem: &'a ImmersionProblem,
    model: &'a RelativeModel,
) -> Result<CdgaMorphism<'a, Cohomology>> {
    if model.base().generators().as_ref()
        != mono::base_generators(&problem.spec(Default::default())?)?.as_ref()
    {
        return Err(Error::Input(format!(
            "model was not built for (m, n) = ({}, {})",
            problem.m, problem.n
        )));
    }
    CdgaMorphism::new(
        model.base(),
        &problem.cohomology,
        problem.base_images(model)?,
    )
}
