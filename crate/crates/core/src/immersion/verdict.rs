use std::fmt::Write as _;

use num_traits::{One, Signed};
use serde::Serialize;

use super::format::format_vector;
use super::problem::{assemble_phi, ImmersionProblem};
use crate::cdga::{CdgaMorphism, GradedAlgebra};
use crate::error::{Error, Result};
use crate::lift::{decide_dga_lift, LiftOutcome, LiftProblem, RelativeModel};
use crate::linalg::{format_rational, Rational};
use crate::mono::{build_mono_model, DifferentialMode, MonoModelSpec};

/// One fibre generator `w` and the class `φ(dw)` that must be exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionRow {
    pub name: String,
    /// Degree of the class, one more than that of the generator.
    pub degree: u32,
    pub basis: Vec<String>,
    pub class: Vec<Rational>,
    pub exact: bool,
    /// A primitive of the class in degree `degree - 1`.
    pub witness: Option<Vec<Rational>>,
    /// True when nothing is there to check: the degree is empty in `M` or
    /// beyond the enumerated range.
    pub vacuous: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub immersible: bool,
    pub mode: DifferentialMode,
    pub m: u32,
    pub n: u32,
    pub obstructions: Vec<ObstructionRow>,
}

#[derive(Serialize)]
struct RowDocument<'a> {
    name: &'a str,
    degree: u32,
    basis: &'a [String],
    class: Vec<String>,
    exact: bool,
    vacuous: bool,
    witness: Option<Vec<String>>,
}

#[derive(Serialize)]
struct VerdictDocument<'a> {
    version: u32,
    immersible: &'static str,
    mode: &'static str,
    m: u32,
    n: u32,
    obstructions: Vec<RowDocument<'a>>,
}

impl Verdict {
    pub fn answer(&self) -> &'static str {
        if self.immersible {
            "YES"
        } else {
            "NO"
        }
    }

    pub fn to_json(&self) -> String {
        let doc = VerdictDocument {
            version: super::FORMAT_VERSION,
            immersible: self.answer(),
            mode: self.mode.as_str(),
            m: self.m,
            n: self.n,
            obstructions: self
                .obstructions
                .iter()
                .map(|r| RowDocument {
                    name: &r.name,
                    degree: r.degree,
                    basis: &r.basis,
                    class: format_vector(&r.class),
                    exact: r.exact,
                    vacuous: r.vacuous,
                    witness: r.witness.as_deref().map(format_vector),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("verdict serializes")
    }

    /// The first non-exact row.
    pub fn failing(&self) -> Option<&ObstructionRow> {
        self.obstructions.iter().find(|r| !r.exact)
    }
}

/// Evaluates every obstruction of `model` against `φ: base → mx` and
/// cross-checks the outcome with the general lifting decision.
///
/// Fibre generators above `cutoff` are reported as vacuous.
pub fn decide_with_phi<X: GradedAlgebra + ?Sized>(
    spec: &MonoModelSpec,
    model: &RelativeModel,
    mx: &X,
    phi: &CdgaMorphism<'_, X>,
    cutoff: u32,
) -> Result<Verdict> {
    let fiber = model.fiber();
    let mut rows = Vec::with_capacity(fiber.len());
    for j in 0..fiber.len() {
        let g = fiber.get(j);
        let degree = g.degree + 1;
        if g.degree > cutoff {
            rows.push(ObstructionRow {
                name: g.name.clone(),
                degree,
                basis: Vec::new(),
                class: Vec::new(),
                exact: true,
                witness: None,
                vacuous: true,
            });
            continue;
        }
        let form = model.linear_form(j)?;
        if !form.coefficients.is_empty() {
            return Err(Error::Unsupported(format!(
                "d({}) involves other fibre generators",
                g.name
            )));
        }
        let class = phi.apply(&form.constant, degree)?;
        let witness = mx.exact_witness(&class)?;
        rows.push(ObstructionRow {
            name: g.name.clone(),
            degree,
            basis: mx.basis_labels(degree),
            vacuous: mx.dim(degree) == 0,
            exact: witness.is_some(),
            witness: witness.map(|w| w.coords),
            class: class.coords,
        });
    }
    let verdict = Verdict {
        immersible: rows.iter().all(|r| r.exact),
        mode: spec.mode,
        m: spec.m,
        n: spec.n,
        obstructions: rows,
    };

    let lift = LiftProblem {
        cutoff: Some(cutoff),
        ..LiftProblem::unconstrained(model, mx, phi)
    };
    match decide_dga_lift(&lift)? {
        LiftOutcome::Exists(w) => {
            if !verdict.immersible {
                return Err(Error::Internal(
                    "lift exists but an obstruction is not exact".into(),
                ));
            }
            for (row, image) in verdict.obstructions.iter().zip(&w.images) {
                if image.constrained && row.witness.as_ref() != Some(&image.vector.coords) {
                    return Err(Error::Internal(format!(
                        "witness for `{}` differs between the two decision paths",
                        row.name
                    )));
                }
            }
        }
        LiftOutcome::Obstructed(_) => {
            if verdict.immersible {
                return Err(Error::Internal(
                    "all obstructions exact but no lift exists".into(),
                ));
            }
        }
    }
    Ok(verdict)
}

pub fn decide_immersion(problem: &ImmersionProblem, mode: DifferentialMode) -> Result<Verdict> {
    let spec = problem.spec(mode)?;
    let model = build_mono_model(&spec)?;
    let phi = assemble_phi(problem, &model)?;
    decide_with_phi(&spec, &model, &problem.cohomology, &phi, problem.cutoff)
}

fn render_class(basis: &[String], coords: &[Rational]) -> String {
    let mut out = String::new();
    for (label, c) in basis.iter().zip(coords) {
        if c == &Rational::from_integer(0.into()) {
            continue;
        }
        let abs = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        if abs.is_one() {
            out.push_str(label);
        } else {
            let _ = write!(out, "{}*{label}", format_rational(&abs));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Human-readable report of a verdict.
pub fn explain(v: &Verdict) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "immersion of M^{} into N^{} (codimension {}), differential mode {}",
        v.m,
        v.n,
        v.n - v.m,
        v.mode
    );
    let failing = v.obstructions.iter().filter(|r| !r.exact).count();
    let _ = writeln!(
        out,
        "verdict: {} ({} obstruction{}, {} not exact)",
        v.answer(),
        v.obstructions.len(),
        if v.obstructions.len() == 1 { "" } else { "s" },
        failing
    );
    if v.obstructions.is_empty() {
        let _ = writeln!(out, "no obstructions: the model has no fibre generators");
        return out;
    }
    for r in &v.obstructions {
        let head = format!("  {:<9} degree {:>3}: ", r.name, r.degree);
        if r.vacuous {
            let _ = writeln!(
                out,
                "{head}vacuous, M has no cohomology to check in this degree"
            );
            continue;
        }
        let class = render_class(&r.basis, &r.class);
        match &r.witness {
            Some(_)
                if r.class
                    .iter()
                    .all(|c| c == &Rational::from_integer(0.into())) =>
            {
                let _ = writeln!(out, "{head}class 0, exact");
            }
            Some(w) => {
                let _ = writeln!(
                    out,
                    "{head}class {class}, exact with primitive {}",
                    format_vector(w).join(" ")
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "{head}class {class}, NOT exact: nonzero in H^{}",
                    r.degree
                );
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeComparison {
    pub dual_class: Verdict,
    pub paper_literal: Verdict,
}

impl ModeComparison {
    pub fn diverges(&self) -> bool {
        self.dual_class.immersible != self.paper_literal.immersible
    }

    /// Generators whose exactness differs between the two modes.
    pub fn differing_rows(&self) -> Vec<&str> {
        self.dual_class
            .obstructions
            .iter()
            .zip(&self.paper_literal.obstructions)
            .filter(|(a, b)| a.exact != b.exact)
            .map(|(a, _)| a.name.as_str())
            .collect()
    }
}

pub fn compare_modes(problem: &ImmersionProblem) -> Result<ModeComparison> {
    Ok(ModeComparison {
        dual_class: decide_immersion(problem, DifferentialMode::DualClass)?,
        paper_literal: decide_immersion(problem, DifferentialMode::PaperLiteral)?,
    })
}

pub fn explain_comparison(c: &ModeComparison) -> String {
    let mut out = String::new();
    out.push_str(&explain(&c.dual_class));
    out.push('\n');
    out.push_str(&explain(&c.paper_literal));
    out.push('\n');
    if c.diverges() {
        let _ = writeln!(
            out,
            "DIVERGENCE: dual-class says {}, paper-literal says {} (rows differing: {})",
            c.dual_class.answer(),
            c.paper_literal.answer(),
            c.differing_rows().join(", ")
        );
    } else {
        let rows = c.differing_rows();
        if rows.is_empty() {
            let _ = writeln!(out, "modes agree: {}", c.dual_class.answer());
        } else {
            let _ = writeln!(
                out,
                "modes agree on the verdict {} but differ on rows: {}",
                c.dual_class.answer(),
                rows.join(", ")
            );
        }
    }
    out
}
