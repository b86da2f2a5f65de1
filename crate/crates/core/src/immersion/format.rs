//! JSON document formats: problem files, free models and model dumps.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cdga::{Element, FreeCdga, GeneratorSet, Monomial};
use crate::error::{Error, Result};
use crate::lift::RelativeModel;
use crate::linalg::{format_rational, parse_rational, Rational};
use crate::mono::MonoModelSpec;

/// A rational written as `"p/q"`, `"p"`, or a bare JSON integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Text(String),
    Integer(i64),
}

impl RationalText {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            RationalText::Text(s) => parse_rational(s),
            RationalText::Integer(n) => Ok(Rational::from_integer((*n).into())),
        }
    }
}

pub fn parse_vector(v: &[RationalText]) -> Result<Vec<Rational>> {
    v.iter().map(RationalText::to_rational).collect()
}

pub fn format_vector(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    #[serde(default)]
    pub name: Option<String>,
    pub dimension_m: u32,
    pub dimension_n: u32,
    pub cohomology: CohomologyDocument,
    /// Degree → class vector.
    #[serde(default)]
    pub tangent_pontrjagin: BTreeMap<String, Vec<RationalText>>,
    #[serde(default)]
    pub pullback_pontrjagin: BTreeMap<String, Vec<RationalText>>,
    #[serde(default)]
    pub pullback_euler: Option<Vec<RationalText>>,
    #[serde(default)]
    pub euler_tangent: Option<Vec<RationalText>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CohomologyDocument {
    Presentation {
        /// `basis[k]` lists the basis names of degree `k`.
        basis: Vec<Vec<String>>,
        /// `[left, right, coefficients]`.
        #[serde(default)]
        products: Vec<(String, String, Vec<RationalText>)>,
        /// Source degree → matrix rows of `d`.
        #[serde(default)]
        differential: BTreeMap<String, Vec<Vec<RationalText>>>,
    },
    Free {
        generators: Vec<GeneratorDocument>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDocument {
    pub name: String,
    pub degree: u32,
    /// `d` of the generator as `[coefficient, monomial]` pairs.
    #[serde(default)]
    pub d: Vec<(RationalText, String)>,
}

pub fn parse_degree_key(key: &str) -> Result<u32> {
    key.trim()
        .parse::<u32>()
        .map_err(|_| Error::Parse(format!("`{key}` is not a degree")))
}

/// Parses `1`, `x`, `x^2*y` over `gens`.
pub fn parse_monomial(text: &str, gens: &GeneratorSet) -> Result<Monomial> {
    let mut exps = vec![0u32; gens.len()];
    let text = text.trim();
    if text == "1" {
        return Ok(Monomial::from_exponents(exps));
    }
    for factor in text.split('*') {
        let factor = factor.trim();
        let (name, e) = match factor.split_once('^') {
            Some((name, e)) => {
                let e = e
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?;
                (name.trim(), e)
            }
            None => (factor, 1),
        };
        let i = gens
            .index_of(name)
            .ok_or_else(|| Error::Parse(format!("unknown generator `{name}` in `{text}`")))?;
        exps[i] += e;
    }
    let m = Monomial::from_exponents(exps);
    if !m.is_valid_for(gens) {
        return Err(Error::Parse(format!("`{text}` squares an odd generator")));
    }
    Ok(m)
}

pub fn parse_element(
    terms: &[(RationalText, String)],
    gens: &Arc<GeneratorSet>,
) -> Result<Element> {
    let parsed = terms
        .iter()
        .map(|(c, m)| Ok((c.to_rational()?, parse_monomial(m, gens)?)))
        .collect::<Result<Vec<_>>>()?;
    Element::from_terms(gens, parsed)
}

pub fn free_model_from_document(generators: &[GeneratorDocument]) -> Result<FreeCdga> {
    let gens = GeneratorSet::new(generators.iter().map(|g| (g.name.clone(), g.degree)))?;
    let diffs = generators
        .iter()
        .map(|g| parse_element(&g.d, &gens))
        .collect::<Result<Vec<_>>>()?;
    FreeCdga::new(gens, diffs)
}

fn element_terms(e: &Element) -> Vec<(RationalText, String)> {
    e.terms()
        .map(|(m, c)| {
            (
                RationalText::Text(format_rational(c)),
                m.render(e.generators()),
            )
        })
        .collect()
}

pub fn generator_documents(model: &FreeCdga) -> Vec<GeneratorDocument> {
    model
        .generators()
        .iter()
        .enumerate()
        .map(|(i, g)| GeneratorDocument {
            name: g.name.clone(),
            degree: g.degree,
            d: element_terms(model.generator_differential(i)),
        })
        .collect()
}

/// The relative model as JSON: base and fibre generators with their
/// differentials over the total generator set.
pub fn model_document(spec: &MonoModelSpec, model: &RelativeModel) -> Value {
    let all = generator_documents(model.total());
    let nb = model.base().generators().len();
    json!({
        "version": super::FORMAT_VERSION,
        "m": spec.m,
        "n": spec.n,
        "mode": spec.mode.as_str(),
        "base": &all[..nb],
        "fiber": &all[nb..],
    })
}
