//! Relative model of the monomorphism bundle over `BSO(m) × BSO(n)`.

use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cdga::{Element, FreeCdga, GeneratorSet};
use crate::error::{Error, Result};
use crate::lift::RelativeModel;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DifferentialMode {
    /// `dγ_k = p̄_k`, the degree-`4k` part of `p(ξ_n) / p(ξ_m)`.
    #[default]
    DualClass,
    /// `dγ_k = β_k − α_k` while `β_k` exists, `dγ_k = α_k` after.
    PaperLiteral,
}

impl DifferentialMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DifferentialMode::DualClass => "dual-class",
            DifferentialMode::PaperLiteral => "paper-literal",
        }
    }
}

impl fmt::Display for DifferentialMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonoModelSpec {
    pub m: u32,
    pub n: u32,
    pub mode: DifferentialMode,
}

impl MonoModelSpec {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        Self::with_mode(m, n, DifferentialMode::default())
    }

    pub fn with_mode(m: u32, n: u32, mode: DifferentialMode) -> Result<Self> {
        if m == 0 {
            return Err(Error::Input(
                "the source dimension m must be at least 1".into(),
            ));
        }
        let codim = n as i64 - m as i64;
        if codim <= 0 || codim % 2 == 0 {
            return Err(Error::Scope { m, n, codim });
        }
        Ok(Self { m, n, mode })
    }

    pub fn n_even(&self) -> bool {
        self.n % 2 == 0
    }

    pub fn m_even(&self) -> bool {
        self.m % 2 == 0
    }

    /// Number of `α_i` (Pontrjagin classes of the `n`-plane bundle).
    pub fn num_alphas(&self) -> u32 {
        pontrjagin_count(self.n)
    }

    /// Number of `β_j` (Pontrjagin classes of the `m`-plane bundle).
    pub fn num_betas(&self) -> u32 {
        pontrjagin_count(self.m)
    }

    /// Indices `k` of the fibre generators `γ_k`.
    pub fn gamma_range(&self) -> RangeInclusive<u32> {
        (self.n - self.m + 1) / 2..=pontrjagin_count(self.n)
    }
}

/// Pontrjagin generators of `H*(BSO(r))` other than an Euler class.
fn pontrjagin_count(r: u32) -> u32 {
    if r % 2 == 0 {
        (r / 2).saturating_sub(1)
    } else {
        (r - 1) / 2
    }
}

pub fn alpha_name(i: u32) -> String {
    format!("alpha_{i}")
}

pub fn beta_name(j: u32) -> String {
    format!("beta_{j}")
}

pub fn gamma_name(k: u32) -> String {
    format!("gamma_{k}")
}

pub const EULER: &str = "euler";
pub const EULER_M: &str = "euler_m";
pub const SIGMA: &str = "sigma";

/// `p̄_k` from `p̄_0 = 1`, `p̄_k = α_k − Σ_{i≥1} β_i·p̄_{k−i}`.
///
/// `alphas[i - 1]` is `α_i` and `betas[j - 1]` is `β_j`; missing entries
/// count as zero. All elements must live over `gens`.
pub fn dual_class(
    gens: &Arc<GeneratorSet>,
    k: i64,
    alphas: &[Element],
    betas: &[Element],
) -> Result<Element> {
    if k <= 0 {
        return Err(Error::Input(format!(
            "dual class index must be positive, got {k}"
        )));
    }
    let k = k as usize;
    let pick = |v: &[Element], i: usize| -> Element {
        if i >= 1 && i <= v.len() {
            v[i - 1].clone()
        } else {
            Element::zero(gens)
        }
    };
    let mut pbar = vec![Element::one(gens)];
    for t in 1..=k {
        let mut cur = pick(alphas, t);
        for i in 1..=t {
            let b = pick(betas, i);
            if !b.is_zero() {
                cur = cur.sub(&b.mul(&pbar[t - i])?)?;
            }
        }
        pbar.push(cur);
    }
    Ok(pbar.pop().expect("k >= 1"))
}

/// The base algebra `Λ(α_i, β_j, ε, ε_m)` with zero differential.
pub fn base_generators(spec: &MonoModelSpec) -> Result<Arc<GeneratorSet>> {
    let mut gens: Vec<(String, u32)> = Vec::new();
    for i in 1..=spec.num_alphas() {
        gens.push((alpha_name(i), 4 * i));
    }
    for j in 1..=spec.num_betas() {
        gens.push((beta_name(j), 4 * j));
    }
    if spec.n_even() {
        gens.push((EULER.into(), spec.n));
    }
    if spec.m_even() {
        gens.push((EULER_M.into(), spec.m));
    }
    GeneratorSet::new(gens)
}

pub fn fiber_generators(spec: &MonoModelSpec) -> Result<Arc<GeneratorSet>> {
    let mut gens: Vec<(String, u32)> = spec
        .gamma_range()
        .map(|k| (gamma_name(k), 4 * k - 1))
        .collect();
    if spec.n_even() {
        gens.push((SIGMA.into(), spec.n - 1));
    }
    GeneratorSet::new(gens)
}

/// Base generator elements over `gens`: `(alphas, betas for the dual-class
/// recursion)`. For `m` even the list of betas is extended by `ε_m²`.
fn recursion_inputs(
    spec: &MonoModelSpec,
    gens: &Arc<GeneratorSet>,
) -> Result<(Vec<Element>, Vec<Element>)> {
    let alphas = (1..=spec.num_alphas())
        .map(|i| Element::named(gens, &alpha_name(i)))
        .collect::<Result<Vec<_>>>()?;
    let mut betas = (1..=spec.num_betas())
        .map(|j| Element::named(gens, &beta_name(j)))
        .collect::<Result<Vec<_>>>()?;
    if spec.m_even() {
        betas.push(Element::named(gens, EULER_M)?.pow(2)?);
    }
    Ok((alphas, betas))
}

/// The differential of `γ_k`, as an element of the base.
pub fn gamma_differential(
    spec: &MonoModelSpec,
    base: &Arc<GeneratorSet>,
    k: u32,
) -> Result<Element> {
    let (alphas, betas) = recursion_inputs(spec, base)?;
    match spec.mode {
        DifferentialMode::DualClass => dual_class(base, k as i64, &alphas, &betas),
        DifferentialMode::PaperLiteral => {
            let alpha = alphas
                .get(k as usize - 1)
                .cloned()
                .unwrap_or_else(|| Element::zero(base));
            if k <= spec.num_betas() {
                betas[k as usize - 1].sub(&alpha)
            } else {
                Ok(alpha)
            }
        }
    }
}

pub fn build_mono_model(spec: &MonoModelSpec) -> Result<RelativeModel> {
    let base_gens = base_generators(spec)?;
    let fiber = fiber_generators(spec)?;
    let total = base_gens.concat(&fiber)?;
    let mut diffs = Vec::with_capacity(fiber.len());
    for k in spec.gamma_range() {
        diffs.push(gamma_differential(spec, &base_gens, k)?.embed(&total)?);
    }
    if spec.n_even() {
        diffs.push(Element::named(&total, EULER)?);
    }
    let base = FreeCdga::with_zero_differential(base_gens);
    RelativeModel::new(base, fiber, diffs, spec.n)
}

/// Degrees in which the obstruction classes live, sorted.
pub fn obstruction_degrees(spec: &MonoModelSpec) -> Vec<u32> {
    let mut out: Vec<u32> = spec.gamma_range().map(|k| 4 * k).collect();
    if spec.n_even() {
        out.push(spec.n);
    }
    out.sort_unstable();
    out
}
