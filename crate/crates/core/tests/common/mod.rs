#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use immersion_core::cdga::{Element, FreeCdga, GeneratorSet, GradedAlgebra, GradedVector};
use immersion_core::linalg::{
    intersect_affine, rat, solve_affine, AffineSubspace, Rational, RationalMatrix,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x1d_2024_0607;

pub fn rng(stream: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).expect("fixture exists")
}

pub fn small_rational<R: Rng>(r: &mut R) -> Rational {
    let num = r.gen_range(-3i64..=3);
    let den = *[1i64, 1, 1, 2, 3].choose(r).unwrap();
    Rational::new(num.into(), den.into())
}

pub fn nonzero_small<R: Rng>(r: &mut R) -> Rational {
    loop {
        let q = small_rational(r);
        if q != rat(0) {
            return q;
        }
    }
}

/// A random point of an affine subspace with small coefficients.
pub fn sample<R: Rng>(r: &mut R, s: &AffineSubspace) -> Option<Vec<Rational>> {
    let coeffs: Vec<Rational> = (0..s.directions().len())
        .map(|_| small_rational(r))
        .collect();
    s.sample(&coeffs)
}

/// Random generator degrees in `2..=max_degree`, sorted.
pub fn random_degrees<R: Rng>(r: &mut R, count: usize, max_degree: u32) -> Vec<u32> {
    let mut d: Vec<u32> = (0..count).map(|_| r.gen_range(2..=max_degree)).collect();
    d.sort_unstable();
    d
}

/// Random minimal-style CDGA: generators added in order of degree, each
/// with a random cocycle (or zero) of the previous generators as its
/// differential.
pub fn random_cdga<R: Rng>(r: &mut R, max_gens: usize, max_degree: u32) -> FreeCdga {
    let count = r.gen_range(1..=max_gens);
    let degrees = random_degrees(r, count, max_degree);
    let names: Vec<String> = (0..count).map(|i| format!("g{i}")).collect();
    let mut model = FreeCdga::with_zero_differential(GeneratorSet::empty());
    for (i, &deg) in degrees.iter().enumerate() {
        let gens = GeneratorSet::new(
            names[..=i]
                .iter()
                .cloned()
                .zip(degrees[..=i].iter().copied()),
        )
        .unwrap();
        let prev = model.generators().clone();
        let d_new = if r.gen_bool(0.6) {
            let cocycles = model.cocycle_space(deg + 1);
            let v = sample(r, &cocycles).unwrap_or_default();
            model.to_element(&GradedVector::new(deg + 1, v)).unwrap()
        } else {
            Element::zero(&prev)
        };
        let mut diffs: Vec<Element> = (0..prev.len())
            .map(|j| model.generator_differential(j).embed(&gens).unwrap())
            .collect();
        diffs.push(d_new.embed(&gens).unwrap());
        model = FreeCdga::new(gens, diffs).unwrap();
    }
    model
}

/// A random degree in `0..=max` where `a` is non-zero.
pub fn populated_degree<R: Rng>(r: &mut R, a: &FreeCdga, max: u32) -> u32 {
    let ks: Vec<u32> = (0..=max).filter(|&k| !a.basis(k).is_empty()).collect();
    *ks.choose(r).unwrap()
}

/// Random homogeneous element of degree `k` with a few terms.
pub fn random_element<R: Rng>(r: &mut R, a: &FreeCdga, k: u32) -> Element {
    let basis = a.basis(k);
    let mut e = Element::zero(a.generators());
    if basis.is_empty() {
        return e;
    }
    for _ in 0..r.gen_range(1..=3) {
        let m = basis.choose(r).unwrap().clone();
        e = e
            .add(&Element::monomial(a.generators(), m, small_rational(r)))
            .unwrap();
    }
    e
}

/// Cocycles of degree `k` in `total` that are at most linear in the
/// generators from index `split` on.
pub fn linear_cocycles(total: &FreeCdga, split: usize, k: u32) -> AffineSubspace {
    let basis = total.basis(k);
    let cocycles = total.cocycle_space(k);
    let heavy: Vec<usize> = basis
        .iter()
        .enumerate()
        .filter(|(_, m)| m.weight_from(split) >= 2)
        .map(|(i, _)| i)
        .collect();
    let mut sel = RationalMatrix::zeros(heavy.len(), basis.len());
    for (row, &c) in heavy.iter().enumerate() {
        sel[(row, c)] = rat(1);
    }
    let light = solve_affine(&sel, &vec![rat(0); heavy.len()]).unwrap();
    intersect_affine(&cocycles, &light).unwrap()
}

pub fn gens_of(model: &FreeCdga) -> Arc<GeneratorSet> {
    model.generators().clone()
}

pub fn vector_of<A: GradedAlgebra + ?Sized>(
    a: &A,
    degree: u32,
    coords: Vec<Rational>,
) -> GradedVector {
    let v = GradedVector::new(degree, coords);
    a.check_vector(&v).unwrap();
    v
}

/// Fixed-seed proptest configuration; failures replay exactly.
pub fn config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        rng_seed: proptest::test_runner::RngSeed::Fixed(SEED),
        failure_persistence: None,
        ..Default::default()
    }
}
