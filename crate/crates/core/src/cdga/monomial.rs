use std::cmp::Ordering;

use super::generators::GeneratorSet;

/// Exponent vector over a [`GeneratorSet`]. Odd generators have exponent 0 or 1.
///
/// Ordering is lexicographic on exponent vectors, largest first, so that for
/// generators `x, y` of degree 2 the degree-4 monomials sort as `x², xy, y²`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one(n_gens: usize) -> Self {
        Self(vec![0; n_gens])
    }

    pub fn generator(n_gens: usize, i: usize) -> Self {
        let mut e = vec![0; n_gens];
        e[i] = 1;
        Self(e)
    }

    /// Raw constructor; callers are responsible for the exterior constraint.
    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self, gens: &GeneratorSet) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| e * gens.degree(i))
            .sum()
    }

    /// Total exponent over the generators with index `>= from`.
    pub fn weight_from(&self, from: usize) -> u32 {
        self.0[from..].iter().sum()
    }

    /// Checks the exterior constraint against `gens`.
    pub fn is_valid_for(&self, gens: &GeneratorSet) -> bool {
        self.0.len() == gens.len()
            && self
                .0
                .iter()
                .enumerate()
                .all(|(i, &e)| !gens.is_odd(i) || e <= 1)
    }

    /// Product with Koszul sign: `Some((m, negative))` or `None` when an odd
    /// generator would appear twice.
    ///
    /// Both factors are written in generator order; moving each odd letter of
    /// `rhs` left past the odd letters of `self` with larger index contributes
    /// one sign each.
    pub fn mul(&self, rhs: &Self, gens: &GeneratorSet) -> Option<(Self, bool)> {
        debug_assert_eq!(self.0.len(), rhs.0.len());
        let mut odd_left_above = self
            .0
            .iter()
            .enumerate()
            .filter(|&(i, &e)| e == 1 && gens.is_odd(i))
            .count();
        let mut negative = false;
        let mut out = Vec::with_capacity(self.0.len());
        for (i, (&a, &b)) in self.0.iter().zip(&rhs.0).enumerate() {
            if gens.is_odd(i) {
                if a == 1 && b == 1 {
                    return None;
                }
                if a == 1 {
                    odd_left_above -= 1;
                }
                if b == 1 && odd_left_above % 2 == 1 {
                    negative = !negative;
                }
            }
            out.push(a + b);
        }
        Some((Self(out), negative))
    }

    /// Monomial restricted to generators in `range`, others zeroed.
    pub(crate) fn restrict(&self, range: std::ops::Range<usize>) -> Self {
        let mut e = vec![0; self.0.len()];
        e[range.clone()].copy_from_slice(&self.0[range]);
        Self(e)
    }

    /// Pads the exponent vector with zeros up to `n` generators.
    pub fn extend_to(&self, n: usize) -> Self {
        let mut e = self.0.clone();
        e.resize(n, 0);
        Self(e)
    }

    pub fn render(&self, gens: &GeneratorSet) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        self.0
            .iter()
            .enumerate()
            .filter(|&(_, &e)| e > 0)
            .map(|(i, &e)| {
                let name = &gens.get(i).name;
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}
