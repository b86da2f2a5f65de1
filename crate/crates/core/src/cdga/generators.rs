use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// Ordered generators of a free graded-commutative algebra. The order is fixed
/// at construction and determines monomial order and Koszul signs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GeneratorSet {
    gens: Vec<Generator>,
}

impl fmt::Debug for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(
                self.gens
                    .iter()
                    .map(|g| format!("{}({})", g.name, g.degree)),
            )
            .finish()
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl GeneratorSet {
    /// Validates names (unique identifiers) and degrees (at least 2).
    pub fn new<S: Into<String>>(gens: impl IntoIterator<Item = (S, u32)>) -> Result<Arc<Self>> {
        let gens: Vec<Generator> = gens
            .into_iter()
            .map(|(n, d)| Generator {
                name: n.into(),
                degree: d,
            })
            .collect();
        for (i, g) in gens.iter().enumerate() {
            if !is_identifier(&g.name) {
                return Err(Error::Input(format!(
                    "generator name `{}` is not an identifier",
                    g.name
                )));
            }
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::Input(format!(
                    "duplicate generator name `{}`",
                    g.name
                )));
            }
            match g.degree {
                0 => {
                    return Err(Error::Input(format!("generator `{}` has degree 0", g.name)));
                }
                1 => {
                    return Err(Error::DegreeOneGenerator {
                        name: g.name.clone(),
                    })
                }
                _ => {}
            }
        }
        Ok(Arc::new(Self { gens }))
    }

    pub fn empty() -> Arc<Self> {
        Arc::new(Self { gens: Vec::new() })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn get(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator> {
        self.gens.iter()
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.gens[i].degree
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.gens[i].is_odd()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// `self` followed by `other`, as used for a relative model `B ⊗ ΛW`.
    pub fn concat(&self, other: &Self) -> Result<Arc<Self>> {
        Self::new(
            self.gens
                .iter()
                .chain(&other.gens)
                .map(|g| (g.name.clone(), g.degree)),
        )
    }

    /// True when `self` is an initial segment of `other`.
    pub fn is_prefix_of(&self, other: &Self) -> bool {
        other.gens.len() >= self.gens.len() && other.gens[..self.gens.len()] == self.gens[..]
    }
}
