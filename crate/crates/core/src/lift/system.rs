use crate::cdga::{GradedAlgebra, GradedVector};
use crate::error::{Error, Result};
use crate::linalg::{solve_affine, zero_vector, AffineSubspace, Rational, RationalMatrix};

/// The system `dxᵢ = aᵢ + Σⱼ aⁱⱼ·xⱼ` with `|xᵢ| = nᵢ`, over an enumerable dga.
///
/// Unknowns are ordered by non-decreasing degree. A solution is a point of
/// `V = ⊕ᵢ A^(nᵢ)`, written in the concatenated canonical bases.
pub struct LinearDgaSystem<'a, A: GradedAlgebra + ?Sized> {
    ambient: &'a A,
    degrees: Vec<u32>,
    constants: Vec<GradedVector>,
    coefficients: Vec<Vec<Option<GradedVector>>>,
}

impl<'a, A: GradedAlgebra + ?Sized> LinearDgaSystem<'a, A> {
    /// `coefficients[i][j]` is `aⁱⱼ`; `None` (or a zero vector) means no term.
    pub fn new(
        ambient: &'a A,
        degrees: Vec<u32>,
        constants: Vec<GradedVector>,
        coefficients: Vec<Vec<Option<GradedVector>>>,
    ) -> Result<Self> {
        let k = degrees.len();
        if constants.len() != k
            || coefficients.len() != k
            || coefficients.iter().any(|r| r.len() != k)
        {
            return Err(Error::IllGraded(format!(
                "system with {k} unknowns needs {k} constants and a {k}x{k} coefficient matrix"
            )));
        }
        if let Some(&bad) = degrees.iter().find(|&&n| n < 2) {
            return Err(Error::IllGraded(format!(
                "unknown of degree {bad}; degrees must be at least 2"
            )));
        }
        if degrees.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::IllGraded(
                "unknown degrees must be sorted in non-decreasing order".into(),
            ));
        }
        for (i, c) in constants.iter().enumerate() {
            if c.degree != degrees[i] + 1 {
                return Err(Error::IllGraded(format!(
                    "constant of equation {i} has degree {}, expected {}",
                    c.degree,
                    degrees[i] + 1
                )));
            }
            ambient.check_vector(c)?;
        }
        let mut cleaned = Vec::with_capacity(k);
        for (i, row) in coefficients.into_iter().enumerate() {
            let mut out = Vec::with_capacity(k);
            for (j, a) in row.into_iter().enumerate() {
                let a = a.filter(|a| !a.is_zero());
                if let Some(a) = &a {
                    if a.degree + degrees[j] != degrees[i] + 1 {
                        return Err(Error::IllGraded(format!(
                            "coefficient ({i},{j}) has degree {}, expected {} - {} + 1",
                            a.degree, degrees[i], degrees[j]
                        )));
                    }
                    ambient.check_vector(a)?;
                }
                out.push(a);
            }
            cleaned.push(out);
        }
        Ok(Self {
            ambient,
            degrees,
            constants,
            coefficients: cleaned,
        })
    }

    pub fn ambient(&self) -> &A {
        self.ambient
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn constants(&self) -> &[GradedVector] {
        &self.constants
    }

    pub fn coefficient(&self, i: usize, j: usize) -> Option<&GradedVector> {
        self.coefficients[i][j].as_ref()
    }

    pub fn is_decoupled(&self) -> bool {
        self.coefficients.iter().flatten().all(Option::is_none)
    }

    /// Offsets of each unknown's block inside `V`, plus the total dimension.
    pub fn unknown_offsets(&self) -> (Vec<usize>, usize) {
        offsets(self.degrees.iter().map(|&n| self.ambient.dim(n)))
    }

    /// Offsets of each equation's block inside `⊕ᵢ A^(nᵢ+1)`.
    pub fn equation_offsets(&self) -> (Vec<usize>, usize) {
        offsets(self.degrees.iter().map(|&n| self.ambient.dim(n + 1)))
    }

    /// The matrix `D − T` and right-hand side `C` with `(D − T)v = C`.
    pub fn assemble(&self) -> Result<(RationalMatrix, Vec<Rational>)> {
        let (col_off, cols) = self.unknown_offsets();
        let (row_off, rows) = self.equation_offsets();
        let mut m = RationalMatrix::zeros(rows, cols);
        let mut rhs = zero_vector(rows);
        for (i, &n) in self.degrees.iter().enumerate() {
            if !self.ambient.has_zero_differential() {
                m.add_block(
                    row_off[i],
                    col_off[i],
                    &self.ambient.differential_matrix(n),
                    false,
                );
            }
            for (j, a) in self.coefficients[i].iter().enumerate() {
                if let Some(a) = a {
                    let t = self
                        .ambient
                        .left_multiplication_matrix(a, self.degrees[j])?;
                    m.add_block(row_off[i], col_off[j], &t, true);
                }
            }
            rhs[row_off[i]..row_off[i] + self.constants[i].coords.len()]
                .clone_from_slice(&self.constants[i].coords);
        }
        Ok((m, rhs))
    }

    /// Splits a point of `V` into one vector per unknown.
    pub fn split(&self, v: &[Rational]) -> Vec<GradedVector> {
        let (off, total) = self.unknown_offsets();
        assert_eq!(v.len(), total);
        self.degrees
            .iter()
            .enumerate()
            .map(|(i, &n)| GradedVector::new(n, v[off[i]..off[i] + self.ambient.dim(n)].to_vec()))
            .collect()
    }

    /// Splits a vector of the equation space into one vector per equation.
    pub fn split_equations(&self, v: &[Rational]) -> Vec<GradedVector> {
        let (off, total) = self.equation_offsets();
        assert_eq!(v.len(), total);
        self.degrees
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                GradedVector::new(n + 1, v[off[i]..off[i] + self.ambient.dim(n + 1)].to_vec())
            })
            .collect()
    }

    /// Checks the equations directly on candidate values, without the
    /// assembled matrix.
    pub fn is_solution(&self, xs: &[GradedVector]) -> Result<bool> {
        if xs.len() != self.degrees.len() {
            return Ok(false);
        }
        for (i, x) in xs.iter().enumerate() {
            if x.degree != self.degrees[i] {
                return Ok(false);
            }
            let mut rhs = self.constants[i].clone();
            for (j, a) in self.coefficients[i].iter().enumerate() {
                if let Some(a) = a {
                    rhs = rhs.add(&self.ambient.product(a, &xs[j])?)?;
                }
            }
            if self.ambient.apply_differential(x)? != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn offsets(dims: impl Iterator<Item = usize>) -> (Vec<usize>, usize) {
    let mut off = Vec::new();
    let mut acc = 0;
    for d in dims {
        off.push(acc);
        acc += d;
    }
    (off, acc)
}

/// The affine space of solutions of `system` in `V = ⊕ᵢ A^(nᵢ)`.
pub fn solve_linear_dga_system<A: GradedAlgebra + ?Sized>(
    system: &LinearDgaSystem<'_, A>,
) -> Result<AffineSubspace> {
    let (m, rhs) = system.assemble()?;
    solve_affine(&m, &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::{Element, FreeCdga, GeneratorSet};
    use crate::linalg::{intersect_affine, rat};

    fn sphere() -> FreeCdga {
        FreeCdga::from_named(&[("x", 2), ("y", 3)], |g| {
            Ok(vec![Element::zero(g), Element::generator(g, 0).pow(2)?])
        })
        .unwrap()
    }

    #[test]
    fn closed_elements_with_zero_differential() {
        let a = FreeCdga::with_zero_differential(GeneratorSet::new([("x", 2), ("y", 2)]).unwrap());
        let s = LinearDgaSystem::new(&a, vec![4], vec![a.zero(5)], vec![vec![None]]).unwrap();
        let sol = solve_linear_dga_system(&s).unwrap();
        assert_eq!(sol.dim(), Some(3));
    }

    #[test]
    fn unique_primitive_of_x_squared() {
        let a = sphere();
        let x2 = a
            .to_vector(&a.generator("x").unwrap().pow(2).unwrap(), 4)
            .unwrap();
        let s = LinearDgaSystem::new(&a, vec![3], vec![x2], vec![vec![None]]).unwrap();
        let sol = solve_linear_dga_system(&s).unwrap();
        assert_eq!(sol.dim(), Some(0));
        let y = a.to_vector(&a.generator("y").unwrap(), 3).unwrap();
        assert_eq!(s.split(sol.point().unwrap()), vec![y]);
    }

    #[test]
    fn ill_graded_rejected() {
        let a = sphere();
        assert!(matches!(
            LinearDgaSystem::new(&a, vec![3], vec![a.zero(3)], vec![vec![None]]),
            Err(Error::IllGraded(_))
        ));
        assert!(matches!(
            LinearDgaSystem::new(
                &a,
                vec![4, 3],
                vec![a.zero(5), a.zero(4)],
                vec![vec![None, None]; 2]
            ),
            Err(Error::IllGraded(_))
        ));
        // coefficient of the wrong degree
        let x = a.to_vector(&a.generator("x").unwrap(), 2).unwrap();
        assert!(matches!(
            LinearDgaSystem::new(
                &a,
                vec![3, 3],
                vec![a.zero(4), a.zero(4)],
                vec![vec![None, Some(x)], vec![None, None]]
            ),
            Err(Error::IllGraded(_))
        ));
    }

    #[test]
    fn coupled_system_points_solve_equations() {
        // in (x(2), y(3); dy = x²): dx₁ = 0, dx₂ = y·x₁ with |x₁| = 2, |x₂| = 4.
        // x₁ = c·x forces d x₂ = c·xy, but nothing in degree 4 has differential xy.
        let a = sphere();
        let y = a.to_vector(&a.generator("y").unwrap(), 3).unwrap();
        let s = LinearDgaSystem::new(
            &a,
            vec![2, 4],
            vec![a.zero(3), a.zero(5)],
            vec![vec![None, None], vec![Some(y), None]],
        )
        .unwrap();
        assert!(!s.is_decoupled());
        let sol = solve_linear_dga_system(&s).unwrap();
        assert_eq!(sol.dim(), Some(1));
        for t in -2..=2 {
            let p = sol.sample(&[rat(t)]).unwrap();
            let parts = s.split(&p);
            assert!(parts[0].is_zero());
            assert!(s.is_solution(&parts).unwrap());
        }
        // x₁ = x is not a solution
        let x = a.to_vector(&a.generator("x").unwrap(), 2).unwrap();
        assert!(!s.is_solution(&[x, a.zero(4)]).unwrap());
    }

    #[test]
    fn redundant_rows_do_not_change_solutions() {
        let a = sphere();
        let x2 = a
            .to_vector(&a.generator("x").unwrap().pow(2).unwrap(), 4)
            .unwrap();
        let s = LinearDgaSystem::new(&a, vec![3], vec![x2], vec![vec![None]]).unwrap();
        let (m, rhs) = s.assemble().unwrap();
        let doubled_row =
            RationalMatrix::from_rows(vec![m.row(0).iter().map(|x| x * rat(2)).collect()]).unwrap();
        let m2 = m.vstack(&doubled_row).unwrap();
        let mut rhs2 = rhs.clone();
        rhs2.push(&rhs[0] * rat(2));
        let s1 = solve_affine(&m, &rhs).unwrap();
        let s2 = solve_affine(&m2, &rhs2).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(intersect_affine(&s1, &s2).unwrap(), s1);
    }
}
