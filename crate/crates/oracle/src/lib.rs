//! Slow reference computations for checking `immersion-core`.
//!
//! Nothing here calls the arithmetic, basis enumeration, linear algebra or
//! differential code of the main crate. Only the [`Monomial`] type and plain
//! data accessors (generator lists, product tables, coordinate vectors) are
//! shared.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use immersion_core::cdga::{
    Element, FinitePresentation, FreeCdga, GeneratorSet, GradedVector, Monomial,
};
use immersion_core::lift::LinearDgaSystem;
use immersion_core::linalg::Rational;
use num_traits::{One, Zero};

/// A polynomial in the free graded-commutative algebra: exponent vector to
/// coefficient.
pub type Poly = BTreeMap<Vec<u32>, Rational>;

fn add_term(p: &mut Poly, e: Vec<u32>, c: Rational) {
    if c.is_zero() {
        return;
    }
    match p.entry(e) {
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
        Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

pub fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (e, c) in b {
        add_term(&mut out, e.clone(), c.clone());
    }
    out
}

pub fn poly_scale(a: &Poly, c: &Rational) -> Poly {
    let mut out = Poly::new();
    for (e, x) in a {
        add_term(&mut out, e.clone(), x * c);
    }
    out
}

fn word(exps: &[u32]) -> Vec<usize> {
    let mut w = Vec::new();
    for (i, &e) in exps.iter().enumerate() {
        for _ in 0..e {
            w.push(i);
        }
    }
    w
}

/// Sorts a word of letters by adjacent swaps. Returns the sorted exponent
/// vector and the sign, or `None` if an odd letter repeats.
fn normalize(mut w: Vec<usize>, degrees: &[u32]) -> Option<(Vec<u32>, bool)> {
    let mut negative = false;
    let n = w.len();
    for pass in 0..n {
        for i in 0..n.saturating_sub(1 + pass) {
            if w[i] > w[i + 1] {
                if degrees[w[i]] % 2 == 1 && degrees[w[i + 1]] % 2 == 1 {
                    negative = !negative;
                }
                w.swap(i, i + 1);
            }
        }
    }
    let mut exps = vec![0u32; degrees.len()];
    for &l in &w {
        exps[l] += 1;
        if degrees[l] % 2 == 1 && exps[l] > 1 {
            return None;
        }
    }
    Some((exps, negative))
}

pub fn poly_mul(a: &Poly, b: &Poly, degrees: &[u32]) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let mut w = word(ea);
            w.extend(word(eb));
            if let Some((e, neg)) = normalize(w, degrees) {
                let c = ca * cb;
                add_term(&mut out, e, if neg { -c } else { c });
            }
        }
    }
    out
}

pub fn poly_one(n: usize) -> Poly {
    let mut p = Poly::new();
    p.insert(vec![0; n], Rational::one());
    p
}

pub fn poly_degree_of(e: &[u32], degrees: &[u32]) -> u32 {
    e.iter().zip(degrees).map(|(a, b)| a * b).sum()
}

pub fn poly_from_element(x: &Element) -> Poly {
    let mut p = Poly::new();
    for (m, c) in x.terms() {
        add_term(&mut p, m.exponents().to_vec(), c.clone());
    }
    p
}

pub fn element_from_poly(p: &Poly, gens: &std::sync::Arc<GeneratorSet>) -> Element {
    Element::from_terms(
        gens,
        p.iter()
            .map(|(e, c)| (c.clone(), Monomial::from_exponents(e.clone()))),
    )
    .expect("oracle produces valid monomials")
}

fn gen_degrees(gens: &GeneratorSet) -> Vec<u32> {
    gens.iter().map(|g| g.degree).collect()
}

// ---------------------------------------------------------------------------
// power series

/// Multiplies two series given degree by degree, truncated at `max_degree`.
pub fn series_mul(a: &[Element], b: &[Element], max_degree: u32) -> Vec<Element> {
    let gens = a
        .first()
        .or(b.first())
        .expect("non-empty series")
        .generators()
        .clone();
    let degrees = gen_degrees(&gens);
    let mut out = vec![Poly::new(); max_degree as usize + 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j <= max_degree as usize {
                let prod = poly_mul(&poly_from_element(x), &poly_from_element(y), &degrees);
                out[i + j] = poly_add(&out[i + j], &prod);
            }
        }
    }
    out.iter().map(|p| element_from_poly(p, &gens)).collect()
}

/// Truncated inverse of `1 + t_1 + t_2 + …`, where `total[k]` is the
/// homogeneous part of degree `k`.
pub fn invert_series(total: &[Element], max_degree: u32) -> Result<Vec<Element>, String> {
    let first = total.first().ok_or("empty series")?;
    let gens = first.generators().clone();
    let degrees = gen_degrees(&gens);
    if poly_from_element(first) != poly_one(gens.len()) {
        return Err("constant term of the series must be 1".into());
    }
    let part = |k: usize| total.get(k).map(poly_from_element).unwrap_or_default();
    let mut inv: Vec<Poly> = vec![poly_one(gens.len())];
    for k in 1..=max_degree as usize {
        let mut acc = Poly::new();
        for i in 1..=k {
            let t = part(i);
            if !t.is_empty() {
                acc = poly_add(&acc, &poly_mul(&t, &inv[k - i], &degrees));
            }
        }
        inv.push(poly_scale(&acc, &-Rational::one()));
    }
    Ok(inv.iter().map(|p| element_from_poly(p, &gens)).collect())
}

// ---------------------------------------------------------------------------
// monomial bases

/// All monomials of degree `k`, by exhaustive scan of bounded exponent
/// vectors.
pub fn naive_monomials(gens: &GeneratorSet, k: u32) -> Vec<Monomial> {
    let degrees = gen_degrees(gens);
    let bounds: Vec<u32> = degrees
        .iter()
        .map(|&d| if d % 2 == 1 { 1.min(k / d) } else { k / d })
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![0u32; degrees.len()];
    loop {
        if poly_degree_of(&cur, &degrees) == k {
            out.push(Monomial::from_exponents(cur.clone()));
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == cur.len() {
                return out;
            }
            if cur[i] < bounds[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// Exponent vectors of degree `k` in descending lexicographic order.
pub fn ordered_basis(gens: &GeneratorSet, k: u32) -> Vec<Vec<u32>> {
    let mut b: Vec<Vec<u32>> = naive_monomials(gens, k)
        .into_iter()
        .map(|m| m.exponents().to_vec())
        .collect();
    b.sort_by(|x, y| y.cmp(x));
    b
}

fn poly_from_coords(basis: &[Vec<u32>], coords: &[Rational]) -> Poly {
    let mut p = Poly::new();
    for (e, c) in basis.iter().zip(coords) {
        add_term(&mut p, e.clone(), c.clone());
    }
    p
}

fn coords_from_poly(basis: &[Vec<u32>], p: &Poly) -> Vec<Rational> {
    for e in p.keys() {
        assert!(basis.contains(e), "term outside the basis");
    }
    basis
        .iter()
        .map(|e| p.get(e).cloned().unwrap_or_else(Rational::zero))
        .collect()
}

/// `d` on a free algebra by the Leibniz rule, letter by letter.
pub fn leibniz(p: &Poly, gen_diffs: &[Poly], degrees: &[u32]) -> Poly {
    let mut out = Poly::new();
    for (e, c) in p {
        let w = word(e);
        let mut sign_degree = 0u32;
        for (pos, &l) in w.iter().enumerate() {
            let prefix = poly_from_word(&w[..pos], degrees);
            let suffix = poly_from_word(&w[pos + 1..], degrees);
            let term = poly_mul(&poly_mul(&prefix, &gen_diffs[l], degrees), &suffix, degrees);
            let s = if sign_degree % 2 == 1 {
                -c.clone()
            } else {
                c.clone()
            };
            out = poly_add(&out, &poly_scale(&term, &s));
            sign_degree += degrees[l];
        }
    }
    out
}

fn poly_from_word(w: &[usize], degrees: &[u32]) -> Poly {
    match normalize(w.to_vec(), degrees) {
        Some((e, neg)) => {
            let mut p = Poly::new();
            p.insert(
                e,
                if neg {
                    -Rational::one()
                } else {
                    Rational::one()
                },
            );
            p
        }
        None => Poly::new(),
    }
}

fn free_diffs(model: &FreeCdga) -> Vec<Poly> {
    (0..model.generators().len())
        .map(|i| poly_from_element(model.generator_differential(i)))
        .collect()
}

// ---------------------------------------------------------------------------
// linear algebra

/// Gauss–Jordan elimination of `[a | b]`. Returns a particular solution with
/// free variables zero and a kernel basis, or `None` if inconsistent.
pub fn gauss_solve(
    a: &[Vec<Rational>],
    b: &[Rational],
    cols: usize,
) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..=cols {
                    let v = &rows[r][j] * &f;
                    rows[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut point = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        point[c] = rows[i][cols].clone();
    }
    let mut kernel = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[f] = Rational::one();
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = -rows[i][f].clone();
        }
        kernel.push(v);
    }
    Some((point, kernel))
}

/// Solution set of a linear system, kept together with its equations.
#[derive(Clone, Debug)]
pub struct OracleSolution {
    pub matrix: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    pub cols: usize,
    pub point: Option<Vec<Rational>>,
    pub directions: Vec<Vec<Rational>>,
}

impl OracleSolution {
    pub fn is_empty(&self) -> bool {
        self.point.is_none()
    }

    pub fn dim(&self) -> Option<usize> {
        self.point.as_ref().map(|_| self.directions.len())
    }

    /// Whether `x` satisfies every equation.
    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.cols
            && self.matrix.iter().zip(&self.rhs).all(|(row, b)| {
                let s: Rational = row.iter().zip(x).map(|(a, v)| a * v).sum();
                &s == b
            })
    }

    /// Whether `v` is a solution of the homogeneous system.
    pub fn contains_direction(&self, v: &[Rational]) -> bool {
        v.len() == self.cols
            && self.matrix.iter().all(|row| {
                row.iter()
                    .zip(v)
                    .map(|(a, x)| a * x)
                    .sum::<Rational>()
                    .is_zero()
            })
    }
}

/// Re-derives the solution space of `dxᵢ = aᵢ + Σ aⁱⱼxⱼ` over a free
/// ambient: builds every column by differentiating and multiplying basis
/// monomials directly, then eliminates.
pub fn naive_linear_solve(system: &LinearDgaSystem<'_, FreeCdga>) -> OracleSolution {
    let ambient = system.ambient();
    let gens = ambient.generators();
    let degrees = gen_degrees(gens);
    let diffs = free_diffs(ambient);
    let ns = system.degrees();
    let k = ns.len();
    let src: Vec<Vec<Vec<u32>>> = ns.iter().map(|&n| ordered_basis(gens, n)).collect();
    let dst: Vec<Vec<Vec<u32>>> = ns.iter().map(|&n| ordered_basis(gens, n + 1)).collect();
    let cols: usize = src.iter().map(Vec::len).sum();
    let rows: usize = dst.iter().map(Vec::len).sum();
    let mut matrix = vec![vec![Rational::zero(); cols]; rows];
    let mut rhs = Vec::with_capacity(rows);
    let mut row0 = 0;
    for i in 0..k {
        let mut col0 = 0;
        for j in 0..k {
            let coeff = system
                .coefficient(i, j)
                .map(|a| poly_from_coords(&ordered_basis(gens, a.degree), &a.coords));
            for (c, e) in src[j].iter().enumerate() {
                let mut mono = Poly::new();
                mono.insert(e.clone(), Rational::one());
                let mut col = Poly::new();
                if i == j {
                    col = leibniz(&mono, &diffs, &degrees);
                }
                if let Some(a) = &coeff {
                    col = poly_add(
                        &col,
                        &poly_scale(&poly_mul(a, &mono, &degrees), &-Rational::one()),
                    );
                }
                for (r, x) in coords_from_poly(&dst[i], &col).into_iter().enumerate() {
                    matrix[row0 + r][col0 + c] = x;
                }
            }
            col0 += src[j].len();
        }
        let constant = &system.constants()[i];
        rhs.extend(coords_from_poly(
            &dst[i],
            &poly_from_coords(&dst[i], &constant.coords),
        ));
        row0 += dst[i].len();
    }
    let solved = gauss_solve(&matrix, &rhs, cols);
    let (point, directions) = match solved {
        Some((p, d)) => (Some(p), d),
        None => (None, Vec::new()),
    };
    OracleSolution {
        matrix,
        rhs,
        cols,
        point,
        directions,
    }
}

// ---------------------------------------------------------------------------
// morphism checks

/// An algebra the oracle can multiply and differentiate in on its own.
pub trait OracleAlgebra {
    type Elem: Clone + PartialEq + std::fmt::Debug;
    fn embed(&self, v: &GradedVector) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, a: &Self::Elem, c: &Rational) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn d(&self, a: &Self::Elem) -> Self::Elem;
}

pub struct FreeOracle<'a> {
    model: &'a FreeCdga,
    degrees: Vec<u32>,
    diffs: Vec<Poly>,
}

impl<'a> FreeOracle<'a> {
    pub fn new(model: &'a FreeCdga) -> Self {
        Self {
            model,
            degrees: gen_degrees(model.generators()),
            diffs: free_diffs(model),
        }
    }
}

impl OracleAlgebra for FreeOracle<'_> {
    type Elem = Poly;
    fn embed(&self, v: &GradedVector) -> Poly {
        poly_from_coords(&ordered_basis(self.model.generators(), v.degree), &v.coords)
    }
    fn one(&self) -> Poly {
        poly_one(self.degrees.len())
    }
    fn zero(&self) -> Poly {
        Poly::new()
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        poly_add(a, b)
    }
    fn scale(&self, a: &Poly, c: &Rational) -> Poly {
        poly_scale(a, c)
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        poly_mul(a, b, &self.degrees)
    }
    fn d(&self, a: &Poly) -> Poly {
        leibniz(a, &self.diffs, &self.degrees)
    }
}

/// Elements as `(degree, basis index) → coefficient`.
pub type TableElem = BTreeMap<(u32, usize), Rational>;

pub struct PresentationOracle<'a> {
    pres: &'a FinitePresentation,
}

impl<'a> PresentationOracle<'a> {
    pub fn new(pres: &'a FinitePresentation) -> Self {
        Self { pres }
    }
}

fn table_add(out: &mut TableElem, key: (u32, usize), c: Rational) {
    let slot = out.entry(key).or_insert_with(Rational::zero);
    *slot += c;
    if slot.is_zero() {
        out.remove(&key);
    }
}

impl OracleAlgebra for PresentationOracle<'_> {
    type Elem = TableElem;
    fn embed(&self, v: &GradedVector) -> TableElem {
        let mut out = TableElem::new();
        for (i, c) in v.coords.iter().enumerate() {
            table_add(&mut out, (v.degree, i), c.clone());
        }
        out
    }
    fn one(&self) -> TableElem {
        let mut out = TableElem::new();
        out.insert((0, 0), Rational::one());
        out
    }
    fn zero(&self) -> TableElem {
        TableElem::new()
    }
    fn add(&self, a: &TableElem, b: &TableElem) -> TableElem {
        let mut out = a.clone();
        for (k, c) in b {
            table_add(&mut out, *k, c.clone());
        }
        out
    }
    fn scale(&self, a: &TableElem, c: &Rational) -> TableElem {
        let mut out = TableElem::new();
        for (k, x) in a {
            table_add(&mut out, *k, x * c);
        }
        out
    }
    fn mul(&self, a: &TableElem, b: &TableElem) -> TableElem {
        let table = self.pres.product_table();
        let mut out = TableElem::new();
        for (&(da, ia), x) in a {
            for (&(db, ib), y) in b {
                if da == 0 {
                    table_add(&mut out, (db, ib), x * y);
                } else if db == 0 {
                    table_add(&mut out, (da, ia), x * y);
                } else if let Some(p) = table.get(&(da, ia, db, ib)) {
                    for (o, c) in p.iter().enumerate() {
                        table_add(&mut out, (da + db, o), x * y * c);
                    }
                }
            }
        }
        out
    }
    fn d(&self, a: &TableElem) -> TableElem {
        let diffs = self.pres.differentials();
        let mut out = TableElem::new();
        for (&(k, i), x) in a {
            if let Some(m) = diffs.get(k as usize) {
                for r in 0..m.rows() {
                    table_add(&mut out, (k + 1, r), x * &m[(r, i)]);
                }
            }
        }
        out
    }
}

/// Checks `φ(dg) = d(φg)` for every generator `g` of `source` of degree
/// `<= max_degree`; returns the first failing generator.
pub fn check_morphism<T: OracleAlgebra>(
    source: &FreeCdga,
    target: &T,
    images: &[GradedVector],
    max_degree: u32,
) -> Result<(), String> {
    let gens = source.generators();
    if images.len() != gens.len() {
        return Err("wrong number of images".into());
    }
    let imgs: Vec<T::Elem> = images.iter().map(|v| target.embed(v)).collect();
    for (i, g) in gens.iter().enumerate() {
        if g.degree > max_degree {
            continue;
        }
        if images[i].degree != g.degree {
            return Err(format!("image of `{}` has the wrong degree", g.name));
        }
        let mut lhs = target.zero();
        for (e, c) in poly_from_element(source.generator_differential(i)) {
            let mut prod = target.one();
            for l in word(&e) {
                prod = target.mul(&prod, &imgs[l]);
            }
            lhs = target.add(&lhs, &target.scale(&prod, &c));
        }
        let rhs = target.d(&imgs[i]);
        if lhs != rhs {
            return Err(format!("`{}`: φ(dg) = {lhs:?}, d(φg) = {rhs:?}", g.name));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// generating functions

/// Coefficients through `max_degree` of `Π 1/(1 − t^d)` over even `d` and
/// `Π (1 + t^d)` over odd `d`.
pub fn free_dimension_series(degrees: &[u32], max_degree: u32) -> Vec<usize> {
    let n = max_degree as usize;
    let mut series = vec![0usize; n + 1];
    series[0] = 1;
    for &d in degrees {
        let d = d as usize;
        if d % 2 == 0 {
            for k in d..=n {
                series[k] += series[k - d];
            }
        } else {
            for k in (d..=n).rev() {
                series[k] += series[k - d];
            }
        }
    }
    series
}

/// Degrees of polynomial generators of `H*(BSO(r); Q)`.
pub fn bso_generator_degrees(r: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (1..=(r.saturating_sub(1)) / 2).map(|j| 4 * j).collect();
    if r % 2 == 0 && r > 0 {
        out.push(r);
    }
    out
}

/// Per-degree dimensions of `H*(BSO(m) × BSO(n − m); Q)`.
pub fn bso_product_dimensions(m: u32, n: u32, max_degree: u32) -> Vec<usize> {
    let mut degrees = bso_generator_degrees(m);
    degrees.extend(bso_generator_degrees(n - m));
    free_dimension_series(&degrees, max_degree)
}
