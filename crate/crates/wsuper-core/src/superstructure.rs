//! Matrix superalgebras `M(m, n)` and `Q(n)`, graded tensor products with
//! Koszul signs, classification of simple superalgebras by invariants, the
//! type rules for outer tensor products of irreducible supermodules, and the
//! divisibility bounds for reduced enveloping algebras.

use crate::algebra_data::{LieSuperalgebra, Parity};
use crate::error::{Error, Result};
use crate::linalg::{Coordinatizer, Matrix, SparseEchelon, SparseVec, Vector};
use crate::modular::p2;
use crate::nilpotent_frame::{d_counters, jordan_decompose, levi_counters, levi_split, LeviCounters};
use crate::scalar::{rat, rational_sqrt, Scalar};
use num_bigint::BigInt;
use std::sync::Arc;

/// A simple superalgebra type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimpleType {
    /// `M(m, n) = End(k^{m|n})`, normalized so that `m ≥ n`.
    M { m: usize, n: usize },
    /// `Q(n)`.
    Q { n: usize },
}

impl SimpleType {
    /// `M(m, n)` with the sizes put in normal order.
    pub fn m(m: usize, n: usize) -> SimpleType {
        SimpleType::M { m: m.max(n), n: m.min(n) }
    }

    /// `(even, odd)` dimensions.
    pub fn dims(&self) -> (usize, usize) {
        match *self {
            SimpleType::M { m, n } => (m * m + n * n, 2 * m * n),
            SimpleType::Q { n } => (n * n, n * n),
        }
    }

    /// The tensor product predicted by the standard isomorphisms
    /// `M⊗M ≅ M`, `M⊗Q ≅ Q`, `Q⊗Q ≅ M`.
    pub fn tensor(&self, o: &SimpleType) -> SimpleType {
        match (*self, *o) {
            (SimpleType::M { m, n }, SimpleType::M { m: k, n: l }) => SimpleType::m(m * k + n * l, m * l + n * k),
            (SimpleType::M { m, n }, SimpleType::Q { n: k }) | (SimpleType::Q { n: k }, SimpleType::M { m, n }) => {
                SimpleType::Q { n: (m + n) * k }
            }
            (SimpleType::Q { n: a }, SimpleType::Q { n: b }) => SimpleType::m(a * b, a * b),
        }
    }
}

impl std::fmt::Display for SimpleType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SimpleType::M { m, n } => write!(f, "M({m},{n})"),
            SimpleType::Q { n } => write!(f, "Q({n})"),
        }
    }
}

#[derive(Debug)]
enum Repr {
    Table(Vec<SparseVec<usize>>),
    Tensor(SuperAlgebraTable, SuperAlgebraTable),
}

/// A finite-dimensional associative superalgebra with a unit, given by
/// structure constants on a homogeneous basis.  Tensor products are kept
/// factored and multiplied on demand.
#[derive(Clone, Debug)]
pub struct SuperAlgebraTable {
    names: Vec<String>,
    parity: Vec<Parity>,
    unit: SparseVec<usize>,
    generators: Vec<SparseVec<usize>>,
    repr: Arc<Repr>,
}

fn single(i: usize, c: Scalar) -> SparseVec<usize> {
    let mut v = SparseVec::new();
    if !c.is_zero() {
        v.insert(i, c);
    }
    v
}

fn flatten(m: &Matrix) -> Vector {
    m.entries().to_vec()
}

impl SuperAlgebraTable {
    /// Builds the table of the span of the given homogeneous matrices, which
    /// must be closed under multiplication and contain the identity.
    pub fn from_matrices(names: Vec<String>, parity: Vec<Parity>, mats: &[Matrix], generators: &[usize]) -> Result<Self> {
        let k = mats.first().map_or(0, Matrix::nrows);
        let n = k * k;
        let coord = Coordinatizer::new(mats.iter().map(flatten).collect(), n)?;
        let to_sparse = |v: Vector| -> SparseVec<usize> {
            v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
        };
        let mut table = Vec::with_capacity(mats.len() * mats.len());
        for a in mats {
            for b in mats {
                let c = coord
                    .coords(&flatten(&a.mul(b)))
                    .ok_or_else(|| Error::Invalid("matrix span is not closed under products".into()))?;
                table.push(to_sparse(c));
            }
        }
        let unit = coord
            .coords(&flatten(&Matrix::identity(k)))
            .ok_or_else(|| Error::Invalid("matrix span does not contain the identity".into()))?;
        Ok(SuperAlgebraTable {
            names,
            parity,
            unit: to_sparse(unit),
            generators: generators.iter().map(|&g| single(g, Scalar::one())).collect(),
            repr: Arc::new(Repr::Table(table)),
        })
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.parity.len()
    }

    /// `(even, odd)` dimensions.
    pub fn dims(&self) -> (usize, usize) {
        let odd = self.parity.iter().filter(|p| p.is_odd()).count();
        (self.dim() - odd, odd)
    }

    /// Basis names.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Parity of basis element `i`.
    pub fn parity(&self, i: usize) -> Parity {
        self.parity[i]
    }

    /// The unit element.
    pub fn unit(&self) -> &SparseVec<usize> {
        &self.unit
    }

    /// A homogeneous generating set of the algebra.
    pub fn generators(&self) -> &[SparseVec<usize>] {
        &self.generators
    }

    /// Product of basis elements `i·j`.
    pub fn mul_basis(&self, i: usize, j: usize) -> SparseVec<usize> {
        match &*self.repr {
            Repr::Table(t) => t[i * self.dim() + j].clone(),
            Repr::Tensor(a, b) => {
                let nb = b.dim();
                let (ai, bi) = (i / nb, i % nb);
                let (aj, bj) = (j / nb, j % nb);
                let sign = if b.parity(bi).is_odd() && a.parity(aj).is_odd() { Scalar::int(-1) } else { Scalar::one() };
                let pa = a.mul_basis(ai, aj);
                let pb = b.mul_basis(bi, bj);
                let mut out = SparseVec::new();
                for (x, c) in &pa {
                    for (y, d) in &pb {
                        out.insert(x * nb + y, &(&sign * c) * d);
                    }
                }
                out
            }
        }
    }

    /// Product of two elements.
    pub fn mul(&self, a: &SparseVec<usize>, b: &SparseVec<usize>) -> SparseVec<usize> {
        let mut out = SparseVec::new();
        for (i, c) in a {
            for (j, d) in b {
                crate::linalg::sparse_axpy(&mut out, &(c * d), &self.mul_basis(*i, *j));
            }
        }
        out
    }

    /// Parity of a homogeneous element (`None` for mixed or zero elements).
    pub fn parity_of(&self, a: &SparseVec<usize>) -> Option<Parity> {
        let mut ps = a.keys().map(|&i| self.parity[i]);
        let first = ps.next()?;
        ps.all(|p| p == first).then_some(first)
    }

    /// The full structure constants `e_i e_j = Σ c_{ij}^k e_k`.
    pub fn structure_constants(&self) -> Vec<Vec<SparseVec<usize>>> {
        (0..self.dim()).map(|i| (0..self.dim()).map(|j| self.mul_basis(i, j)).collect()).collect()
    }

    /// Checks associativity on every basis triple.
    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let ij = self.mul_basis(i, j);
                (0..n).all(|k| {
                    let left = self.mul(&ij, &single(k, Scalar::one()));
                    let right = self.mul(&single(i, Scalar::one()), &self.mul_basis(j, k));
                    sparse_eq(&left, &right)
                })
            })
        })
    }

    /// Checks that the unit is a two-sided identity on the basis.
    pub fn unit_is_identity(&self) -> bool {
        (0..self.dim()).all(|i| {
            let e = single(i, Scalar::one());
            sparse_eq(&self.mul(&self.unit, &e), &e) && sparse_eq(&self.mul(&e, &self.unit), &e)
        })
    }

    /// `(even, odd)` dimensions of the ordinary center `{z : za = az}`.
    ///
    /// This is the invariant separating the types: `M(m, n)` has center `k`,
    /// while `Q(n)` has an additional odd central element.
    pub fn center_dims(&self) -> (usize, usize) {
        self.commutant_dims(false)
    }

    /// `(even, odd)` dimensions of the supercenter
    /// `{z : za = (−1)^{|z||a|}az}`, which is `k` for both types.
    pub fn supercenter_dims(&self) -> (usize, usize) {
        self.commutant_dims(true)
    }

    fn commutant_dims(&self, graded: bool) -> (usize, usize) {
        let mut dims = [0usize; 2];
        for (slot, par) in [Parity::Even, Parity::Odd].into_iter().enumerate() {
            let vars: Vec<usize> = (0..self.dim()).filter(|&i| self.parity[i] == par).collect();
            let mut ech: SparseEchelon<usize> = SparseEchelon::new();
            let mut tag = 0;
            for g in &self.generators {
                let gp = self.parity_of(g).unwrap_or(Parity::Even);
                let sign = if graded && gp.is_odd() && par.is_odd() { Scalar::int(-1) } else { Scalar::one() };
                // Row k of `z g − (−1)^{|z||g|} g z`, as a function of the unknowns.
                let mut rows: std::collections::BTreeMap<usize, SparseVec<usize>> = Default::default();
                for (u, &i) in vars.iter().enumerate() {
                    let e = single(i, Scalar::one());
                    let mut img = self.mul(&e, g);
                    crate::linalg::sparse_axpy(&mut img, &-&sign, &self.mul(g, &e));
                    for (k, c) in img {
                        rows.entry(k).or_default().insert(u, c);
                    }
                }
                for (_, r) in rows {
                    ech.insert(r, tag);
                    tag += 1;
                }
            }
            dims[slot] = vars.len() - ech.rank();
        }
        (dims[0], dims[1])
    }
}

fn sparse_eq(a: &SparseVec<usize>, b: &SparseVec<usize>) -> bool {
    let mut d = a.clone();
    crate::linalg::sparse_axpy(&mut d, &Scalar::int(-1), b);
    d.values().all(Scalar::is_zero)
}

fn matrix_unit(k: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(k, k);
    m.set(i, j, Scalar::one());
    m
}

/// Homogeneous basis matrices of `M(m, n)` (matrix units) with names and parities.
pub fn m_basis(m: usize, n: usize) -> (Vec<String>, Vec<Parity>, Vec<Matrix>) {
    let k = m + n;
    let mut out = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..k {
        for j in 0..k {
            out.0.push(format!("E{}{}", i + 1, j + 1));
            out.1.push(if (i < m) == (j < m) { Parity::Even } else { Parity::Odd });
            out.2.push(matrix_unit(k, i, j));
        }
    }
    out
}

/// Homogeneous basis matrices of `Q(n)`: `(A, 0; 0, A)` (even) and
/// `(0, B; −B, 0)` (odd) for matrix units `A`, `B`.
pub fn q_basis(n: usize) -> (Vec<String>, Vec<Parity>, Vec<Matrix>) {
    let k = 2 * n;
    let mut out = (Vec::new(), Vec::new(), Vec::new());
    for odd in [false, true] {
        for i in 0..n {
            for j in 0..n {
                let mut m = Matrix::zeros(k, k);
                if odd {
                    m.set(i, n + j, Scalar::one());
                    m.set(n + i, j, Scalar::int(-1));
                } else {
                    m.set(i, j, Scalar::one());
                    m.set(n + i, n + j, Scalar::one());
                }
                out.0.push(format!("{}{}{}", if odd { "B" } else { "A" }, i + 1, j + 1));
                out.1.push(if odd { Parity::Odd } else { Parity::Even });
                out.2.push(m);
            }
        }
    }
    out
}

fn chain_generators(k: usize, offset: usize, stride: usize) -> Vec<usize> {
    // E_{i,i+1}, E_{i+1,i} and E_{11} inside a k×k block of matrix units.
    let mut g = vec![offset];
    for i in 0..k.saturating_sub(1) {
        g.push(offset + i * stride + i + 1);
        g.push(offset + (i + 1) * stride + i);
    }
    g
}

/// The matrix superalgebra `M(m, n)`.
pub fn m_algebra(m: usize, n: usize) -> Result<SuperAlgebraTable> {
    if m + n == 0 {
        return Err(Error::Invalid("M(0,0) is not an algebra with unit".into()));
    }
    let (names, parity, mats) = m_basis(m, n);
    SuperAlgebraTable::from_matrices(names, parity, &mats, &chain_generators(m + n, 0, m + n))
}

/// The queer matrix superalgebra `Q(n)`.
pub fn q_algebra(n: usize) -> Result<SuperAlgebraTable> {
    if n == 0 {
        return Err(Error::Invalid("Q(0) is not an algebra with unit".into()));
    }
    let (names, parity, mats) = q_basis(n);
    let mut gens = chain_generators(n, 0, n);
    gens.push(n * n);
    SuperAlgebraTable::from_matrices(names, parity, &mats, &gens)
}

/// The algebra of a simple type.
pub fn simple_algebra(t: SimpleType) -> Result<SuperAlgebraTable> {
    match t {
        SimpleType::M { m, n } => m_algebra(m, n),
        SimpleType::Q { n } => q_algebra(n),
    }
}

/// The graded tensor product `A ⊗ B` with
/// `(a ⊗ b)(a′ ⊗ b′) = (−1)^{|b||a′|} aa′ ⊗ bb′`.
pub fn graded_tensor(a: &SuperAlgebraTable, b: &SuperAlgebraTable) -> SuperAlgebraTable {
    let nb = b.dim();
    let mut names = Vec::with_capacity(a.dim() * nb);
    let mut parity = Vec::with_capacity(a.dim() * nb);
    for i in 0..a.dim() {
        for j in 0..nb {
            names.push(format!("{}⊗{}", a.names[i], b.names[j]));
            parity.push(a.parity[i].add(b.parity[j]));
        }
    }
    let tensor = |x: &SparseVec<usize>, y: &SparseVec<usize>| -> SparseVec<usize> {
        let mut out = SparseVec::new();
        for (i, c) in x {
            for (j, d) in y {
                out.insert(i * nb + j, c * d);
            }
        }
        out
    };
    let mut generators: Vec<SparseVec<usize>> = a.generators.iter().map(|g| tensor(g, &b.unit)).collect();
    generators.extend(b.generators.iter().map(|h| tensor(&a.unit, h)));
    SuperAlgebraTable {
        names,
        parity,
        unit: tensor(&a.unit, &b.unit),
        generators,
        repr: Arc::new(Repr::Tensor(a.clone(), b.clone())),
    }
}

/// Decides whether a simple superalgebra is of type `M` or `Q` and its size,
/// from the total dimension, the even dimension and the center.
pub fn classify_simple(t: &SuperAlgebraTable) -> Result<SimpleType> {
    let (e, o) = t.dims();
    let total = e + o;
    let bad = || Error::Invalid(format!("superalgebra of dimension ({e}|{o}) is not simple of type M or Q"));
    match t.center_dims() {
        (1, 0) => {
            let s = (total as f64).sqrt().round() as usize;
            if s * s != total || o % 2 != 0 {
                return Err(bad());
            }
            // m + n = s, m·n = o/2.
            let prod = o / 2;
            let disc = s * s - 4 * prod;
            let r = (disc as f64).sqrt().round() as usize;
            if r * r != disc || !(s + r).is_multiple_of(2) {
                return Err(bad());
            }
            Ok(SimpleType::m((s + r) / 2, (s - r) / 2))
        }
        (1, 1) => {
            let n = (e as f64).sqrt().round() as usize;
            if n * n != e || e != o {
                return Err(bad());
            }
            Ok(SimpleType::Q { n })
        }
        _ => Err(bad()),
    }
}

/// Splits `Q(1) ⊗ Q(1)` over `ℚ(√−1)`: returns `(dim eAe, dim eA(1−e),
/// dim (1−e)A(1−e))` for the even idempotent `e = (1 + √−1·J₁J₂)/2`, which
/// is `(1, 1, 1)` exactly when the product is `M(1, 1)`.
pub fn split_q1_q1() -> Result<(usize, usize, usize)> {
    let q = q_algebra(1)?;
    let t = graded_tensor(&q, &q);
    // Basis: A⊗A, A⊗B, B⊗A, B⊗B; J₁ = B⊗A, J₂ = A⊗B.
    let j1j2 = t.mul(&single(2, Scalar::one()), &single(1, Scalar::one()));
    let i = Scalar::sqrt_of(&rat(-1, 1))?;
    let half = Scalar::frac(1, 2);
    let mut e = SparseVec::new();
    crate::linalg::sparse_axpy(&mut e, &half, t.unit());
    crate::linalg::sparse_axpy(&mut e, &(&half * &i), &j1j2);
    let mut f = t.unit().clone();
    crate::linalg::sparse_axpy(&mut f, &Scalar::int(-1), &e);
    if !sparse_eq(&t.mul(&e, &e), &e) {
        return Err(Error::Invalid("splitting element is not idempotent".into()));
    }
    let corner = |x: &SparseVec<usize>, y: &SparseVec<usize>| -> usize {
        let mut ech: SparseEchelon<usize> = SparseEchelon::new();
        for k in 0..t.dim() {
            let v = t.mul(&t.mul(x, &single(k, Scalar::one())), y);
            let v: SparseVec<usize> = v.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if !v.is_empty() {
                ech.insert(v, k);
            }
        }
        ech.rank()
    };
    Ok((corner(&e, &e), corner(&e, &f), corner(&f, &f)))
}

/// The Schur type of an irreducible supermodule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModuleType {
    /// Endomorphisms are scalars.
    M,
    /// Endomorphisms form `Q(1)`: an odd automorphism squaring to a scalar.
    Q,
}

/// A supermodule over a [`SuperAlgebraTable`], by action matrices of the
/// algebra basis.
#[derive(Clone, Debug)]
pub struct SuperModule {
    /// Parity of each basis vector.
    pub parity: Vec<Parity>,
    /// Action matrix of each basis element of the algebra.
    pub action: Vec<Matrix>,
    /// The recorded type, if known.
    pub tag: Option<ModuleType>,
}

fn is_zero_matrix(m: &Matrix) -> bool {
    m.entries().iter().all(Scalar::is_zero)
}

impl SuperModule {
    /// Dimension.
    pub fn dim(&self) -> usize {
        self.parity.len()
    }

    /// `(even, odd)` dimensions.
    pub fn dims(&self) -> (usize, usize) {
        let odd = self.parity.iter().filter(|p| p.is_odd()).count();
        (self.dim() - odd, odd)
    }

    /// Action of an algebra element.
    pub fn action_of(&self, a: &SparseVec<usize>) -> Matrix {
        let mut m = Matrix::zeros(self.dim(), self.dim());
        for (i, c) in a {
            m = m.add(&self.action[*i].scale(c));
        }
        m
    }

    /// Checks `ρ(ab) = ρ(a)ρ(b)`, `ρ(1) = 1` and that every `ρ(e_i)` has the
    /// parity of `e_i`.
    pub fn is_module_over(&self, alg: &SuperAlgebraTable) -> bool {
        let n = alg.dim();
        let d = self.dim();
        if self.action.len() != n {
            return false;
        }
        let graded = (0..n).all(|i| {
            (0..d).all(|r| {
                (0..d).all(|c| {
                    self.action[i].get(r, c).is_zero() || self.parity[r].add(self.parity[c]) == alg.parity(i)
                })
            })
        });
        let unit = is_zero_matrix(&self.action_of(alg.unit()).sub(&Matrix::identity(d)));
        graded
            && unit
            && (0..n).all(|i| {
                (0..n).all(|j| is_zero_matrix(&self.action[i].mul(&self.action[j]).sub(&self.action_of(&alg.mul_basis(i, j)))))
            })
    }

    /// The parity-changed module `ΠV`.
    pub fn parity_change(&self) -> SuperModule {
        SuperModule { parity: self.parity.iter().map(|p| p.add(Parity::Odd)).collect(), ..self.clone() }
    }

    /// A basis of the supercommutant `{T : Tρ(g) = (−1)^{|T||g|}ρ(g)T}` over
    /// the generators, split by parity.
    pub fn commutant(&self, alg: &SuperAlgebraTable) -> (Vec<Matrix>, Vec<Matrix>) {
        let d = self.dim();
        let gens: Vec<(Matrix, Parity)> =
            alg.generators().iter().map(|g| (self.action_of(g), alg.parity_of(g).unwrap_or(Parity::Even))).collect();
        let mut out = (Vec::new(), Vec::new());
        for par in [Parity::Even, Parity::Odd] {
            let cells: Vec<(usize, usize)> =
                (0..d).flat_map(|r| (0..d).map(move |c| (r, c))).filter(|&(r, c)| self.parity[r].add(self.parity[c]) == par).collect();
            let mut eqs: Vec<SparseVec<usize>> = Vec::new();
            for (g, gp) in &gens {
                let sign = if gp.is_odd() && par.is_odd() { Scalar::int(-1) } else { Scalar::one() };
                // (Tg − s gT)[r][c] = Σ_k T[r][k] g[k][c] − s Σ_k g[r][k] T[k][c].
                let mut rows: std::collections::BTreeMap<(usize, usize), SparseVec<usize>> = Default::default();
                let mut by_row: Vec<Vec<(usize, &Scalar)>> = vec![Vec::new(); d];
                let mut by_col: Vec<Vec<(usize, &Scalar)>> = vec![Vec::new(); d];
                for r in 0..d {
                    for c in 0..d {
                        let v = g.get(r, c);
                        if !v.is_zero() {
                            by_row[r].push((c, v));
                            by_col[c].push((r, v));
                        }
                    }
                }
                for (u, &(r, k)) in cells.iter().enumerate() {
                    for &(c, v) in &by_row[k] {
                        let e = rows.entry((r, c)).or_default();
                        let cur = e.get(&u).cloned().unwrap_or_else(Scalar::zero);
                        e.insert(u, &cur + v);
                    }
                    for &(rr, v) in &by_col[r] {
                        let e = rows.entry((rr, k)).or_default();
                        let cur = e.get(&u).cloned().unwrap_or_else(Scalar::zero);
                        e.insert(u, &cur - &(&sign * v));
                    }
                }
                eqs.extend(rows.into_values().map(|r| r.into_iter().filter(|(_, c)| !c.is_zero()).collect()));
            }
            for sol in crate::linalg::sparse_nullspace(eqs, cells.len()) {
                let mut t = Matrix::zeros(d, d);
                for (u, &(r, c)) in cells.iter().enumerate() {
                    t.set(r, c, sol[u].clone());
                }
                if par.is_odd() { out.1.push(t) } else { out.0.push(t) }
            }
        }
        out
    }

    /// Dimension of the span of the action matrices `ρ(A)`.
    pub fn image_dim(&self) -> usize {
        let mut ech: SparseEchelon<usize> = SparseEchelon::new();
        for (t, m) in self.action.iter().enumerate() {
            let v: SparseVec<usize> = m.entries().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect();
            if !v.is_empty() {
                ech.insert(v, t);
            }
        }
        ech.rank()
    }

    /// Detects the type of an irreducible module: type `M` when `ρ(A)` is all
    /// of `End(V)` and the commutant is one-dimensional, type `Q` when `ρ(A)`
    /// has half that dimension and the commutant has dimension `(1|1)`.
    pub fn detect_type(&self, alg: &SuperAlgebraTable) -> Result<ModuleType> {
        let d = self.dim();
        let (c0, c1) = self.commutant(alg);
        let img = self.image_dim();
        match (c0.len(), c1.len()) {
            (1, 0) if img == d * d => Ok(ModuleType::M),
            (1, 1) if 2 * img == d * d => Ok(ModuleType::Q),
            (a, b) => Err(Error::Invalid(format!(
                "module of dimension {d} is not irreducible of type M or Q (commutant ({a}|{b}), image {img})"
            ))),
        }
    }
}

/// The natural module `k^{m|n}` of `M(m, n)` or `k^{n|n}` of `Q(n)`.
pub fn natural_module(t: SimpleType) -> SuperModule {
    let (parity, mats, tag) = match t {
        SimpleType::M { m, n } => {
            let p = (0..m + n).map(|i| if i < m { Parity::Even } else { Parity::Odd }).collect();
            (p, m_basis(m, n).2, ModuleType::M)
        }
        SimpleType::Q { n } => {
            let p = (0..2 * n).map(|i| if i < n { Parity::Even } else { Parity::Odd }).collect();
            (p, q_basis(n).2, ModuleType::Q)
        }
    };
    SuperModule { parity, action: mats, tag: Some(tag) }
}

/// The outer tensor product `V ⊠ W` over `A ⊗ B` with
/// `(a ⊗ b)(v ⊗ w) = (−1)^{|b||v|} av ⊗ bw`.
pub fn outer_module(a: &SuperAlgebraTable, v: &SuperModule, b: &SuperAlgebraTable, w: &SuperModule) -> SuperModule {
    let (dv, dw) = (v.dim(), w.dim());
    let d = dv * dw;
    let parity: Vec<Parity> = (0..d).map(|k| v.parity[k / dw].add(w.parity[k % dw])).collect();
    let mut action = Vec::with_capacity(a.dim() * b.dim());
    for i in 0..a.dim() {
        for j in 0..b.dim() {
            let (ra, rb) = (&v.action[i], &w.action[j]);
            let mut m = Matrix::zeros(d, d);
            for vc in 0..dv {
                let sign = if b.parity(j).is_odd() && v.parity[vc].is_odd() { Scalar::int(-1) } else { Scalar::one() };
                for vr in 0..dv {
                    let x = ra.get(vr, vc);
                    if x.is_zero() {
                        continue;
                    }
                    for wc in 0..dw {
                        for wr in 0..dw {
                            let y = rb.get(wr, wc);
                            if !y.is_zero() {
                                m.set(vr * dw + wr, vc * dw + wc, &(&sign * x) * y);
                            }
                        }
                    }
                }
            }
            action.push(m);
        }
    }
    SuperModule { parity, action, tag: None }
}

/// Outcome of an outer tensor product with its predicted and verified types.
#[derive(Clone, Debug)]
pub struct OuterTensor {
    /// `V ⊠ W`.
    pub module: SuperModule,
    /// Predicted constituents `(dimension, type)`.
    pub predicted: Vec<(usize, ModuleType)>,
    /// Constituents found by explicit decomposition.
    pub found: Vec<(usize, ModuleType)>,
}

impl OuterTensor {
    /// True when the explicit decomposition matches the prediction.
    pub fn verified(&self) -> bool {
        let mut a = self.predicted.clone();
        let mut b = self.found.clone();
        a.sort_by_key(|x| (x.0, x.1 == ModuleType::Q));
        b.sort_by_key(|x| (x.0, x.1 == ModuleType::Q));
        a == b
    }
}

/// Forms `V ⊠ W` and decomposes it.  For two type-`Q` factors the even
/// operator `Φ = J_V ⊗ J_W` splits the module (over `ℚ(√s)` when `Φ² = s` is
/// not a rational square) into two constituents of type `M`.
pub fn outer_tensor(
    a: &SuperAlgebraTable,
    v: &SuperModule,
    b: &SuperAlgebraTable,
    w: &SuperModule,
) -> Result<OuterTensor> {
    let (tv, tw) = match (v.tag, w.tag) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(Error::Invalid("outer tensor products need type-tagged irreducibles".into())),
    };
    let ab = graded_tensor(a, b);
    let module = outer_module(a, v, b, w);
    let d = module.dim();
    let predicted = match (tv, tw) {
        (ModuleType::M, ModuleType::M) => vec![(d, ModuleType::M)],
        (ModuleType::Q, ModuleType::Q) => vec![(d / 2, ModuleType::M), (d / 2, ModuleType::M)],
        _ => vec![(d, ModuleType::Q)],
    };
    let found = if tv == ModuleType::Q && tw == ModuleType::Q {
        split_qq(&ab, v, b, w, a, &module)?
    } else {
        vec![(d, module.detect_type(&ab)?)]
    };
    Ok(OuterTensor { module, predicted, found })
}

fn split_qq(
    ab: &SuperAlgebraTable,
    v: &SuperModule,
    b: &SuperAlgebraTable,
    w: &SuperModule,
    a: &SuperAlgebraTable,
    module: &SuperModule,
) -> Result<Vec<(usize, ModuleType)>> {
    let jv = v.commutant(a).1.into_iter().next().ok_or_else(|| Error::Invalid("left factor is not of type Q".into()))?;
    let jw = w.commutant(b).1.into_iter().next().ok_or_else(|| Error::Invalid("right factor is not of type Q".into()))?;
    let (dv, dw) = (v.dim(), w.dim());
    let d = dv * dw;
    // Φ(v ⊗ w) = (−1)^{|J_W||v|} J_V v ⊗ J_W w.
    let mut phi = Matrix::zeros(d, d);
    for vc in 0..dv {
        let sign = if v.parity[vc].is_odd() { Scalar::int(-1) } else { Scalar::one() };
        for vr in 0..dv {
            let x = jv.get(vr, vc);
            if x.is_zero() {
                continue;
            }
            for wc in 0..dw {
                for wr in 0..dw {
                    let y = jw.get(wr, wc);
                    if !y.is_zero() {
                        phi.set(vr * dw + wr, vc * dw + wc, &(&sign * x) * y);
                    }
                }
            }
        }
    }
    for g in ab.generators() {
        let r = module.action_of(g);
        if !is_zero_matrix(&phi.mul(&r).sub(&r.mul(&phi))) {
            return Err(Error::Invalid("Φ does not commute with the action".into()));
        }
    }
    let sq = phi.mul(&phi);
    let s = sq.get(0, 0).clone();
    if !is_zero_matrix(&sq.sub(&Matrix::identity(d).scale(&s))) {
        return Err(Error::Invalid("Φ² is not a scalar".into()));
    }
    let sr = s.as_rational().ok_or_else(|| Error::Unsupported("Φ² outside ℚ".into()))?;
    let root = match rational_sqrt(&sr) {
        Some(r) => Scalar::from_rational(r),
        None => Scalar::sqrt_of(&sr)?,
    };
    let mut found = Vec::new();
    for sign in [Scalar::one(), Scalar::int(-1)] {
        let shifted = phi.sub(&Matrix::identity(d).scale(&(&sign * &root)));
        let piece = shifted.nullspace();
        let coord = Coordinatizer::new(piece.clone(), d)?;
        let mut action = Vec::with_capacity(module.action.len());
        for m in &module.action {
            let cols: Vec<Vector> = piece
                .iter()
                .map(|u| coord.coords(&m.mul_vec(u)).ok_or_else(|| Error::Invalid("eigenspace is not a submodule".into())))
                .collect::<Result<_>>()?;
            action.push(Matrix::from_cols(&cols, piece.len()));
        }
        // Eigenvectors of an even operator can be chosen homogeneous.
        let parity = homogeneous_parities(&piece, &module.parity)?;
        let sub = SuperModule { parity, action, tag: None };
        found.push((sub.dim(), sub.detect_type(ab)?));
    }
    Ok(found)
}

fn homogeneous_parities(piece: &[Vector], parity: &[Parity]) -> Result<Vec<Parity>> {
    piece
        .iter()
        .map(|u| {
            let mut ps = u.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| parity[i]);
            let first = ps.next().ok_or_else(|| Error::Invalid("zero basis vector".into()))?;
            if ps.all(|p| p == first) {
                Ok(first)
            } else {
                Err(Error::Invalid("eigenspace basis is not homogeneous".into()))
            }
        })
        .collect()
}

/// The divisor `p^{d′₀/2}·2^{(d′₁+l)/2}` for a direct sum of summands with
/// counters `(d₀, d₁)_i`, where `l` counts the summands with odd `d₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectSumBound {
    /// `Σ (d₀)_i`.
    pub d0: usize,
    /// `Σ (d₁)_i`.
    pub d1: usize,
    /// Number of summands with odd `d₁`.
    pub l: usize,
    /// The prime.
    pub p: u64,
    /// The bound.
    pub bound: BigInt,
    /// `p^{d′₀/2}·2^{⌊d′₁/2⌋}` for comparison.
    pub floor_bound: BigInt,
}

/// Computes [`DirectSumBound`].
pub fn direct_sum_bound(summands: &[(usize, usize)], p: u64) -> Result<DirectSumBound> {
    let d0: usize = summands.iter().map(|s| s.0).sum();
    let d1: usize = summands.iter().map(|s| s.1).sum();
    let l = summands.iter().filter(|s| s.1 % 2 == 1).count();
    if d0 % 2 == 1 {
        return Err(Error::Invalid(format!("d′₀ = {d0} is odd")));
    }
    if (d1 + l) % 2 == 1 {
        return Err(Error::Invalid(format!("d′₁ + l = {} is odd", d1 + l)));
    }
    Ok(DirectSumBound { d0, d1, l, p, bound: p2(p, d0 / 2, (d1 + l) / 2), floor_bound: p2(p, d0 / 2, d1 / 2) })
}

/// Divisibility bound for an arbitrary even `p`-character `x = s + n`,
/// assembled from the Levi subalgebra `g^s` and compared with the counters
/// of `g^x` computed directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArbitraryCharBound {
    /// The prime.
    pub p: u64,
    /// `d₀(x)`.
    pub d0: usize,
    /// `d₁(x)`.
    pub d1: usize,
    /// Number of Levi summands with odd `d₁`.
    pub l: usize,
    /// `p^{d₀/2}·2^{⌈d₁/2⌉}`.
    pub bound: BigInt,
    /// Per-summand counters and both assembly paths.
    pub levi: LeviCounters,
    /// The Levi and direct counters coincide.
    pub paths_agree: bool,
    /// At most one summand has odd `d₁`.
    pub at_most_one_odd: bool,
    /// `bound(l) · p^{dim u₀}·2^{dim u₁} = p^{d₀/2}·2^{(d₁+l)/2}`.
    pub composition_identity: bool,
}

/// Computes [`ArbitraryCharBound`] for the even element `x`.
pub fn arbitrary_char_bound(alg: &LieSuperalgebra, x: &[Scalar], p: u64) -> Result<ArbitraryCharBound> {
    let (s, n) = jordan_decompose(alg, x)?;
    let levi = if s.iter().all(Scalar::is_zero) {
        // Nilpotent character: the Levi subalgebra is g itself.
        let d = d_counters(alg, x)?;
        LeviCounters { summand_d: vec![d], nilradical_twice: (0, 0), via_levi: d, direct: d }
    } else {
        let split = levi_split(alg, &s)?;
        levi_counters(alg, &split, &n, x)?
    };
    let (d0, d1) = levi.direct;
    let l = levi.summand_d.iter().filter(|d| d.1 % 2 == 1).count();
    let paths_agree = levi.via_levi == levi.direct;
    let local = direct_sum_bound(&levi.summand_d, p)?;
    let (u0, u1) = (levi.nilradical_twice.0 / 2, levi.nilradical_twice.1 / 2);
    let composed = &local.bound * p2(p, u0, u1);
    let composition_identity = (d1 + l) % 2 == 0 && d0 % 2 == 0 && composed == p2(p, d0 / 2, (d1 + l) / 2);
    Ok(ArbitraryCharBound {
        p,
        d0,
        d1,
        l,
        bound: p2(p, d0 / 2, d1.div_ceil(2)),
        paths_agree,
        at_most_one_odd: l <= 1,
        composition_identity,
        levi,
    })
}

/// One row of the tensor-identity sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorIdentityRow {
    /// Left factor.
    pub left: SimpleType,
    /// Right factor.
    pub right: SimpleType,
    /// Type predicted by the tensor isomorphisms.
    pub predicted: SimpleType,
    /// Type found by [`classify_simple`] on the graded tensor product.
    pub found: Option<SimpleType>,
}

/// Every simple type with block sizes at most `max`: `M(m, n)` with
/// `m, n ≤ max` (in normal order) and `Q(n)` with `n ≤ max`.
pub fn simple_types(max: usize) -> Vec<SimpleType> {
    let mut out = Vec::new();
    for m in 0..=max {
        for n in 0..=m {
            if m + n > 0 {
                out.push(SimpleType::m(m, n));
            }
        }
    }
    out.extend((1..=max).map(|n| SimpleType::Q { n }));
    out
}

/// Classifies `A ⊗ B` for every pair of simple types with block sizes at
/// most `max`.
pub fn tensor_identity_sweep(max: usize, exec: crate::exec::Exec) -> Result<Vec<TensorIdentityRow>> {
    let types = simple_types(max);
    let algs: Vec<SuperAlgebraTable> = types.iter().map(|&t| simple_algebra(t)).collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..types.len()).flat_map(|i| (0..types.len()).map(move |j| (i, j))).collect();
    Ok(crate::exec::par_map(exec, &pairs, |&(i, j)| TensorIdentityRow {
        left: types[i],
        right: types[j],
        predicted: types[i].tensor(&types[j]),
        found: classify_simple(&graded_tensor(&algs[i], &algs[j])).ok(),
    }))
}

/// A typed irreducible: the natural module of a simple type or its parity change.
#[derive(Clone, Debug)]
pub struct TypedIrreducible {
    /// The algebra type.
    pub algebra: SimpleType,
    /// True for `ΠV`.
    pub shifted: bool,
    /// The module.
    pub module: SuperModule,
}

/// Natural modules (and their parity changes) of dimension at most `max_dim`.
pub fn typed_irreducibles(max_dim: usize) -> Vec<TypedIrreducible> {
    let mut out = Vec::new();
    for t in simple_types(max_dim) {
        let v = natural_module(t);
        if v.dim() > max_dim {
            continue;
        }
        out.push(TypedIrreducible { algebra: t, shifted: true, module: v.parity_change() });
        out.push(TypedIrreducible { algebra: t, shifted: false, module: v });
    }
    out
}

/// One row of the outer-tensor type table.
#[derive(Clone, Debug)]
pub struct TypeTableRow {
    /// Label of the left factor.
    pub left: String,
    /// Label of the right factor.
    pub right: String,
    /// Predicted constituents.
    pub predicted: Vec<(usize, ModuleType)>,
    /// Constituents found (empty on failure).
    pub found: Vec<(usize, ModuleType)>,
}

impl TypeTableRow {
    /// True when prediction and decomposition agree.
    pub fn ok(&self) -> bool {
        let mut a = self.predicted.clone();
        let mut b = self.found.clone();
        a.sort_by_key(|x| (x.0, x.1 == ModuleType::Q));
        b.sort_by_key(|x| (x.0, x.1 == ModuleType::Q));
        a == b
    }
}

/// Forms `V ⊠ W` for every pair of typed irreducibles of dimension at most
/// `max_dim` and compares the decomposition with the type rules.
pub fn type_table(max_dim: usize, exec: crate::exec::Exec) -> Result<Vec<TypeTableRow>> {
    let irr = typed_irreducibles(max_dim);
    let algs: Vec<SuperAlgebraTable> = irr.iter().map(|x| simple_algebra(x.algebra)).collect::<Result<_>>()?;
    let label = |x: &TypedIrreducible| format!("{}{}", if x.shifted { "Π" } else { "" }, x.algebra);
    let pairs: Vec<(usize, usize)> = (0..irr.len()).flat_map(|i| (0..irr.len()).map(move |j| (i, j))).collect();
    Ok(crate::exec::par_map(exec, &pairs, |&(i, j)| {
        let (v, w) = (&irr[i].module, &irr[j].module);
        let res = outer_tensor(&algs[i], v, &algs[j], w);
        let predicted = match (v.tag, w.tag) {
            (Some(ModuleType::Q), Some(ModuleType::Q)) => vec![(v.dim() * w.dim() / 2, ModuleType::M); 2],
            (Some(ModuleType::M), Some(ModuleType::M)) => vec![(v.dim() * w.dim(), ModuleType::M)],
            _ => vec![(v.dim() * w.dim(), ModuleType::Q)],
        };
        TypeTableRow {
            left: label(&irr[i]),
            right: label(&irr[j]),
            predicted,
            found: res.map(|r| r.found).unwrap_or_default(),
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_data::{build_gl, element};

    #[test]
    fn matrix_algebras_are_associative_with_unit() {
        for t in [m_algebra(1, 1).unwrap(), m_algebra(2, 1).unwrap(), q_algebra(2).unwrap()] {
            assert!(t.is_associative());
            assert!(t.unit_is_identity());
        }
        assert_eq!(m_algebra(2, 1).unwrap().dims(), (5, 4));
        assert_eq!(q_algebra(2).unwrap().dims(), (4, 4));
    }

    #[test]
    fn koszul_signs() {
        let q = q_algebra(1).unwrap();
        let t = graded_tensor(&q, &q);
        assert!(t.is_associative());
        // (J⊗1)(1⊗J) = J⊗J, (1⊗J)(J⊗1) = −J⊗J.
        let a = t.mul_basis(2, 1);
        let b = t.mul_basis(1, 2);
        assert_eq!(a.get(&3), Some(&Scalar::one()));
        assert_eq!(b.get(&3), Some(&Scalar::int(-1)));
    }

    #[test]
    fn unit_tensor_is_trivial() {
        let a = q_algebra(2).unwrap();
        let t = graded_tensor(&m_algebra(1, 0).unwrap(), &a);
        assert_eq!(classify_simple(&t).unwrap(), SimpleType::Q { n: 2 });
    }

    #[test]
    fn classification_examples() {
        let q = q_algebra(1).unwrap();
        assert_eq!(classify_simple(&graded_tensor(&q, &q)).unwrap(), SimpleType::m(1, 1));
        let q3 = graded_tensor(&graded_tensor(&q, &q), &q);
        assert_eq!(classify_simple(&q3).unwrap(), SimpleType::Q { n: 2 });
        let m = m_algebra(1, 1).unwrap();
        assert_eq!(classify_simple(&graded_tensor(&m, &m)).unwrap(), SimpleType::m(2, 2));
        assert_eq!(split_q1_q1().unwrap(), (1, 1, 1));
    }

    #[test]
    fn non_simple_is_rejected() {
        let mats = vec![Matrix::from_ints(&[&[1, 0], &[0, 0]]), Matrix::from_ints(&[&[0, 0], &[0, 1]])];
        let t = SuperAlgebraTable::from_matrices(vec!["a".into(), "b".into()], vec![Parity::Even; 2], &mats, &[0, 1]).unwrap();
        assert!(classify_simple(&t).is_err());
    }

    #[test]
    fn type_table_small() {
        let m = m_algebra(1, 0).unwrap();
        let q = q_algebra(1).unwrap();
        let vm = natural_module(SimpleType::m(1, 0));
        let vq = natural_module(SimpleType::Q { n: 1 });
        assert!(vq.is_module_over(&q));
        assert_eq!(vq.detect_type(&q).unwrap(), ModuleType::Q);
        let mm = outer_tensor(&m, &vm, &m, &vm).unwrap();
        assert!(mm.verified());
        assert_eq!(mm.found, vec![(1, ModuleType::M)]);
        let mq = outer_tensor(&m, &vm, &q, &vq).unwrap();
        assert!(mq.verified());
        let qq = outer_tensor(&q, &vq, &q, &vq).unwrap();
        assert!(qq.verified());
        assert_eq!(qq.found, vec![(2, ModuleType::M), (2, ModuleType::M)]);
    }

    #[test]
    fn parity_change_is_an_involution() {
        let v = natural_module(SimpleType::m(2, 1));
        let pv = v.parity_change();
        assert_eq!(pv.dims(), (1, 2));
        assert_eq!(pv.parity_change().parity, v.parity);
        assert!(pv.is_module_over(&m_algebra(2, 1).unwrap()));
    }

    #[test]
    fn direct_sum_bounds() {
        let b = direct_sum_bound(&[(2, 1), (2, 1)], 5).unwrap();
        assert_eq!(b.bound, BigInt::from(25 * 4));
        assert_eq!(b.floor_bound, BigInt::from(25 * 2));
        assert!(direct_sum_bound(&[(2, 1)], 5).is_ok());
        assert!(direct_sum_bound(&[(1, 0)], 5).is_err());
        let three = direct_sum_bound(&[(0, 1), (0, 1), (0, 1)], 3).unwrap();
        assert_eq!(three.bound, BigInt::from(8));
    }

    #[test]
    fn sweeps_small() {
        let rows = tensor_identity_sweep(2, crate::exec::Exec::default()).unwrap();
        assert!(rows.iter().all(|r| r.found == Some(r.predicted)), "{rows:?}");
        let table = type_table(2, crate::exec::Exec::default()).unwrap();
        assert!(table.iter().all(TypeTableRow::ok));
    }

    #[test]
    fn gl21_mixed_character_bound() {
        let g = build_gl(2, 1).unwrap();
        let x = element(&g, &[("E11", Scalar::one()), ("E22", Scalar::one()), ("E12", Scalar::one())]).unwrap();
        let b = arbitrary_char_bound(&g, &x, 7).unwrap();
        assert_eq!((b.d0, b.d1, b.l), (2, 4, 0));
        assert!(b.paths_agree && b.at_most_one_odd && b.composition_identity);
        assert_eq!(b.bound, BigInt::from(7 * 4));
    }
}
