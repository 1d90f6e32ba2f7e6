//! Finite-dimensional Lie superalgebras as exact structure-constant tables.
//!
//! A [`LieSuperalgebra`] stores an ordered, named, parity-tagged basis, the
//! sparse table of brackets of basis elements, an optional Gram matrix of an
//! even supersymmetric invariant form, and optionally a faithful realization
//! by supermatrices.  Elements are dense coordinate vectors in the stored
//! basis.  Constructors cover `gl(m|n)`, `sl(m|n)`, `osp(1|2n)`, `D(2,1;a)`,
//! direct sums and toral algebras; [`LieSuperalgebra::from_table`] loads any
//! externally supplied table.

use crate::error::{Error, Result};
use crate::exec::{par_range, Exec};
use crate::linalg::{
    is_zero_vec, lin_comb, sparse_axpy, sparse_nullspace, unit_vec, zero_vec, Coordinatizer, Matrix,
    SparseVec, Vector,
};
use crate::scalar::{format_rational, Rational, Scalar};
use num_traits::{One, Zero};
use std::fmt;

/// The ℤ₂-degree of a homogeneous element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    /// Degree 0.
    Even,
    /// Degree 1.
    Odd,
}

impl Parity {
    /// 0 for even, 1 for odd.
    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    /// Parity from a bit.
    pub fn from_bit(b: u8) -> Parity {
        if b & 1 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Parity of a product / bracket.
    pub fn add(self, o: Parity) -> Parity {
        Parity::from_bit(self.bit() ^ o.bit())
    }

    /// True for odd.
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

/// The Koszul sign `(−1)^{|a||b|}`.
pub fn koszul(a: Parity, b: Parity) -> Scalar {
    if a.is_odd() && b.is_odd() {
        Scalar::int(-1)
    } else {
        Scalar::one()
    }
}

/// A named basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElem {
    /// Display name, unique within the algebra.
    pub name: String,
    /// ℤ₂-degree.
    pub parity: Parity,
    /// Index of the direct summand this element belongs to (0 if not a sum).
    pub summand: usize,
}

/// Which construction produced an algebra.
#[derive(Clone, Debug, PartialEq)]
pub enum AlgebraKind {
    /// `gl(m|n)` on matrix units.
    Gl { m: usize, n: usize },
    /// The supertraceless part `sl(m|n)`.
    Sl { m: usize, n: usize },
    /// `osp(1|2n)`.
    Osp { n: usize },
    /// The exceptional family `D(2,1;a)`.
    D21a { a: Rational },
    /// Direct sum of the listed kinds.
    DirectSum(Vec<AlgebraKind>),
    /// An abelian even algebra of the given dimension.
    Toral(usize),
    /// A subalgebra of another algebra.
    Sub(String),
    /// An externally supplied table.
    Table(String),
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraKind::Gl { m, n } => write!(f, "gl({m}|{n})"),
            AlgebraKind::Sl { m, n } => write!(f, "sl({m}|{n})"),
            AlgebraKind::Osp { n } => write!(f, "osp(1|{})", 2 * n),
            AlgebraKind::D21a { a } => write!(f, "D(2,1;{})", format_rational(a)),
            AlgebraKind::DirectSum(parts) => {
                let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", s.join(" ⊕ "))
            }
            AlgebraKind::Toral(k) => write!(f, "toral({k})"),
            AlgebraKind::Sub(s) => write!(f, "sub({s})"),
            AlgebraKind::Table(s) => write!(f, "table({s})"),
        }
    }
}

/// A faithful representation by supermatrices of size `(even_dim|odd_dim)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixRealization {
    /// Number of even coordinates (listed first).
    pub even_dim: usize,
    /// Number of odd coordinates.
    pub odd_dim: usize,
    /// One matrix per basis element.
    pub mats: Vec<Matrix>,
}

impl MatrixRealization {
    /// Total size of the matrices.
    pub fn size(&self) -> usize {
        self.even_dim + self.odd_dim
    }

    /// The parity of a matrix with respect to the block structure, if homogeneous.
    pub fn matrix_parity(&self, m: &Matrix) -> Option<Parity> {
        supermatrix_parity(m, self.even_dim)
    }
}

/// Parity of a supermatrix whose first `even_dim` coordinates are even.
/// The zero matrix counts as even; mixed matrices give `None`.
pub fn supermatrix_parity(m: &Matrix, even_dim: usize) -> Option<Parity> {
    let mut even = false;
    let mut odd = false;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if !m.get(i, j).is_zero() {
                if (i < even_dim) == (j < even_dim) {
                    even = true;
                } else {
                    odd = true;
                }
            }
        }
    }
    match (even, odd) {
        (true, true) => None,
        (false, true) => Some(Parity::Odd),
        _ => Some(Parity::Even),
    }
}

/// Supercommutator `XY − (−1)^{|X||Y|} YX` of homogeneous supermatrices.
pub fn supercommutator(x: &Matrix, px: Parity, y: &Matrix, py: Parity) -> Matrix {
    let xy = x.mul(y);
    let yx = y.mul(x);
    if px.is_odd() && py.is_odd() {
        xy.add(&yx)
    } else {
        xy.sub(&yx)
    }
}

/// Supertrace: even diagonal minus odd diagonal.
pub fn supertrace(m: &Matrix, even_dim: usize) -> Scalar {
    let mut s = Scalar::zero();
    for i in 0..m.nrows() {
        if i < even_dim {
            s += m.get(i, i);
        } else {
            s -= m.get(i, i);
        }
    }
    s
}

/// Outcome of the exhaustive structure checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    /// `[x,y] = −(−1)^{|x||y|}[y,x]` on all basis pairs.
    pub antisymmetry: bool,
    /// Super-Jacobi on all basis triples.
    pub jacobi: bool,
    /// Brackets respect parity.
    pub parity: bool,
}

impl StructureReport {
    /// True when every check passed.
    pub fn all(&self) -> bool {
        self.antisymmetry && self.jacobi && self.parity
    }
}

/// Outcome of the exhaustive bilinear-form checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormReport {
    /// `(g_0̄, g_1̄) = 0`.
    pub even: bool,
    /// `(a,b) = (−1)^{|a||b|}(b,a)`.
    pub supersymmetric: bool,
    /// `([a,b],c) = (a,[b,c])` on all basis triples.
    pub invariant: bool,
    /// Non-zero Gram determinant.
    pub nondegenerate: bool,
}

impl FormReport {
    /// True when every check passed.
    pub fn all(&self) -> bool {
        self.even && self.supersymmetric && self.invariant && self.nondegenerate
    }
}

/// A Lie superalgebra with an ordered basis and exact structure constants.
#[derive(Clone, Debug)]
pub struct LieSuperalgebra {
    /// Construction tag.
    pub kind: AlgebraKind,
    basis: Vec<BasisElem>,
    table: Vec<Vec<SparseVec<usize>>>,
    gram: Option<Matrix>,
    realization: Option<MatrixRealization>,
}

fn sparse_of(v: &[Scalar]) -> SparseVec<usize> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

impl LieSuperalgebra {
    /// Loads an externally supplied table.
    ///
    /// `brackets` lists `(i, j, [b_i, b_j])` for some pairs; the remaining
    /// pairs are filled by super-antisymmetry and absent pairs are zero.
    /// The result is validated; an inconsistent table is rejected.
    pub fn from_table(
        kind: AlgebraKind,
        basis: Vec<BasisElem>,
        brackets: Vec<(usize, usize, SparseVec<usize>)>,
        gram: Option<Matrix>,
    ) -> Result<LieSuperalgebra> {
        let n = basis.len();
        let mut table = vec![vec![SparseVec::new(); n]; n];
        let mut set = vec![vec![false; n]; n];
        for (i, j, v) in brackets {
            if i >= n || j >= n || v.keys().any(|&k| k >= n) {
                return Err(Error::Invalid(format!("bracket index out of range at ({i},{j})")));
            }
            let v: SparseVec<usize> = v.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            let s = -koszul(basis[i].parity, basis[j].parity);
            let mirrored: SparseVec<usize> = v.iter().map(|(k, c)| (*k, &s * c)).collect();
            if set[i][j] && table[i][j] != v {
                return Err(Error::Invalid(format!("conflicting entries for ({i},{j})")));
            }
            if set[j][i] && table[j][i] != mirrored {
                return Err(Error::Invalid(format!("entry ({i},{j}) violates super-antisymmetry")));
            }
            table[i][j] = v;
            table[j][i] = mirrored;
            set[i][j] = true;
            set[j][i] = true;
        }
        if let Some(g) = &gram {
            if g.nrows() != n || g.ncols() != n {
                return Err(Error::Dimension("Gram matrix size".into()));
            }
        }
        let alg = LieSuperalgebra { kind, basis, table, gram, realization: None };
        let rep = alg.validate(Exec::default());
        if !rep.all() {
            return Err(Error::Invalid(format!("table fails validation: {rep:?}")));
        }
        Ok(alg)
    }

    /// Builds an algebra from homogeneous supermatrices spanning a subalgebra
    /// of `gl(even_dim|odd_dim)`.  The form is the supertrace form `str(XY)`.
    pub fn from_matrices(
        kind: AlgebraKind,
        names: Vec<String>,
        mats: Vec<Matrix>,
        even_dim: usize,
        odd_dim: usize,
    ) -> Result<LieSuperalgebra> {
        let size = even_dim + odd_dim;
        let mut basis = Vec::with_capacity(mats.len());
        for (name, m) in names.iter().zip(&mats) {
            let parity = supermatrix_parity(m, even_dim)
                .ok_or_else(|| Error::Invalid(format!("{name} is not homogeneous")))?;
            basis.push(BasisElem { name: name.clone(), parity, summand: 0 });
        }
        let flat: Vec<Vector> = mats.iter().map(|m| m.entries().to_vec()).collect();
        let coord = Coordinatizer::new(flat, size * size)?;
        let n = mats.len();
        let mut table = vec![vec![SparseVec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let c = supercommutator(&mats[i], basis[i].parity, &mats[j], basis[j].parity);
                let v = coord
                    .coords(c.entries())
                    .ok_or_else(|| Error::Invalid("matrices do not span a subalgebra".into()))?;
                table[i][j] = sparse_of(&v);
            }
        }
        let mut gram = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                gram.set(i, j, supertrace(&mats[i].mul(&mats[j]), even_dim));
            }
        }
        Ok(LieSuperalgebra {
            kind,
            basis,
            table,
            gram: Some(gram),
            realization: Some(MatrixRealization { even_dim, odd_dim, mats }),
        })
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `(dim g_0̄, dim g_1̄)`.
    pub fn dims(&self) -> (usize, usize) {
        let odd = self.basis.iter().filter(|b| b.parity.is_odd()).count();
        (self.dim() - odd, odd)
    }

    /// The basis.
    pub fn basis(&self) -> &[BasisElem] {
        &self.basis
    }

    /// Parity of basis element `i`.
    pub fn parity(&self, i: usize) -> Parity {
        self.basis[i].parity
    }

    /// Index of the basis element called `name`.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    /// Coordinate vector of basis element `i`.
    pub fn basis_vec(&self, i: usize) -> Vector {
        unit_vec(self.dim(), i)
    }

    /// Coordinate vector of the basis element called `name`.
    pub fn named(&self, name: &str) -> Result<Vector> {
        self.index_of(name)
            .map(|i| self.basis_vec(i))
            .ok_or_else(|| Error::Invalid(format!("no basis element named {name}")))
    }

    /// The zero element.
    pub fn zero(&self) -> Vector {
        zero_vec(self.dim())
    }

    /// Parity of a homogeneous element (zero counts as even); `None` if mixed.
    pub fn parity_of(&self, x: &[Scalar]) -> Option<Parity> {
        let mut even = false;
        let mut odd = false;
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                if self.basis[i].parity.is_odd() {
                    odd = true;
                } else {
                    even = true;
                }
            }
        }
        match (even, odd) {
            (true, true) => None,
            (false, true) => Some(Parity::Odd),
            _ => Some(Parity::Even),
        }
    }

    /// Indices of basis elements of the given parity.
    pub fn indices_of_parity(&self, p: Parity) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].parity == p).collect()
    }

    /// `[b_i, b_j]` as a sparse vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVec<usize> {
        &self.table[i][j]
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut acc = SparseVec::new();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                sparse_axpy(&mut acc, &(a * b), &self.table[i][j]);
            }
        }
        let mut out = self.zero();
        for (k, c) in acc {
            out[k] = c;
        }
        out
    }

    /// Matrix of `ad x` (column `j` is `[x, b_j]`).
    pub fn ad_matrix(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vector> = (0..n).map(|j| self.bracket(x, &self.basis_vec(j))).collect();
        Matrix::from_cols(&cols, n)
    }

    /// The Gram matrix of the invariant form, if present.
    pub fn gram(&self) -> Option<&Matrix> {
        self.gram.as_ref()
    }

    /// Replaces the Gram matrix.
    pub fn with_gram(mut self, gram: Matrix) -> LieSuperalgebra {
        self.gram = Some(gram);
        self
    }

    /// `(x, y)` under the stored form.
    pub fn form(&self, x: &[Scalar], y: &[Scalar]) -> Result<Scalar> {
        let g = self.gram.as_ref().ok_or_else(|| Error::Invalid("algebra carries no form".into()))?;
        Ok(crate::linalg::dot(x, &g.mul_vec(y)))
    }

    /// The matrix realization, if present.
    pub fn realization(&self) -> Option<&MatrixRealization> {
        self.realization.as_ref()
    }

    /// The matrix of an element in the realization.
    pub fn matrix_of(&self, x: &[Scalar]) -> Option<Matrix> {
        let r = self.realization.as_ref()?;
        let s = r.size();
        let mut m = Matrix::zeros(s, s);
        for (c, b) in x.iter().zip(&r.mats) {
            if !c.is_zero() {
                m = m.add(&b.scale(c));
            }
        }
        Some(m)
    }

    /// Coordinates of a matrix lying in the realized algebra.
    pub fn element_from_matrix(&self, m: &Matrix) -> Option<Vector> {
        let r = self.realization.as_ref()?;
        let s = r.size();
        let flat: Vec<Vector> = r.mats.iter().map(|b| b.entries().to_vec()).collect();
        Coordinatizer::new(flat, s * s).ok()?.coords(m.entries())
    }

    fn sign(&self, i: usize, j: usize) -> Scalar {
        koszul(self.basis[i].parity, self.basis[j].parity)
    }

    fn bracket_sparse(&self, x: &SparseVec<usize>, y: &SparseVec<usize>) -> SparseVec<usize> {
        let mut acc = SparseVec::new();
        for (i, a) in x {
            for (j, b) in y {
                sparse_axpy(&mut acc, &(a * b), &self.table[*i][*j]);
            }
        }
        acc
    }

    /// Exhaustive structure checks.
    pub fn validate(&self, exec: Exec) -> StructureReport {
        let n = self.dim();
        let mut antisymmetry = true;
        let mut parity = true;
        for i in 0..n {
            for j in 0..n {
                let s = -self.sign(i, j);
                let m: SparseVec<usize> = self.table[j][i].iter().map(|(k, c)| (*k, &s * c)).collect();
                if m != self.table[i][j] {
                    antisymmetry = false;
                }
                let p = self.basis[i].parity.add(self.basis[j].parity);
                if self.table[i][j].keys().any(|&k| self.basis[k].parity != p) {
                    parity = false;
                }
            }
        }
        let jac = par_range(exec, n, |i| {
            let xi: SparseVec<usize> = [(i, Scalar::one())].into_iter().collect();
            for j in 0..n {
                let xj: SparseVec<usize> = [(j, Scalar::one())].into_iter().collect();
                let sij = self.sign(i, j);
                for k in 0..n {
                    let xk: SparseVec<usize> = [(k, Scalar::one())].into_iter().collect();
                    let mut lhs = self.bracket_sparse(&xi, &self.table[j][k]);
                    let r1 = self.bracket_sparse(&self.table[i][j], &xk);
                    let r2 = self.bracket_sparse(&xj, &self.table[i][k]);
                    sparse_axpy(&mut lhs, &Scalar::int(-1), &r1);
                    sparse_axpy(&mut lhs, &(-&sij), &r2);
                    if !lhs.is_empty() {
                        return false;
                    }
                }
            }
            true
        });
        StructureReport { antisymmetry, jacobi: jac.into_iter().all(|b| b), parity }
    }

    /// Exhaustive checks of the stored form.
    pub fn verify_form(&self, exec: Exec) -> Result<FormReport> {
        let g = self.gram.as_ref().ok_or_else(|| Error::Invalid("algebra carries no form".into()))?;
        let n = self.dim();
        let mut even = true;
        let mut supersymmetric = true;
        for i in 0..n {
            for j in 0..n {
                if self.basis[i].parity != self.basis[j].parity && !g.get(i, j).is_zero() {
                    even = false;
                }
                if *g.get(i, j) != &self.sign(i, j) * g.get(j, i) {
                    supersymmetric = false;
                }
            }
        }
        let form_sparse = |x: &SparseVec<usize>, k: usize| {
            let mut s = Scalar::zero();
            for (i, c) in x {
                let gv = g.get(*i, k);
                if !gv.is_zero() {
                    s += &(c * gv);
                }
            }
            s
        };
        let form_sparse_right = |k: usize, y: &SparseVec<usize>| {
            let mut s = Scalar::zero();
            for (j, c) in y {
                let gv = g.get(k, *j);
                if !gv.is_zero() {
                    s += &(c * gv);
                }
            }
            s
        };
        let inv = par_range(exec, n, |a| {
            for b in 0..n {
                for c in 0..n {
                    if form_sparse(&self.table[a][b], c) != form_sparse_right(a, &self.table[b][c]) {
                        return false;
                    }
                }
            }
            true
        });
        Ok(FormReport {
            even,
            supersymmetric,
            invariant: inv.into_iter().all(|b| b),
            nondegenerate: !g.det().is_zero(),
        })
    }

    /// For matrix-realized algebras: the table bracket agrees with the
    /// supercommutator of matrices on all basis pairs.
    pub fn check_realization(&self) -> Option<bool> {
        let r = self.realization.as_ref()?;
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let c = supercommutator(&r.mats[i], self.parity(i), &r.mats[j], self.parity(j));
                let from_table = self.matrix_of(&self.bracket(&self.basis_vec(i), &self.basis_vec(j)))?;
                if c != from_table {
                    return Some(false);
                }
            }
        }
        Some(true)
    }

    /// Reduces every constant modulo the prime `p`.
    pub fn reduce_mod(&self, p: u64) -> Result<LieSuperalgebra> {
        let red = |c: &Scalar| c.to_fp(p);
        let mut table = self.table.clone();
        for row in table.iter_mut() {
            for v in row.iter_mut() {
                let mut out = SparseVec::new();
                for (k, c) in v.iter() {
                    let r = red(c)?;
                    if !r.is_zero() {
                        out.insert(*k, r);
                    }
                }
                *v = out;
            }
        }
        let map_m = |m: &Matrix| -> Result<Matrix> {
            let rows: Result<Vec<Vector>> =
                m.to_rows().iter().map(|r| r.iter().map(red).collect()).collect();
            Ok(Matrix::from_rows_with_cols(rows?, m.ncols()))
        };
        let gram = self.gram.as_ref().map(map_m).transpose()?;
        let realization = match &self.realization {
            Some(r) => Some(MatrixRealization {
                even_dim: r.even_dim,
                odd_dim: r.odd_dim,
                mats: r.mats.iter().map(map_m).collect::<Result<_>>()?,
            }),
            None => None,
        };
        Ok(LieSuperalgebra { kind: self.kind.clone(), basis: self.basis.clone(), table, gram, realization })
    }

    /// The subalgebra spanned by homogeneous, linearly independent `elems`.
    ///
    /// Fails if the span is not closed under the bracket.  The form and the
    /// matrix realization are restricted when present.
    pub fn subalgebra(&self, elems: &[Vector], names: Vec<String>) -> Result<LieSuperalgebra> {
        let n = self.dim();
        let coord = Coordinatizer::new(elems.to_vec(), n)?;
        let mut basis = Vec::new();
        for (e, name) in elems.iter().zip(names) {
            let parity = self
                .parity_of(e)
                .ok_or_else(|| Error::Invalid(format!("{name} is not homogeneous")))?;
            let summand = e
                .iter()
                .position(|c| !c.is_zero())
                .map_or(0, |i| self.basis[i].summand);
            basis.push(BasisElem { name, parity, summand });
        }
        let k = elems.len();
        let mut table = vec![vec![SparseVec::new(); k]; k];
        for i in 0..k {
            for j in 0..k {
                let b = self.bracket(&elems[i], &elems[j]);
                let c = coord
                    .coords(&b)
                    .ok_or_else(|| Error::NoSolution("span is not closed under the bracket".into()))?;
                table[i][j] = sparse_of(&c);
            }
        }
        let gram = match &self.gram {
            Some(_) => {
                let mut g = Matrix::zeros(k, k);
                for i in 0..k {
                    for j in 0..k {
                        g.set(i, j, self.form(&elems[i], &elems[j])?);
                    }
                }
                Some(g)
            }
            None => None,
        };
        let realization = self.realization.as_ref().map(|r| MatrixRealization {
            even_dim: r.even_dim,
            odd_dim: r.odd_dim,
            mats: elems.iter().map(|e| self.matrix_of(e).expect("realized")).collect(),
        });
        Ok(LieSuperalgebra { kind: AlgebraKind::Sub(self.kind.to_string()), basis, table, gram, realization })
    }

    /// Renames the construction tag.
    pub fn with_kind(mut self, kind: AlgebraKind) -> LieSuperalgebra {
        self.kind = kind;
        self
    }

    /// Human-readable form of an element, e.g. `"E11 + -1*E22"`.
    pub fn display_elem(&self, x: &[Scalar]) -> String {
        let terms: Vec<String> = x
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                if c.is_one() {
                    self.basis[i].name.clone()
                } else {
                    format!("{}*{}", c, self.basis[i].name)
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// Basis of the space of even supersymmetric invariant forms on `alg`.
///
/// Each returned matrix is a Gram matrix; the space is one-dimensional for
/// simple algebras with a non-degenerate invariant form.
pub fn invariant_forms(alg: &LieSuperalgebra) -> Vec<Matrix> {
    let n = alg.dim();
    // Unknown per unordered same-parity pair (i ≤ j); odd diagonal is forced to zero.
    let mut var = vec![vec![None::<(usize, Scalar)>; n]; n];
    let mut nvars = 0;
    for i in 0..n {
        for j in i..n {
            if alg.parity(i) != alg.parity(j) {
                continue;
            }
            if i == j && alg.parity(i).is_odd() {
                continue;
            }
            var[i][j] = Some((nvars, Scalar::one()));
            var[j][i] = Some((nvars, koszul(alg.parity(i), alg.parity(j))));
            nvars += 1;
        }
    }
    let equations = (0..n).flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c)))).map(
        |(a, b, c)| {
            // Σ_k [a,b]_k G_{k c} − Σ_k [b,c]_k G_{a k}
            let mut eq = SparseVec::new();
            for (k, x) in alg.bracket_basis(a, b) {
                if let Some((v, s)) = &var[*k][c] {
                    sparse_axpy(&mut eq, &(x * s), &[(*v, Scalar::one())].into_iter().collect());
                }
            }
            for (k, x) in alg.bracket_basis(b, c) {
                if let Some((v, s)) = &var[a][*k] {
                    sparse_axpy(&mut eq, &-(x * s), &[(*v, Scalar::one())].into_iter().collect());
                }
            }
            eq
        },
    );
    let sols = sparse_nullspace(equations, nvars);
    sols.into_iter()
        .map(|s| {
            let mut g = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    if let Some((v, sg)) = &var[i][j] {
                        g.set(i, j, &s[*v] * sg);
                    }
                }
            }
            g
        })
        .collect()
}

fn unit_name(i: usize, j: usize, size: usize) -> String {
    if size <= 9 {
        format!("E{}{}", i + 1, j + 1)
    } else {
        format!("E{}_{}", i + 1, j + 1)
    }
}

fn matrix_unit(size: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(size, size);
    m.set(i, j, Scalar::one());
    m
}

/// `gl(m|n)` on the matrix units `E_ij` in row-major order, with the
/// supertrace form.
pub fn build_gl(m: usize, n: usize) -> Result<LieSuperalgebra> {
    let size = m + n;
    if size == 0 {
        return Err(Error::Invalid("gl(0|0) is empty".into()));
    }
    let mut names = Vec::new();
    let mut mats = Vec::new();
    for i in 0..size {
        for j in 0..size {
            names.push(unit_name(i, j, size));
            mats.push(matrix_unit(size, i, j));
        }
    }
    LieSuperalgebra::from_matrices(AlgebraKind::Gl { m, n }, names, mats, m, n)
}

/// `sl(m|n)`: off-diagonal units plus the supertraceless diagonal elements
/// `h_i = E_ii − ε_i ε_{i+1} E_{i+1,i+1}` (ε = +1 on even, −1 on odd indices).
pub fn build_sl(m: usize, n: usize) -> Result<LieSuperalgebra> {
    let size = m + n;
    if size < 2 {
        return Err(Error::Invalid("sl(m|n) needs m+n ≥ 2".into()));
    }
    let eps = |i: usize| if i < m { 1 } else { -1 };
    let mut names = Vec::new();
    let mut mats = Vec::new();
    for i in 0..size - 1 {
        let mut h = matrix_unit(size, i, i);
        h.set(i + 1, i + 1, Scalar::int(-eps(i) * eps(i + 1)));
        names.push(format!("h{}", i + 1));
        mats.push(h);
    }
    for i in 0..size {
        for j in 0..size {
            if i != j {
                names.push(unit_name(i, j, size));
                mats.push(matrix_unit(size, i, j));
            }
        }
    }
    LieSuperalgebra::from_matrices(AlgebraKind::Sl { m, n }, names, mats, m, n)
}

/// `osp(1|2n)`: supermatrices on `ℚ^{1|2n}` preserving the even
/// supersymmetric form with `B(w,w) = 1` on the even vector and
/// `B(e_i, e_{n+i}) = 1 = −B(e_{n+i}, e_i)` on the odd ones.
///
/// Basis elements are named after the matrix unit of their free coordinate.
pub fn build_osp12n(n: usize) -> Result<LieSuperalgebra> {
    if n == 0 {
        return Err(Error::Invalid("osp(1|2n) needs n ≥ 1".into()));
    }
    let size = 1 + 2 * n;
    let mut b = Matrix::zeros(size, size);
    b.set(0, 0, Scalar::one());
    for i in 1..=n {
        b.set(i, n + i, Scalar::one());
        b.set(n + i, i, Scalar::int(-1));
    }
    let par = |i: usize| if i == 0 { Parity::Even } else { Parity::Odd };
    let mut names = Vec::new();
    let mut mats = Vec::new();
    for xp in [Parity::Even, Parity::Odd] {
        let units: Vec<(usize, usize)> = (0..size)
            .flat_map(|i| (0..size).map(move |j| (i, j)))
            .filter(|&(i, j)| par(i).add(par(j)) == xp)
            .collect();
        // Equations over u, w: B(Xu, w) + (−1)^{|X||u|} B(u, Xw) = 0.
        let mut rows = Vec::new();
        for u in 0..size {
            for w in 0..size {
                let mut row = zero_vec(units.len());
                let s = koszul(xp, par(u));
                for (k, &(i, j)) in units.iter().enumerate() {
                    // X = E_ij: X e_u = δ_{ju} e_i.
                    let mut c = Scalar::zero();
                    if j == u {
                        c += b.get(i, w);
                    }
                    if j == w {
                        c += &(&s * b.get(u, i));
                    }
                    row[k] = c;
                }
                rows.push(row);
            }
        }
        let eqs = Matrix::from_rows_with_cols(rows, units.len());
        let (_, pivots) = eqs.rref();
        for v in eqs.nullspace() {
            let free = (0..units.len()).find(|k| !pivots.contains(k) && v[*k].is_one()).expect("free column");
            let (fi, fj) = units[free];
            names.push(unit_name(fi, fj, size));
            let mut m = Matrix::zeros(size, size);
            for (k, &(i, j)) in units.iter().enumerate() {
                m.set(i, j, v[k].clone());
            }
            mats.push(m);
        }
    }
    LieSuperalgebra::from_matrices(AlgebraKind::Osp { n }, names, mats, 1, 2 * n)
}

/// The regular even nilpotent of `osp(1|2)`: the raising operator of the
/// symplectic block (`e_2 ↦ e_1` on the odd coordinates).
pub fn osp12_regular_nilpotent(g: &LieSuperalgebra) -> Result<Vector> {
    if g.realization().map(|r| r.size()) != Some(3) {
        return Err(Error::Invalid("expected osp(1|2) in its natural realization".into()));
    }
    let mut m = Matrix::zeros(3, 3);
    m.set(1, 2, Scalar::one());
    g.element_from_matrix(&m).ok_or_else(|| Error::Invalid("raising operator not in the algebra".into()))
}

/// An abelian even algebra of dimension `k` with the identity Gram matrix.
pub fn toral(k: usize) -> LieSuperalgebra {
    let basis = (0..k).map(|i| BasisElem { name: format!("t{}", i + 1), parity: Parity::Even, summand: 0 }).collect();
    LieSuperalgebra {
        kind: AlgebraKind::Toral(k),
        basis,
        table: vec![vec![SparseVec::new(); k]; k],
        gram: Some(Matrix::identity(k)),
        realization: None,
    }
}

/// Block-diagonal direct sum.  Names get a `"#i"` suffix when summands
/// would otherwise clash; summand indices are recorded per basis element.
pub fn direct_sum(parts: &[LieSuperalgebra]) -> Result<LieSuperalgebra> {
    if parts.is_empty() {
        return Err(Error::Invalid("direct sum of no algebras".into()));
    }
    if parts.len() == 1 {
        return Ok(parts[0].clone());
    }
    let n: usize = parts.iter().map(|p| p.dim()).sum();
    let mut names_seen = std::collections::HashSet::new();
    let clash = parts.iter().flat_map(|p| p.basis.iter()).any(|b| !names_seen.insert(b.name.clone()));
    let mut basis = Vec::with_capacity(n);
    let mut table = vec![vec![SparseVec::new(); n]; n];
    let mut offset = 0;
    for (s, p) in parts.iter().enumerate() {
        for b in &p.basis {
            let name = if clash { format!("{}#{}", b.name, s + 1) } else { b.name.clone() };
            basis.push(BasisElem { name, parity: b.parity, summand: s });
        }
        for i in 0..p.dim() {
            for j in 0..p.dim() {
                table[offset + i][offset + j] =
                    p.table[i][j].iter().map(|(k, c)| (offset + k, c.clone())).collect();
            }
        }
        offset += p.dim();
    }
    let gram = if parts.iter().all(|p| p.gram.is_some()) {
        let mut g = Matrix::zeros(n, n);
        let mut off = 0;
        for p in parts {
            let pg = p.gram.as_ref().expect("checked");
            for i in 0..p.dim() {
                for j in 0..p.dim() {
                    g.set(off + i, off + j, pg.get(i, j).clone());
                }
            }
            off += p.dim();
        }
        Some(g)
    } else {
        None
    };
    let realization = if parts.iter().all(|p| p.realization.is_some()) {
        let ev: usize = parts.iter().map(|p| p.realization.as_ref().expect("checked").even_dim).sum();
        let od: usize = parts.iter().map(|p| p.realization.as_ref().expect("checked").odd_dim).sum();
        let size = ev + od;
        let mut mats = Vec::with_capacity(n);
        let (mut eo, mut oo) = (0, ev);
        for p in parts {
            let r = p.realization.as_ref().expect("checked");
            let place = |i: usize, eo: usize, oo: usize| if i < r.even_dim { eo + i } else { oo + i - r.even_dim };
            for m in &r.mats {
                let mut big = Matrix::zeros(size, size);
                for i in 0..r.size() {
                    for j in 0..r.size() {
                        let v = m.get(i, j);
                        if !v.is_zero() {
                            big.set(place(i, eo, oo), place(j, eo, oo), v.clone());
                        }
                    }
                }
                mats.push(big);
            }
            eo += r.even_dim;
            oo += r.odd_dim;
        }
        Some(MatrixRealization { even_dim: ev, odd_dim: od, mats })
    } else {
        None
    };
    Ok(LieSuperalgebra {
        kind: AlgebraKind::DirectSum(parts.iter().map(|p| p.kind.clone()).collect()),
        basis,
        table,
        gram,
        realization,
    })
}

// ---------------------------------------------------------------------------
// D(2,1;a)
// ---------------------------------------------------------------------------

/// Names of the `D(2,1;a)` basis, in storage order.
pub const D21A_NAMES: [&str; 17] = [
    "H1", "H2", "H3", "e1", "e2", "e3", "f1", "f2", "f3", "e12", "e13", "e123", "e1123", "f21", "f31",
    "f321", "f3211",
];

/// The 17-dimensional model `sl2 ⊕ sl2 ⊕ sl2 ⊕ (V⊗V⊗V)` with odd brackets
/// `σ_k`-weighted; coordinates: copy `k` has `E,H,F` at `3k..3k+3`, the odd
/// tensor `(b1,b2,b3)` (bit 0 = highest vector) sits at `9 + 4b1 + 2b2 + b3`.
struct D21Model {
    sigma: [Scalar; 3],
}

impl D21Model {
    const DIM: usize = 17;

    fn psi(x: usize, y: usize) -> i64 {
        match (x, y) {
            (0, 1) => 1,
            (1, 0) => -1,
            _ => 0,
        }
    }

    /// `P(x,y)` written in the `(E, H, F)` coordinates of `sl(V)`.
    fn p_coords(x: usize, y: usize) -> [i64; 3] {
        // P(x,y)(z) = ψ(y,z)x + ψ(x,z)y; matrix column z.
        let mut m = [[0i64; 2]; 2];
        for z in 0..2 {
            m[x][z] += Self::psi(y, z);
            m[y][z] += Self::psi(x, z);
        }
        debug_assert_eq!(m[0][0], -m[1][1]);
        [m[0][1], m[0][0], m[1][0]]
    }

    fn odd_index(b: [usize; 3]) -> usize {
        9 + 4 * b[0] + 2 * b[1] + b[2]
    }

    fn odd_bits(i: usize) -> [usize; 3] {
        let t = i - 9;
        [(t >> 2) & 1, (t >> 1) & 1, t & 1]
    }

    /// Action of `E/H/F` (0/1/2) on a basis vector of V: (coefficient, image).
    fn sl2_on_v(op: usize, v: usize) -> Option<(i64, usize)> {
        match (op, v) {
            (0, 1) => Some((1, 0)),
            (1, 0) => Some((1, 0)),
            (1, 1) => Some((-1, 1)),
            (2, 0) => Some((1, 1)),
            _ => None,
        }
    }

    fn bracket_basis(&self, i: usize, j: usize) -> SparseVec<usize> {
        let mut out = SparseVec::new();
        let mut add = |k: usize, c: Scalar| {
            sparse_axpy(&mut out, &c, &[(k, Scalar::one())].into_iter().collect());
        };
        match (i < 9, j < 9) {
            (true, true) => {
                if i / 3 == j / 3 {
                    let base = 3 * (i / 3);
                    match (i % 3, j % 3) {
                        (0, 1) => add(base, Scalar::int(-2)),
                        (1, 0) => add(base, Scalar::int(2)),
                        (0, 2) => add(base + 1, Scalar::one()),
                        (2, 0) => add(base + 1, Scalar::int(-1)),
                        (1, 2) => add(base + 2, Scalar::int(-2)),
                        (2, 1) => add(base + 2, Scalar::int(2)),
                        _ => {}
                    }
                }
            }
            (true, false) => {
                let (copy, op) = (i / 3, i % 3);
                let mut bits = Self::odd_bits(j);
                if let Some((c, img)) = Self::sl2_on_v(op, bits[copy]) {
                    bits[copy] = img;
                    add(Self::odd_index(bits), Scalar::int(c));
                }
            }
            (false, true) => {
                let v = self.bracket_basis(j, i);
                for (k, c) in v {
                    add(k, -c);
                }
            }
            (false, false) => {
                let x = Self::odd_bits(i);
                let y = Self::odd_bits(j);
                for k in 0..3 {
                    let others: i64 =
                        (0..3).filter(|&m| m != k).map(|m| Self::psi(x[m], y[m])).product();
                    if others == 0 || self.sigma[k].is_zero() {
                        continue;
                    }
                    let pc = Self::p_coords(x[k], y[k]);
                    for (op, c) in pc.iter().enumerate() {
                        if *c != 0 {
                            add(3 * k + op, &self.sigma[k] * &Scalar::int(others * c));
                        }
                    }
                }
            }
        }
        out
    }

    fn bracket(&self, x: &SparseVec<usize>, y: &SparseVec<usize>) -> SparseVec<usize> {
        let mut acc = SparseVec::new();
        for (i, a) in x {
            for (j, b) in y {
                sparse_axpy(&mut acc, &(a * b), &self.bracket_basis(*i, *j));
            }
        }
        acc
    }

    fn parity(i: usize) -> Parity {
        if i < 9 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Flattened Jacobi residuals over all basis triples.
    fn jacobi_residual(&self) -> Vec<Scalar> {
        let n = Self::DIM;
        let mut out = Vec::new();
        let one = |i: usize| -> SparseVec<usize> { [(i, Scalar::one())].into_iter().collect() };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let s = koszul(Self::parity(i), Self::parity(j));
                    let mut lhs = self.bracket(&one(i), &self.bracket_basis(j, k));
                    sparse_axpy(&mut lhs, &Scalar::int(-1), &self.bracket(&self.bracket_basis(i, j), &one(k)));
                    sparse_axpy(&mut lhs, &(-s), &self.bracket(&one(j), &self.bracket_basis(i, k)));
                    for m in 0..n {
                        out.push(lhs.get(&m).cloned().unwrap_or_else(Scalar::zero));
                    }
                }
            }
        }
        out
    }
}

fn to_dense(v: &SparseVec<usize>, n: usize) -> Vector {
    let mut out = zero_vec(n);
    for (k, c) in v {
        out[*k] = c.clone();
    }
    out
}

/// `D(2,1;a)` for rational `a ∉ {0, −1}`.
///
/// The odd bracket of the tensor model is fixed by solving the super-Jacobi
/// identity together with the Cartan-matrix condition on `h_1`; the basis is
/// then changed to the generators `h_i, e_i, f_i` and the composite root
/// vectors defined from them, and the invariant form is the unique one (up to
/// scale) with `(e_1, f_1) = 1`.
pub fn build_d21a(a: &Rational) -> Result<LieSuperalgebra> {
    if a.is_zero() || *a == -Rational::one() {
        return Err(Error::Invalid("D(2,1;a) requires a ∉ {0, −1}".into()));
    }
    let a_s = Scalar::from_rational(a.clone());
    let n = D21Model::DIM;
    let unit = |k: usize| {
        let mut s: [Scalar; 3] = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
        s[k] = Scalar::one();
        s
    };
    // Jacobi residuals are linear in σ and vanish at σ = 0.
    let cols: Vec<Vector> = (0..3).map(|k| D21Model { sigma: unit(k) }.jacobi_residual()).collect();
    let e1 = D21Model::odd_index([0, 1, 1]);
    let f1p = D21Model::odd_index([1, 0, 0]);
    // h1' = [e1, f1'] = Σ_k c_k(σ) H_k, linear in σ.
    let hcoef: Vec<[Scalar; 3]> = (0..3)
        .map(|k| {
            let v = D21Model { sigma: unit(k) }.bracket_basis(e1, f1p);
            [1usize, 4, 7].map(|h| v.get(&h).cloned().unwrap_or_else(Scalar::zero))
        })
        .collect();
    let mut rows: Vec<Vector> = (0..cols[0].len())
        .map(|r| (0..3).map(|k| cols[k][r].clone()).collect())
        .filter(|r: &Vector| !is_zero_vec(r))
        .collect();
    // c3 − a·c2 = 0
    rows.push((0..3).map(|k| &hcoef[k][2] - &(&a_s * &hcoef[k][1])).collect());
    let sys = Matrix::from_rows_with_cols(rows, 3);
    let ns = sys.nullspace();
    if ns.len() != 1 {
        return Err(Error::NoSolution(format!("odd bracket family has dimension {}", ns.len())));
    }
    // Normalize c2 = 1.
    let c2 = dot3(&ns[0], &[hcoef[0][1].clone(), hcoef[1][1].clone(), hcoef[2][1].clone()]);
    let scale = c2.inv()?;
    let sigma: [Scalar; 3] = [&ns[0][0] * &scale, &ns[0][1] * &scale, &ns[0][2] * &scale];
    let model = D21Model { sigma };

    let one = |i: usize| -> SparseVec<usize> { [(i, Scalar::one())].into_iter().collect() };
    let br = |x: &SparseVec<usize>, y: &SparseVec<usize>| model.bracket(x, y);
    let scale_v = |v: &SparseVec<usize>, c: &Scalar| -> SparseVec<usize> {
        v.iter().map(|(k, x)| (*k, x * c)).collect()
    };
    let e1v = one(e1);
    let f1v = scale_v(&one(f1p), &Scalar::frac(1, 2));
    let (e2, e3, f2, f3) = (one(3), one(6), one(5), one(8));
    let h1 = br(&e1v, &f1v);
    let h2 = br(&e2, &f2);
    let h3 = br(&e3, &f3);
    let one_plus_a = Scalar::one() + a_s.clone();
    let inv1a = one_plus_a.inv()?;
    let e12 = br(&e1v, &e2);
    let e13 = br(&e1v, &e3);
    let e123 = br(&e12, &e3);
    let e1123 = scale_v(&br(&e1v, &e123), &inv1a);
    let f21 = br(&f2, &f1v);
    let f31 = br(&f3, &f1v);
    let f321 = br(&f3, &f21);
    let f3211 = scale_v(&br(&f321, &f1v), &(-&inv1a));
    let mut hh2 = scale_v(&h1, &Scalar::int(2));
    sparse_axpy(&mut hh2, &Scalar::int(-1), &h2);
    sparse_axpy(&mut hh2, &(-&a_s), &h3);
    let big_h2 = scale_v(&hh2, &inv1a);
    let elems: Vec<Vector> = [
        h1.clone(), big_h2, h3.clone(), e1v, e2, e3, f1v, f2, f3, e12, e13, e123, e1123, f21, f31, f321, f3211,
    ]
    .iter()
    .map(|v| to_dense(v, n))
    .collect();

    // Assemble the model as an algebra, then change basis.
    let mut table = vec![vec![SparseVec::new(); n]; n];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = model.bracket_basis(i, j);
        }
    }
    let model_basis = (0..n)
        .map(|i| BasisElem { name: format!("m{i}"), parity: D21Model::parity(i), summand: 0 })
        .collect();
    let model_alg =
        LieSuperalgebra { kind: AlgebraKind::Table("D21 model".into()), basis: model_basis, table, gram: None, realization: None };
    let alg = model_alg
        .subalgebra(&elems, D21A_NAMES.iter().map(|s| s.to_string()).collect())?
        .with_kind(AlgebraKind::D21a { a: a.clone() });
    let forms = invariant_forms(&alg);
    if forms.len() != 1 {
        return Err(Error::NoSolution(format!("invariant forms space has dimension {}", forms.len())));
    }
    let ie1 = 3;
    let if1 = 6;
    let norm = forms[0].get(ie1, if1).inv()?;
    Ok(alg.with_gram(forms[0].scale(&norm)))
}

fn dot3(a: &[Scalar], b: &[Scalar; 3]) -> Scalar {
    let mut s = Scalar::zero();
    for k in 0..3 {
        s += &(&a[k] * &b[k]);
    }
    s
}

/// The element `Σ c_i b_i` given as `(name, coefficient)` pairs.
pub fn element(alg: &LieSuperalgebra, terms: &[(&str, Scalar)]) -> Result<Vector> {
    let mut v = alg.zero();
    for (name, c) in terms {
        let i = alg.index_of(name).ok_or_else(|| Error::Invalid(format!("no basis element named {name}")))?;
        v[i] += c;
    }
    Ok(v)
}

/// Linear combination of algebra elements.
pub fn combine(alg: &LieSuperalgebra, coeffs: &[Scalar], elems: &[Vector]) -> Vector {
    lin_comb(coeffs, elems, alg.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    #[test]
    fn gl11_supertrace_and_odd_bracket() {
        let g = build_gl(1, 1).unwrap();
        assert_eq!(g.dims(), (2, 2));
        let e11 = g.named("E11").unwrap();
        let e22 = g.named("E22").unwrap();
        assert_eq!(g.form(&e11, &e11).unwrap(), Scalar::one());
        assert_eq!(g.form(&e22, &e22).unwrap(), Scalar::int(-1));
        let b = g.bracket(&g.named("E12").unwrap(), &g.named("E21").unwrap());
        assert_eq!(b, crate::linalg::vec_add(&e11, &e22));
        let x = crate::linalg::vec_add(&g.named("E12").unwrap(), &g.named("E21").unwrap());
        assert_eq!(g.bracket(&x, &x), crate::linalg::vec_scale(&crate::linalg::vec_add(&e11, &e22), &Scalar::int(2)));
    }

    #[test]
    fn gl21_validates() {
        let g = build_gl(2, 1).unwrap();
        assert!(g.validate(Exec::default()).all());
        assert!(g.verify_form(Exec::default()).unwrap().all());
        assert_eq!(g.check_realization(), Some(true));
    }

    #[test]
    fn sl21_is_supertraceless() {
        let g = build_sl(2, 1).unwrap();
        assert_eq!(g.dims(), (4, 4));
        assert!(g.validate(Exec::default()).all());
        assert!(g.verify_form(Exec::default()).unwrap().all());
    }

    #[test]
    fn osp12_dims_and_form() {
        let g = build_osp12n(1).unwrap();
        assert_eq!(g.dims(), (3, 2));
        assert!(g.validate(Exec::default()).all());
        assert!(g.verify_form(Exec::default()).unwrap().all());
        let odd = g.indices_of_parity(Parity::Odd);
        let b = g.bracket(&g.basis_vec(odd[0]), &g.basis_vec(odd[1]));
        assert_eq!(g.parity_of(&b), Some(Parity::Even));
        assert!(!is_zero_vec(&b));
        assert_eq!(build_osp12n(2).unwrap().dims(), (10, 4));
    }

    #[test]
    fn d21a_form_table() {
        let g = build_d21a(&rat(2, 1)).unwrap();
        assert_eq!(g.dims(), (9, 8));
        let f = |x: &str, y: &str| g.form(&g.named(x).unwrap(), &g.named(y).unwrap()).unwrap();
        assert_eq!(f("e1", "f1"), Scalar::one());
        assert_eq!(f("e2", "f2"), Scalar::int(-1));
        assert_eq!(f("e3", "f3"), Scalar::frac(-1, 2));
        // h1 = H1, h3 = H3, h2 = 2h1 − (1+a)H2 − a h3.
        let a = Scalar::int(2);
        let h1 = g.named("H1").unwrap();
        let h3 = g.named("H3").unwrap();
        let mut h2 = crate::linalg::vec_scale(&h1, &Scalar::int(2));
        crate::linalg::vec_axpy(&mut h2, &(-(Scalar::one() + a.clone())), &g.named("H2").unwrap());
        crate::linalg::vec_axpy(&mut h2, &(-a), &h3);
        assert_eq!(g.form(&h1, &h2).unwrap(), Scalar::int(-1));
        assert_eq!(g.form(&h2, &h2).unwrap(), Scalar::int(-2));
        assert_eq!(g.form(&h3, &h3).unwrap(), Scalar::int(-1));
        assert_eq!(g.form(&h1, &h3).unwrap(), Scalar::int(-1));
        assert_eq!(g.form(&h1, &h1).unwrap(), Scalar::zero());
        // Cartan row 1 = (0, 1, a).
        for (name, val) in [("e1", 0), ("e2", 1), ("e3", 2)] {
            let x = g.named(name).unwrap();
            assert_eq!(g.bracket(&h1, &x), crate::linalg::vec_scale(&x, &Scalar::int(val)));
        }
        assert!(g.validate(Exec::default()).all());
        assert!(g.verify_form(Exec::default()).unwrap().all());
    }

    #[test]
    fn d21a_rejects_degenerate_parameters() {
        assert!(build_d21a(&rat(0, 1)).is_err());
        assert!(build_d21a(&rat(-1, 1)).is_err());
    }

    #[test]
    fn corrupted_gram_breaks_invariance() {
        let g = build_gl(2, 1).unwrap();
        let mut gram = g.gram().unwrap().clone();
        let v = gram.get(0, 0) + &Scalar::one();
        gram.set(0, 0, v);
        let bad = g.clone().with_gram(gram);
        let rep = bad.verify_form(Exec::default()).unwrap();
        assert!(!rep.invariant);
    }

    #[test]
    fn direct_sum_blocks() {
        let s = direct_sum(&[build_gl(1, 1).unwrap(), build_osp12n(1).unwrap()]).unwrap();
        assert_eq!(s.dims(), (5, 4));
        assert!(s.validate(Exec::default()).all());
        assert_eq!(s.check_realization(), Some(true));
        for i in 0..4 {
            for j in 4..9 {
                assert!(s.bracket_basis(i, j).is_empty());
            }
        }
        let single = direct_sum(&[build_osp12n(1).unwrap()]).unwrap();
        assert_eq!(single.dims(), (3, 2));
    }

    #[test]
    fn invariant_forms_of_osp_are_one_dimensional() {
        assert_eq!(invariant_forms(&build_osp12n(1).unwrap()).len(), 1);
        // gl(1|1) has a two-dimensional space (supertrace and str(x)str(y)).
        assert_eq!(invariant_forms(&build_gl(1, 1).unwrap()).len(), 2);
    }

    #[test]
    fn table_loading_round_trip() {
        let g = build_osp12n(1).unwrap();
        let mut br = Vec::new();
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                br.push((i, j, g.bracket_basis(i, j).clone()));
            }
        }
        let t = LieSuperalgebra::from_table(AlgebraKind::Table("osp copy".into()), g.basis().to_vec(), br, g.gram().cloned()).unwrap();
        assert!(t.verify_form(Exec::default()).unwrap().all());
        let mut bad = vec![(0usize, 1usize, g.bracket_basis(0, 1).clone())];
        bad.push((1, 0, g.bracket_basis(0, 1).clone()));
        if !g.bracket_basis(0, 1).is_empty() {
            assert!(LieSuperalgebra::from_table(AlgebraKind::Table("bad".into()), g.basis().to_vec(), bad, None).is_err());
        }
    }

    #[test]
    fn reduction_mod_p_keeps_structure() {
        let g = build_d21a(&rat(3, 1)).unwrap().reduce_mod(7).unwrap();
        assert!(g.validate(Exec::default()).all());
        assert!(g.verify_form(Exec::default()).unwrap().all());
    }

    proptest! {
        #[test]
        fn bracket_is_super_antisymmetric_on_random_elements(c in proptest::collection::vec(-3i64..4, 18)) {
            let g = build_gl(2, 1).unwrap();
            let ev = g.indices_of_parity(Parity::Even);
            let od = g.indices_of_parity(Parity::Odd);
            let mut x = g.zero();
            let mut y = g.zero();
            for (k, &i) in ev.iter().enumerate() { x[i] = Scalar::int(c[k]); }
            for (k, &i) in od.iter().enumerate() { y[i] = Scalar::int(c[9 + k]); }
            let xy = g.bracket(&x, &y);
            let yx = g.bracket(&y, &x);
            prop_assert_eq!(xy, crate::linalg::vec_scale(&yx, &Scalar::int(-1)));
            let yy = g.bracket(&y, &y);
            let my = g.matrix_of(&y).unwrap();
            prop_assert_eq!(g.matrix_of(&yy).unwrap(), my.mul(&my).scale(&Scalar::int(2)));
        }
    }
}
