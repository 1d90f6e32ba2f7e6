//! Exact linear algebra over [`Scalar`] fields.
//!
//! Dense matrices with reduced row echelon forms, nullspaces and inverses,
//! row-space helpers that treat lists of vectors as subspaces, a
//! [`Coordinatizer`] for repeated coordinate extraction in a fixed basis, and
//! a [`SparseEchelon`] for incremental rank computations on sparse vectors
//! keyed by arbitrary ordered keys.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// A dense vector of scalars.
pub type Vector = Vec<Scalar>;

/// The zero vector of length `n`.
pub fn zero_vec(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

/// The `i`-th standard basis vector of length `n`.
pub fn unit_vec(n: usize, i: usize) -> Vector {
    let mut v = zero_vec(n);
    v[i] = Scalar::one();
    v
}

/// True if every entry is zero.
pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// Entrywise sum.
pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Entrywise difference.
pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Scalar multiple.
pub fn vec_scale(a: &[Scalar], c: &Scalar) -> Vector {
    a.iter().map(|x| x * c).collect()
}

/// `a += c·b` in place.
pub fn vec_axpy(a: &mut [Scalar], c: &Scalar, b: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        if !y.is_zero() {
            *x += &(c * y);
        }
    }
}

/// Standard dot product.
pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

/// Linear combination `Σ c_i v_i` of equal-length vectors.
pub fn lin_comb(coeffs: &[Scalar], vecs: &[Vector], n: usize) -> Vector {
    let mut out = zero_vec(n);
    for (c, v) in coeffs.iter().zip(vecs) {
        vec_axpy(&mut out, c, v);
    }
    out
}

/// A dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    /// The `rows × cols` zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    /// The identity matrix of size `n`.
    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Builds a matrix from row vectors of equal length.
    pub fn from_rows(rows: Vec<Vector>) -> Matrix {
        let cols = rows.first().map_or(0, Vec::len);
        Matrix::from_rows_with_cols(rows, cols)
    }

    /// Builds a matrix from rows, using `cols` when the row list is empty.
    pub fn from_rows_with_cols(rows: Vec<Vector>, cols: usize) -> Matrix {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: r, cols, data }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vector], rows: usize) -> Matrix {
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    /// Builds a matrix from small integers.
    pub fn from_ints(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect())
    }

    /// Number of rows.
    pub fn nrows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    /// Overwrites entry `(i, j)`.
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Column `j` as a vector.
    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// All rows as owned vectors.
    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    /// True if every entry is zero.
    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    /// Transpose.
    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Matrix product; panics on a size mismatch.
    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix product size mismatch");
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * o.cols + j;
                        out.data[idx] += &(a * b);
                    }
                }
            }
        }
        out
    }

    /// Matrix–vector product.
    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector size mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Entrywise sum.
    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: vec_add(&self.data, &o.data) }
    }

    /// Entrywise difference.
    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: vec_sub(&self.data, &o.data) }
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: vec_scale(&self.data, c) }
    }

    /// Non-negative integer power of a square matrix.
    pub fn pow(&self, mut e: u64) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    /// Maps every entry through `f`.
    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Reduced row echelon form and the list of pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("pivot is non-zero");
            for j in c..m.cols {
                let idx = r * m.cols + j;
                if !m.data[idx].is_zero() {
                    m.data[idx] = &m.data[idx] * &inv;
                }
            }
            let pivot_row: Vector = m.row(r).to_vec();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                let neg = -&f;
                vec_axpy(&mut m.data[i * m.cols..(i + 1) * m.cols], &neg, &pivot_row);
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Rank.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the right nullspace `{v : A v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = zero_vec(self.cols);
            v[free] = Scalar::one();
            for (i, &p) in pivots.iter().enumerate() {
                let x = r.get(i, free);
                if !x.is_zero() {
                    v[p] = -x;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// A particular solution of `A x = b` with all free variables set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = zero_vec(self.cols);
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!("{}×{} matrix has no inverse", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Degenerate("singular matrix".into()));
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    /// Determinant by fraction-free-free Gaussian elimination.
    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut d = Scalar::one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Scalar::zero();
            };
            if pr != c {
                for j in 0..n {
                    m.data.swap(pr * n + j, c * n + j);
                }
                d = -d;
            }
            let piv = m.get(c, c).clone();
            d = &d * &piv;
            let inv = piv.inv().expect("pivot is non-zero");
            let prow: Vector = m.row(c).to_vec();
            for i in c + 1..n {
                let f = m.get(i, c) * &inv;
                if !f.is_zero() {
                    vec_axpy(&mut m.data[i * n..(i + 1) * n], &(-f), &prow);
                }
            }
        }
        d
    }

    /// Characteristic polynomial coefficients `[c_0, …, c_n]` of `det(tI − A)`
    /// (so `c_n = 1`), by the Faddeev–LeVerrier recursion.  Requires the
    /// field characteristic to exceed `n` when working modulo a prime.
    pub fn charpoly(&self) -> Result<Vec<Scalar>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![Scalar::zero(); n + 1];
        coeffs[n] = Scalar::one();
        let mut mk = Matrix::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self.mul(&mk);
            for i in 0..n {
                let v = next.get(i, i) + &coeffs[n - k + 1];
                next.set(i, i, v);
            }
            mk = next;
            let am = self.mul(&mk);
            let mut tr = Scalar::zero();
            for i in 0..n {
                tr += am.get(i, i);
            }
            let kinv = Scalar::int(k as i64).inv()?;
            coeffs[n - k] = -(&tr * &kinv);
        }
        Ok(coeffs)
    }
}

/// Row-reduced basis of the span of `vecs` (vectors of length `n`).
pub fn span_basis(vecs: &[Vector], n: usize) -> Vec<Vector> {
    if vecs.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = Matrix::from_rows_with_cols(vecs.to_vec(), n).rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Dimension of the span.
pub fn span_dim(vecs: &[Vector], n: usize) -> usize {
    span_basis(vecs, n).len()
}

/// True if `v` lies in the span of `vecs`.
pub fn in_span(vecs: &[Vector], v: &[Scalar], n: usize) -> bool {
    let mut all = vecs.to_vec();
    all.push(v.to_vec());
    span_dim(&all, n) == span_dim(vecs, n)
}

/// True if the two families span the same subspace.
pub fn same_span(a: &[Vector], b: &[Vector], n: usize) -> bool {
    span_basis(a, n) == span_basis(b, n)
}

/// Basis of the intersection of two spans.
pub fn intersection(a: &[Vector], b: &[Vector], n: usize) -> Vec<Vector> {
    let a = span_basis(a, n);
    let b = span_basis(b, n);
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Solve Σ x_i a_i − Σ y_j b_j = 0 and map the x part back.
    let mut cols: Vec<Vector> = a.clone();
    cols.extend(b.iter().map(|v| v.iter().map(|x| -x).collect()));
    let m = Matrix::from_cols(&cols, n);
    let kernel = m.nullspace();
    let vecs: Vec<Vector> = kernel.iter().map(|k| lin_comb(&k[..a.len()], &a, n)).collect();
    span_basis(&vecs, n)
}

/// True when the subspaces spanned by `parts` form a direct sum whose total
/// is the span of `total`.
pub fn is_direct_sum_of(parts: &[Vec<Vector>], total: &[Vector], n: usize) -> bool {
    let mut all = Vec::new();
    let mut dims = 0;
    for p in parts {
        dims += span_dim(p, n);
        all.extend(p.iter().cloned());
    }
    span_dim(&all, n) == dims && same_span(&all, total, n)
}

/// Coordinates of `v` with respect to the (not necessarily independent) family.
pub fn coordinates(vecs: &[Vector], v: &[Scalar], n: usize) -> Option<Vector> {
    if vecs.is_empty() {
        return if is_zero_vec(v) { Some(Vec::new()) } else { None };
    }
    Matrix::from_cols(vecs, n).solve(v)
}

/// Fast coordinate extraction with respect to a fixed linearly independent family.
#[derive(Clone, Debug)]
pub struct Coordinatizer {
    basis: Vec<Vector>,
    pivots: Vec<usize>,
    inv: Matrix,
    n: usize,
}

impl Coordinatizer {
    /// Prepares coordinates for an independent family of length-`n` vectors.
    pub fn new(basis: Vec<Vector>, n: usize) -> Result<Coordinatizer> {
        let k = basis.len();
        if k == 0 {
            return Ok(Coordinatizer { basis, pivots: Vec::new(), inv: Matrix::zeros(0, 0), n });
        }
        let bm = Matrix::from_rows_with_cols(basis.clone(), n);
        let (_, pivots) = bm.rref();
        if pivots.len() < k {
            return Err(Error::Degenerate("coordinate family is linearly dependent".into()));
        }
        let mut sub = Matrix::zeros(k, k);
        for i in 0..k {
            for (jj, &p) in pivots.iter().enumerate() {
                sub.set(i, jj, bm.get(i, p).clone());
            }
        }
        let inv = sub.inverse()?;
        Ok(Coordinatizer { basis, pivots, inv, n })
    }

    /// Number of basis vectors.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `v`, or `None` when `v` is outside the span.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vector> {
        let k = self.basis.len();
        if k == 0 {
            return if is_zero_vec(v) { Some(Vec::new()) } else { None };
        }
        // c^T S = v[pivots]  ⇒  c^T = v[pivots] S^{-1}
        let mut c = zero_vec(k);
        for (jj, &p) in self.pivots.iter().enumerate() {
            let x = &v[p];
            if x.is_zero() {
                continue;
            }
            for (i, ci) in c.iter_mut().enumerate() {
                let s = self.inv.get(jj, i);
                if !s.is_zero() {
                    *ci += &(x * s);
                }
            }
        }
        let back = lin_comb(&c, &self.basis, self.n);
        if back.iter().zip(v).all(|(a, b)| a == b) {
            Some(c)
        } else {
            None
        }
    }
}

/// Sparse vector keyed by ordered keys.
pub type SparseVec<K> = BTreeMap<K, Scalar>;

/// `a += c·b` on sparse vectors, dropping cancelled entries.
pub fn sparse_axpy<K: Ord + Clone>(a: &mut SparseVec<K>, c: &Scalar, b: &SparseVec<K>) {
    if c.is_zero() {
        return;
    }
    for (k, v) in b {
        let add = c * v;
        match a.get_mut(k) {
            Some(x) => {
                *x += &add;
                if x.is_zero() {
                    a.remove(k);
                }
            }
            None => {
                if !add.is_zero() {
                    a.insert(k.clone(), add);
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
struct EchelonRow<K> {
    row: SparseVec<K>,
    comb: SparseVec<usize>,
}

/// Incremental semi-echelon basis of sparse vectors.
///
/// Each stored row has a distinct leading (smallest) key with coefficient one
/// and remembers how it was built from the inserted vectors, identified by
/// caller-supplied integer tags.  Inserting a vector either enlarges the span
/// or reveals a linear relation among inserted vectors.
#[derive(Clone, Debug)]
pub struct SparseEchelon<K: Ord + Clone> {
    pivots: BTreeMap<K, EchelonRow<K>>,
}

impl<K: Ord + Clone> Default for SparseEchelon<K> {
    fn default() -> Self {
        SparseEchelon { pivots: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> SparseEchelon<K> {
    /// An empty echelon.
    pub fn new() -> Self {
        Self::default()
    }

    /// Current rank.
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn reduce(&self, mut cur: SparseVec<K>, comb: &mut SparseVec<usize>) -> SparseVec<K> {
        loop {
            let Some((lead, coef)) = cur.iter().find(|(k, _)| self.pivots.contains_key(*k)) else {
                return cur;
            };
            let lead = lead.clone();
            let f = -coef;
            let p = &self.pivots[&lead];
            sparse_axpy(&mut cur, &f, &p.row);
            sparse_axpy(comb, &f, &p.comb);
        }
    }

    /// Inserts `row` with `tag`.  Returns `None` if the rank grew, otherwise
    /// the relation `Σ c_t·row_t = 0` (with `c_tag = 1`) it satisfies.
    pub fn insert(&mut self, row: SparseVec<K>, tag: usize) -> Option<SparseVec<usize>> {
        let mut comb = SparseVec::new();
        comb.insert(tag, Scalar::one());
        let cur = self.reduce(row, &mut comb);
        match cur.iter().next() {
            None => Some(comb),
            Some((lead, c)) => {
                let lead = lead.clone();
                let inv = c.inv().expect("non-zero coefficient");
                let row: SparseVec<K> = cur.into_iter().map(|(k, v)| (k, &v * &inv)).collect();
                let comb: SparseVec<usize> = comb.into_iter().map(|(k, v)| (k, &v * &inv)).collect();
                self.pivots.insert(lead, EchelonRow { row, comb });
                None
            }
        }
    }

    /// Writes `v` as `Σ c_t·row_t` over inserted rows, if it is in their span.
    pub fn express(&self, v: &SparseVec<K>) -> Option<SparseVec<usize>> {
        let mut comb = SparseVec::new();
        let rest = self.reduce(v.clone(), &mut comb);
        if rest.is_empty() {
            Some(comb.into_iter().map(|(k, c)| (k, -c)).filter(|(_, c)| !c.is_zero()).collect())
        } else {
            None
        }
    }

    /// The stored echelon rows, ordered by leading key.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.pivots.values().map(|r| &r.row)
    }

    /// True if `v` lies in the span of the inserted rows.
    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        let mut comb = SparseVec::new();
        self.reduce(v.clone(), &mut comb).is_empty()
    }
}

impl SparseEchelon<usize> {
    /// Basis of the common kernel of the inserted rows, viewed as linear forms
    /// on `nvars` unknowns: one vector per free unknown `f`, with `x_f = 1`
    /// and the other free unknowns zero (the same basis a reduced row echelon
    /// form yields).
    pub fn null_basis(&self, nvars: usize) -> Vec<Vector> {
        let free: Vec<usize> = (0..nvars).filter(|k| !self.pivots.contains_key(k)).collect();
        // Every row only involves unknowns after its leading one, so pivots
        // can be solved from the last to the first.
        free.iter()
            .map(|&f| {
                let mut v = zero_vec(nvars);
                v[f] = Scalar::one();
                for (&k, row) in self.pivots.iter().rev() {
                    let mut acc = Scalar::zero();
                    for (j, c) in &row.row {
                        if *j != k && !v[*j].is_zero() {
                            acc = &acc - &(c * &v[*j]);
                        }
                    }
                    v[k] = acc;
                }
                v
            })
            .collect()
    }
}

/// Nullspace basis of a homogeneous system given as sparse equations over
/// `nvars` unknowns.  Redundant equations are discarded incrementally, so very
/// tall systems stay cheap.
pub fn sparse_nullspace<I>(equations: I, nvars: usize) -> Vec<Vector>
where
    I: IntoIterator<Item = SparseVec<usize>>,
{
    let mut ech = SparseEchelon::<usize>::new();
    for (t, eq) in equations.into_iter().enumerate() {
        if !eq.is_empty() {
            ech.insert(eq, t);
        }
        if ech.rank() == nvars {
            break;
        }
    }
    ech.null_basis(nvars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vector {
        v.iter().map(|&x| Scalar::int(x)).collect()
    }

    #[test]
    fn nullspace_of_rank_one_matrix() {
        let m = Matrix::from_ints(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(is_zero_vec(&m.mul_vec(v)));
        }
    }

    #[test]
    fn inverse_and_det() {
        let m = Matrix::from_ints(&[&[2, 1], &[7, 4]]);
        assert_eq!(m.det(), Scalar::int(1));
        assert_eq!(m.mul(&m.inverse().unwrap()), Matrix::identity(2));
        assert!(Matrix::from_ints(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn charpoly_of_companion() {
        // t^2 - 3t + 2
        let m = Matrix::from_ints(&[&[0, -2], &[1, 3]]);
        assert_eq!(m.charpoly().unwrap(), ints(&[2, -3, 1]));
    }

    #[test]
    fn subspace_intersection() {
        let a = vec![ints(&[1, 0, 0]), ints(&[0, 1, 0])];
        let b = vec![ints(&[0, 1, 0]), ints(&[0, 0, 1])];
        let i = intersection(&a, &b, 3);
        assert!(same_span(&i, &[ints(&[0, 1, 0])], 3));
        assert!(is_direct_sum_of(&[vec![ints(&[1, 0, 0])], b.clone()], &[ints(&[1, 1, 1]), ints(&[1, 0, 0]), ints(&[0, 0, 1])], 3));
    }

    #[test]
    fn coordinatizer_detects_membership() {
        let c = Coordinatizer::new(vec![ints(&[1, 1, 0]), ints(&[0, 1, 1])], 3).unwrap();
        assert_eq!(c.coords(&ints(&[1, 3, 2])), Some(ints(&[1, 2])));
        assert_eq!(c.coords(&ints(&[1, 0, 0])), None);
    }

    #[test]
    fn sparse_echelon_finds_relations() {
        let mut e = SparseEchelon::<u32>::new();
        let v = |xs: &[(u32, i64)]| xs.iter().map(|&(k, c)| (k, Scalar::int(c))).collect::<SparseVec<u32>>();
        assert!(e.insert(v(&[(0, 1), (1, 1)]), 0).is_none());
        assert!(e.insert(v(&[(1, 1), (2, 1)]), 1).is_none());
        let rel = e.insert(v(&[(0, 1), (1, 2), (2, 1)]), 2).unwrap();
        assert_eq!(rel.get(&0), Some(&Scalar::int(-1)));
        assert_eq!(rel.get(&1), Some(&Scalar::int(-1)));
        let ex = e.express(&v(&[(0, 2), (1, 3), (2, 1)])).unwrap();
        assert_eq!(ex.get(&0), Some(&Scalar::int(2)));
        assert_eq!(ex.get(&1), Some(&Scalar::int(1)));
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec(-3i64..4, 12)) {
            let rows: Vec<Vector> = entries.chunks(4).map(ints).collect();
            let m = Matrix::from_rows(rows);
            prop_assert_eq!(m.rank() + m.nullspace().len(), 4);
            for v in m.nullspace() {
                prop_assert!(is_zero_vec(&m.mul_vec(&v)));
            }
        }

        #[test]
        fn solve_returns_solutions(entries in proptest::collection::vec(-3i64..4, 9), x in proptest::collection::vec(-3i64..4, 3)) {
            let m = Matrix::from_rows(entries.chunks(3).map(ints).collect());
            let b = m.mul_vec(&ints(&x));
            let sol = m.solve(&b).unwrap();
            prop_assert_eq!(m.mul_vec(&sol), b);
        }

        #[test]
        fn sparse_rank_matches_dense(entries in proptest::collection::vec(-2i64..3, 20)) {
            let rows: Vec<Vector> = entries.chunks(5).map(ints).collect();
            let mut e = SparseEchelon::<usize>::new();
            for (t, r) in rows.iter().enumerate() {
                let sv: SparseVec<usize> = r.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.clone())).collect();
                if let Some(rel) = e.insert(sv, t) {
                    let combo = rel.iter().fold(zero_vec(5), |mut acc, (tt, c)| { vec_axpy(&mut acc, c, &rows[*tt]); acc });
                    prop_assert!(is_zero_vec(&combo));
                }
            }
            prop_assert_eq!(e.rank(), Matrix::from_rows(rows).rank());
        }
    }
}
