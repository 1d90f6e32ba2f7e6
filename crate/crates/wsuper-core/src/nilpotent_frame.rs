//! The data attached to an even nilpotent element.
//!
//! From a Lie superalgebra `g` with an invariant form and an even nilpotent
//! `e` this module builds an sl₂-triple `(e, h, f)`, the grading of `g` by
//! `ad h`-eigenvalues, the character `χ = (e, ·)`, adapted bases of `g(−1)`
//! for the skew form `⟨x, y⟩ = χ([x, y])`, the subalgebras `m ⊆ m′`, the
//! parabolic `p`, the letter alphabet of `p̃ = p ⊕ (complement of m in
//! g(−1))`, the centralizer `g^e`, and the dimension counters.  It also
//! provides simultaneous eigenspace decompositions under toral subalgebras,
//! Jordan decompositions in the matrix realization, and centralizer splits
//! of semisimple elements into ideal summands.

use crate::algebra_data::{LieSuperalgebra, Parity};
use crate::error::{Error, Result};
use crate::linalg::{
    in_span, intersection, is_direct_sum_of, is_zero_vec, lin_comb, same_span, span_basis, span_dim,
    vec_axpy, vec_scale, zero_vec, Coordinatizer, Matrix, Vector,
};
use crate::scalar::{rational_sqrt, Rational, Scalar};
use crate::upoly::UPoly;
use num_traits::{One, ToPrimitive};
use petgraph::unionfind::UnionFind;
use std::collections::BTreeMap;

/// Options controlling frame construction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FrameOptions {
    /// Allow one quadratic extension of ℚ when normalizing the odd frame.
    pub allow_extension: bool,
}

/// An sl₂-triple `[h,e] = 2e`, `[h,f] = −2f`, `[e,f] = h`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sl2Triple {
    /// The nilpotent.
    pub e: Vector,
    /// The semisimple element.
    pub h: Vector,
    /// The opposite nilpotent.
    pub f: Vector,
    /// True when `e = 0` (then `h = f = 0`).
    pub degenerate: bool,
}

/// True if `ad x` is nilpotent.
pub fn is_ad_nilpotent(alg: &LieSuperalgebra, x: &[Scalar]) -> bool {
    let n = alg.dim();
    let ad = alg.ad_matrix(x);
    // Repeated squaring: ad^(2^k) with 2^k ≥ n.
    let mut p = ad;
    let mut k = 1;
    while k < n {
        p = p.mul(&p);
        k *= 2;
    }
    p.is_zero()
}

fn restrict_to(alg: &LieSuperalgebra, idx: &[usize], cols: &[Vector]) -> Matrix {
    let rows: Vec<Vector> = (0..alg.dim()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let _ = idx;
    Matrix::from_rows_with_cols(rows, cols.len())
}

/// Completes an even nilpotent `e` to an sl₂-triple by linear solves.
pub fn complete_sl2(alg: &LieSuperalgebra, e: &[Scalar]) -> Result<Sl2Triple> {
    let n = alg.dim();
    if alg.parity_of(e) != Some(Parity::Even) {
        return Err(Error::Invalid("the nilpotent must be even".into()));
    }
    if is_zero_vec(e) {
        return Ok(Sl2Triple { e: e.to_vec(), h: zero_vec(n), f: zero_vec(n), degenerate: true });
    }
    if !is_ad_nilpotent(alg, e) {
        return Err(Error::NotNilpotent);
    }
    let even = alg.indices_of_parity(Parity::Even);
    let embed = |c: &[Scalar]| {
        let mut v = zero_vec(n);
        for (k, &i) in even.iter().enumerate() {
            v[i] = c[k].clone();
        }
        v
    };
    // [e, [e, z]] = −2e for even z.
    let cols: Vec<Vector> = even.iter().map(|&i| alg.bracket(e, &alg.bracket(e, &alg.basis_vec(i)))).collect();
    let a = restrict_to(alg, &even, &cols);
    let rhs = vec_scale(e, &Scalar::int(-2));
    let z = a.solve(&rhs).ok_or_else(|| Error::NoSolution("no h with [h,e] = 2e in [e,g]".into()))?;
    let h = alg.bracket(e, &embed(&z));
    // [e, f] = h and [h, f] = −2f, jointly linear in even f.
    let mut rows: Vec<Vector> = Vec::new();
    let mut rhs = Vec::new();
    let ce: Vec<Vector> = even.iter().map(|&i| alg.bracket(e, &alg.basis_vec(i))).collect();
    let chf: Vec<Vector> = even
        .iter()
        .map(|&i| {
            let b = alg.basis_vec(i);
            let mut v = alg.bracket(&h, &b);
            vec_axpy(&mut v, &Scalar::int(2), &b);
            v
        })
        .collect();
    for r in 0..n {
        rows.push(ce.iter().map(|c| c[r].clone()).collect());
        rhs.push(h[r].clone());
    }
    for r in 0..n {
        rows.push(chf.iter().map(|c| c[r].clone()).collect());
        rhs.push(Scalar::zero());
    }
    let sys = Matrix::from_rows_with_cols(rows, even.len());
    let fc = sys.solve(&rhs).ok_or_else(|| Error::NoSolution("no f completing the sl2-triple".into()))?;
    let f = embed(&fc);
    Ok(Sl2Triple { e: e.to_vec(), h, f, degenerate: false })
}

/// One graded piece `g(j)`, split by parity.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedPiece {
    /// The eigenvalue `j` of `ad h`.
    pub degree: i64,
    /// Basis of `g(j)_0̄`.
    pub even: Vec<Vector>,
    /// Basis of `g(j)_1̄`.
    pub odd: Vec<Vector>,
}

/// The decomposition of `g` into `ad h`-eigenspaces.
#[derive(Clone, Debug, PartialEq)]
pub struct DynkinGrading {
    /// Non-zero pieces in increasing degree.
    pub pieces: Vec<GradedPiece>,
}

impl DynkinGrading {
    /// The piece of degree `j`, if non-zero.
    pub fn piece(&self, j: i64) -> Option<&GradedPiece> {
        self.pieces.iter().find(|p| p.degree == j)
    }

    /// `(dim g(j)_0̄, dim g(j)_1̄)`.
    pub fn dims(&self, j: i64) -> (usize, usize) {
        self.piece(j).map_or((0, 0), |p| (p.even.len(), p.odd.len()))
    }

    /// Basis of `g(j)` (even vectors first).
    pub fn basis(&self, j: i64) -> Vec<Vector> {
        self.piece(j).map_or_else(Vec::new, |p| p.even.iter().chain(&p.odd).cloned().collect())
    }

    /// Basis of the given parity part of `g(j)`.
    pub fn basis_of(&self, j: i64, par: Parity) -> Vec<Vector> {
        self.piece(j).map_or_else(Vec::new, |p| if par.is_odd() { p.odd.clone() } else { p.even.clone() })
    }

    /// Basis of `⊕_{j ∈ range} g(j)`.
    pub fn sum_basis(&self, pred: impl Fn(i64) -> bool) -> Vec<Vector> {
        self.pieces.iter().filter(|p| pred(p.degree)).flat_map(|p| p.even.iter().chain(&p.odd).cloned()).collect()
    }

    /// The occurring degrees.
    pub fn degrees(&self) -> Vec<i64> {
        self.pieces.iter().map(|p| p.degree).collect()
    }
}

/// Eigenspace decomposition of `ad h`, which must have integer eigenvalues
/// and be diagonalizable.
pub fn dynkin_grading(alg: &LieSuperalgebra, h: &[Scalar]) -> Result<DynkinGrading> {
    let n = alg.dim() as i64;
    let mut pieces = Vec::new();
    let mut total = 0;
    let per_parity: Vec<(Parity, Vec<usize>)> =
        [Parity::Even, Parity::Odd].iter().map(|&p| (p, alg.indices_of_parity(p))).collect();
    let ad = alg.ad_matrix(h);
    for j in -(2 * n)..=(2 * n) {
        let mut piece = GradedPiece { degree: j, even: Vec::new(), odd: Vec::new() };
        for (par, idx) in &per_parity {
            if idx.is_empty() {
                continue;
            }
            let k = idx.len();
            let mut m = Matrix::zeros(k, k);
            for (a, &ia) in idx.iter().enumerate() {
                for (b, &ib) in idx.iter().enumerate() {
                    let mut v = ad.get(ia, ib).clone();
                    if a == b {
                        v -= &Scalar::int(j);
                    }
                    m.set(a, b, v);
                }
            }
            let ns: Vec<Vector> = m
                .nullspace()
                .into_iter()
                .map(|c| {
                    let mut v = zero_vec(alg.dim());
                    for (a, &ia) in idx.iter().enumerate() {
                        v[ia] = c[a].clone();
                    }
                    v
                })
                .collect();
            let ns = span_basis(&ns, alg.dim());
            total += ns.len();
            if par.is_odd() {
                piece.odd = ns;
            } else {
                piece.even = ns;
            }
        }
        if !piece.even.is_empty() || !piece.odd.is_empty() {
            pieces.push(piece);
        }
    }
    if total != alg.dim() {
        return Err(Error::Unsupported("ad h is not diagonalizable with integer eigenvalues".into()));
    }
    Ok(DynkinGrading { pieces })
}

/// Centralizer `g^x` of a homogeneous element, split as `(even, odd)`.
pub fn centralizer(alg: &LieSuperalgebra, x: &[Scalar]) -> Result<(Vec<Vector>, Vec<Vector>)> {
    if alg.parity_of(x).is_none() {
        return Err(Error::Invalid("centralizer of an inhomogeneous element".into()));
    }
    let mut out = Vec::new();
    for par in [Parity::Even, Parity::Odd] {
        let basis: Vec<Vector> = alg.indices_of_parity(par).iter().map(|&i| alg.basis_vec(i)).collect();
        out.push(kernel_on(alg, x, &basis));
    }
    let odd = out.pop().expect("two parts");
    let even = out.pop().expect("two parts");
    Ok((even, odd))
}

/// Basis of `{v ∈ span(basis) : [x, v] = 0}`.
fn kernel_on(alg: &LieSuperalgebra, x: &[Scalar], basis: &[Vector]) -> Vec<Vector> {
    if basis.is_empty() {
        return Vec::new();
    }
    let cols: Vec<Vector> = basis.iter().map(|b| alg.bracket(x, b)).collect();
    let m = Matrix::from_cols(&cols, alg.dim());
    let ns: Vec<Vector> = m.nullspace().iter().map(|c| lin_comb(c, basis, alg.dim())).collect();
    span_basis(&ns, alg.dim())
}

/// Which block of the alphabet a letter belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LetterRole {
    /// Even element of `g^e`.
    CentralizerEven,
    /// Even element of the complement `[f, g(j)]`, `j ≥ 2`.
    ComplementEven,
    /// Odd element of `g^e`.
    CentralizerOdd,
    /// Odd element of the complement.
    ComplementOdd,
    /// Symplectic frame vector of `g(−1)_0̄` outside `m`.
    U,
    /// Symmetric frame vector of `g(−1)_1̄` outside `m′`.
    V,
    /// The middle odd frame vector (only when `dim g(−1)_1̄` is odd).
    VMid,
    /// A basis element of `m`.
    M,
}

/// A named homogeneous weight vector used as a PBW letter.
#[derive(Clone, Debug, PartialEq)]
pub struct Letter {
    /// Display name (`x1`, `y2`, `u1`, `v1`, `m3`, …).
    pub name: String,
    /// Coordinates in the basis of `g`.
    pub vec: Vector,
    /// ℤ₂-degree.
    pub parity: Parity,
    /// `ad h`-eigenvalue.
    pub weight: i64,
    /// Block of the alphabet.
    pub role: LetterRole,
}

impl Letter {
    /// Kazhdan degree `weight + 2`.
    pub fn kdeg(&self) -> i64 {
        self.weight + 2
    }
}

/// The dimension counters attached to a frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Counters {
    /// `dim g(−1)_0̄ / 2`.
    pub s: usize,
    /// `dim g(−1)_1̄`.
    pub r: usize,
    /// Number of odd frame vectors of `g(−1)` outside `m`, i.e. `⌈r/2⌉`
    /// (includes the middle vector when `r` is odd).
    pub t: usize,
    /// `r − t = ⌊r/2⌋`, the odd part of `g(−1)′`.
    pub t_prime: usize,
    /// `dim g_0̄ − dim g^e_0̄`.
    pub d0: usize,
    /// `dim g_1̄ − dim g^e_1̄`.
    pub d1: usize,
    /// `dim g^e_0̄`.
    pub l: usize,
    /// `dim g^e_1̄`.
    pub q: usize,
    /// `dim p_0̄`.
    pub m: usize,
    /// `dim p_1̄`.
    pub n: usize,
}

impl Counters {
    /// True when `r` is odd.
    pub fn r_odd(&self) -> bool {
        self.r % 2 == 1
    }
}

/// The complete package of data attached to `(g, e)`.
#[derive(Clone, Debug)]
pub struct NilpotentFrame {
    /// The ambient algebra.
    pub alg: LieSuperalgebra,
    /// The sl₂-triple.
    pub triple: Sl2Triple,
    /// `1/(e, f)`: the form is rescaled by this factor so that `(e, f) = 1`.
    pub form_scale: Scalar,
    /// The grading by `ad h`.
    pub grading: DynkinGrading,
    /// `u_1, …, u_{2s}` with `⟨u_i, u_{2s+1−i}⟩ = −1` for `i ≤ s`.
    pub u: Vec<Vector>,
    /// `v_1, …, v_r` with `⟨v_i, v_{r+1−i}⟩ = 1` except possibly the middle.
    pub v: Vec<Vector>,
    /// `⟨v_mid, v_mid⟩` when `r` is odd (1 when normalized); 1 when `r` is even.
    pub c: Scalar,
    /// Basis of `m`.
    pub m_basis: Vec<Vector>,
    /// Basis of `m′`.
    pub mprime_basis: Vec<Vector>,
    /// Basis of `p = ⊕_{j≥0} g(j)`.
    pub p_basis: Vec<Vector>,
    /// The alphabet of `p̃`: `x_1..x_m, y_1..y_n, u_1..u_s, v_1..v_t`.
    pub letters: Vec<Letter>,
    /// Letters spanning `m` (weights ≤ −1).
    pub m_letters: Vec<Letter>,
    /// Counters.
    pub counters: Counters,
}

/// Exhaustive checks of the frame properties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameReport {
    /// The triple relations.
    pub triple: bool,
    /// The grading pieces partition a basis of `g`.
    pub grading_partition: bool,
    /// `[g(i), g(j)] ⊆ g(i+j)`.
    pub grading_brackets: bool,
    /// `(g(i), g(j)) = 0` unless `i + j = 0`.
    pub grading_form: bool,
    /// `χ(g_1̄) = 0`.
    pub chi_odd_zero: bool,
    /// `⟨u_i, u_j⟩ = i*·δ_{i+j,2s+1}`.
    pub u_pairing: bool,
    /// `⟨v_i, v_j⟩ = c_i·δ_{i+j,r+1}` with `c_i = 1` off the middle.
    pub v_pairing: bool,
    /// `m` is a subalgebra and `χ` vanishes on `[m, m]`.
    pub m_character: bool,
    /// `m^⊥ = [m′, e] ⊕ g^f`.
    pub m_perp: bool,
    /// `p = ⊕_{j≥2} [f, g(j)] ⊕ g^e`.
    pub p_decomposition: bool,
    /// `dim g − dim g^e = Σ_{k≥2} 2 dim g(−k) + dim g(−1)` per parity.
    pub centralizer_dims: bool,
    /// `d_1 ≡ r (mod 2)`.
    pub d1_parity: bool,
    /// `[e, g(i)] = g(i+2)` for `i ≥ −1`.
    pub e_surjective: bool,
    /// `g^e ⊆ ⊕_{i≥0} g(i)`.
    pub ge_nonnegative: bool,
    /// `g = p̃ ⊕ m`.
    pub alphabet_complement: bool,
}

impl FrameReport {
    /// True when every check passed.
    pub fn all(&self) -> bool {
        self.triple
            && self.grading_partition
            && self.grading_brackets
            && self.grading_form
            && self.chi_odd_zero
            && self.u_pairing
            && self.v_pairing
            && self.m_character
            && self.m_perp
            && self.p_decomposition
            && self.centralizer_dims
            && self.d1_parity
            && self.e_surjective
            && self.ge_nonnegative
            && self.alphabet_complement
    }
}

impl NilpotentFrame {
    /// Completes `e` to a triple and builds the frame.
    pub fn new(alg: &LieSuperalgebra, e: &[Scalar], opts: FrameOptions) -> Result<NilpotentFrame> {
        let triple = complete_sl2(alg, e)?;
        build_frame(alg, triple, opts)
    }

    /// `χ(x) = (e, x)` under the rescaled form.
    pub fn chi(&self, x: &[Scalar]) -> Scalar {
        if self.triple.degenerate {
            return Scalar::zero();
        }
        &self.alg.form(&self.triple.e, x).expect("frame algebras carry a form") * &self.form_scale
    }

    /// `⟨x, y⟩ = χ([x, y])`.
    pub fn pairing(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        self.chi(&self.alg.bracket(x, y))
    }

    /// The rescaled form `(x, y)/(e, f)`.
    pub fn form(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        &self.alg.form(x, y).expect("frame algebras carry a form") * &self.form_scale
    }

    /// Basis of `g^e` as `(even, odd)` in alphabet order.
    pub fn ge_basis(&self) -> (Vec<Vector>, Vec<Vector>) {
        let pick = |role| self.letters.iter().filter(|l| l.role == role).map(|l| l.vec.clone()).collect();
        (pick(LetterRole::CentralizerEven), pick(LetterRole::CentralizerOdd))
    }

    /// Letters that are pure centralizer elements (`x_1..x_l`, `y_1..y_q`).
    pub fn ge_letters(&self) -> Vec<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, l)| matches!(l.role, LetterRole::CentralizerEven | LetterRole::CentralizerOdd))
            .map(|(i, _)| i)
            .collect()
    }

    /// Index of the middle odd letter, when `r` is odd.
    pub fn vmid_letter(&self) -> Option<usize> {
        self.letters.iter().position(|l| l.role == LetterRole::VMid)
    }

    /// The middle odd vector, when `r` is odd.
    pub fn vmid(&self) -> Option<&Vector> {
        self.vmid_letter().map(|i| &self.letters[i].vec)
    }

    /// Runs every structural check.
    pub fn verify(&self) -> FrameReport {
        let alg = &self.alg;
        let n = alg.dim();
        let t = &self.triple;
        let triple = {
            let he = alg.bracket(&t.h, &t.e);
            let hf = alg.bracket(&t.h, &t.f);
            let ef = alg.bracket(&t.e, &t.f);
            he == vec_scale(&t.e, &Scalar::int(2)) && hf == vec_scale(&t.f, &Scalar::int(-2)) && ef == t.h
        };
        let all_pieces: Vec<Vector> = self.grading.sum_basis(|_| true);
        let grading_partition = all_pieces.len() == n && span_dim(&all_pieces, n) == n;
        let mut grading_brackets = true;
        let mut grading_form = true;
        for a in &self.grading.pieces {
            for b in &self.grading.pieces {
                let target = self.grading.basis(a.degree + b.degree);
                for x in a.even.iter().chain(&a.odd) {
                    for y in b.even.iter().chain(&b.odd) {
                        let z = alg.bracket(x, y);
                        if !is_zero_vec(&z) && !in_span(&target, &z, n) {
                            grading_brackets = false;
                        }
                        if a.degree + b.degree != 0 && !self.form(x, y).is_zero() {
                            grading_form = false;
                        }
                    }
                }
            }
        }
        let chi_odd_zero = alg.indices_of_parity(Parity::Odd).iter().all(|&i| self.chi(&alg.basis_vec(i)).is_zero());
        let s = self.counters.s;
        let u_pairing = (0..2 * s).all(|i| {
            (0..2 * s).all(|j| {
                let want = if i + j + 2 == 2 * s + 1 {
                    if i < s {
                        Scalar::int(-1)
                    } else {
                        Scalar::one()
                    }
                } else {
                    Scalar::zero()
                };
                self.pairing(&self.u[i], &self.u[j]) == want
            })
        });
        let r = self.counters.r;
        let v_pairing = (0..r).all(|i| {
            (0..r).all(|j| {
                let want = if i + j + 2 == r + 1 {
                    if r % 2 == 1 && i == r / 2 {
                        self.c.clone()
                    } else {
                        Scalar::one()
                    }
                } else {
                    Scalar::zero()
                };
                self.pairing(&self.v[i], &self.v[j]) == want
            })
        });
        let m_character = self.m_basis.iter().all(|x| {
            self.m_basis.iter().all(|y| {
                let z = alg.bracket(x, y);
                in_span(&self.m_basis, &z, n) && self.chi(&z).is_zero()
            })
        });
        let m_perp = self.check_m_perp();
        let (ge_even, ge_odd) = self.ge_basis();
        let ge_all: Vec<Vector> = ge_even.iter().chain(&ge_odd).cloned().collect();
        let complement: Vec<Vector> = self
            .letters
            .iter()
            .filter(|l| matches!(l.role, LetterRole::ComplementEven | LetterRole::ComplementOdd))
            .map(|l| l.vec.clone())
            .collect();
        let mut parts: Vec<Vec<Vector>> = Vec::new();
        for j in self.grading.degrees().into_iter().filter(|&j| j >= 2) {
            let img: Vec<Vector> = self.grading.basis(j).iter().map(|x| alg.bracket(&t.f, x)).collect();
            parts.push(span_basis(&img, n));
        }
        parts.push(ge_all.clone());
        let p_decomposition = is_direct_sum_of(&parts, &self.p_basis, n)
            && same_span(&complement, &parts[..parts.len() - 1].concat(), n);
        let mut centralizer_dims = true;
        for (par, ge_dim) in [(Parity::Even, ge_even.len()), (Parity::Odd, ge_odd.len())] {
            let total = alg.indices_of_parity(par).len();
            let mut rhs = 0;
            for p in &self.grading.pieces {
                let d = if par.is_odd() { p.odd.len() } else { p.even.len() };
                if p.degree <= -2 {
                    rhs += 2 * d;
                } else if p.degree == -1 {
                    rhs += d;
                }
            }
            if total - ge_dim != rhs {
                centralizer_dims = false;
            }
        }
        let d1_parity = self.counters.d1 % 2 == self.counters.r % 2;
        let e_surjective = self.grading.degrees().iter().copied().chain([-1]).filter(|&i| i >= -1).all(|i| {
            let img: Vec<Vector> = self.grading.basis(i).iter().map(|x| alg.bracket(&t.e, x)).collect();
            same_span(&img, &self.grading.basis(i + 2), n)
        });
        let nonneg = self.grading.sum_basis(|j| j >= 0);
        let ge_nonnegative = ge_all.iter().all(|x| in_span(&nonneg, x, n));
        let mut alphabet: Vec<Vector> = self.letters.iter().map(|l| l.vec.clone()).collect();
        alphabet.extend(self.m_basis.iter().cloned());
        let alphabet_complement = alphabet.len() == n && span_dim(&alphabet, n) == n;
        FrameReport {
            triple: triple || t.degenerate,
            grading_partition,
            grading_brackets,
            grading_form,
            chi_odd_zero,
            u_pairing,
            v_pairing,
            m_character,
            m_perp,
            p_decomposition,
            centralizer_dims,
            d1_parity,
            e_surjective: e_surjective || t.degenerate,
            ge_nonnegative,
            alphabet_complement,
        }
    }

    fn check_m_perp(&self) -> bool {
        let alg = &self.alg;
        let n = alg.dim();
        let gram = match alg.gram() {
            Some(g) => g,
            None => return false,
        };
        // m^⊥ = {x : (x, y) = 0 for all y ∈ m}
        let rows: Vec<Vector> = self.m_basis.iter().map(|y| gram.mul_vec(y)).collect();
        let perp = if rows.is_empty() {
            (0..n).map(|i| alg.basis_vec(i)).collect()
        } else {
            Matrix::from_rows_with_cols(rows, n).nullspace()
        };
        let me: Vec<Vector> = self.mprime_basis.iter().map(|x| alg.bracket(x, &self.triple.e)).collect();
        let me = span_basis(&me, n);
        let (gf0, gf1) = centralizer(alg, &self.triple.f).expect("f is even");
        let gf: Vec<Vector> = gf0.into_iter().chain(gf1).collect();
        is_direct_sum_of(&[me, gf], &perp, n)
    }
}

fn scale_to(v: &[Scalar], c: &Scalar) -> Vector {
    vec_scale(v, c)
}

/// Builds the frame from a triple.
pub fn build_frame(alg: &LieSuperalgebra, triple: Sl2Triple, opts: FrameOptions) -> Result<NilpotentFrame> {
    let n = alg.dim();
    if alg.gram().is_none() {
        return Err(Error::Invalid("frame construction needs an invariant form".into()));
    }
    let grading = if triple.degenerate {
        let even: Vec<Vector> = alg.indices_of_parity(Parity::Even).iter().map(|&i| alg.basis_vec(i)).collect();
        let odd: Vec<Vector> = alg.indices_of_parity(Parity::Odd).iter().map(|&i| alg.basis_vec(i)).collect();
        DynkinGrading { pieces: vec![GradedPiece { degree: 0, even, odd }] }
    } else {
        dynkin_grading(alg, &triple.h)?
    };
    let form_scale = if triple.degenerate {
        Scalar::one()
    } else {
        let ef = alg.form(&triple.e, &triple.f)?;
        ef.inv().map_err(|_| Error::Degenerate("(e, f) = 0".into()))?
    };
    let mut frame = NilpotentFrame {
        alg: alg.clone(),
        triple,
        form_scale,
        grading,
        u: Vec::new(),
        v: Vec::new(),
        c: Scalar::one(),
        m_basis: Vec::new(),
        mprime_basis: Vec::new(),
        p_basis: Vec::new(),
        letters: Vec::new(),
        m_letters: Vec::new(),
        counters: Counters { s: 0, r: 0, t: 0, t_prime: 0, d0: 0, d1: 0, l: 0, q: 0, m: 0, n: 0 },
    };
    // Symplectic frame of g(−1)_0̄.
    let w0 = frame.grading.basis_of(-1, Parity::Even);
    let (lows, highs) = symplectic_frame(&frame, w0)?;
    let s = lows.len();
    frame.u = lows.iter().cloned().chain(highs.iter().rev().cloned()).collect();
    // Symmetric frame of g(−1)_1̄.
    let w1 = frame.grading.basis_of(-1, Parity::Odd);
    let r = w1.len();
    let (vl, mid, vh, c) = symmetric_frame(&frame, w1, opts)?;
    frame.c = c;
    frame.v = vl.iter().cloned().chain(mid.iter().cloned()).chain(vh.iter().rev().cloned()).collect();
    // m, m′, p.
    let mut m_letters = Vec::new();
    let mut counter = 0;
    for p in frame.grading.pieces.iter().filter(|p| p.degree <= -2) {
        for (vecs, par) in [(&p.even, Parity::Even), (&p.odd, Parity::Odd)] {
            for v in vecs {
                counter += 1;
                m_letters.push(Letter { name: format!("m{counter}"), vec: v.clone(), parity: par, weight: p.degree, role: LetterRole::M });
            }
        }
    }
    for (vecs, par) in [(&highs, Parity::Even), (&vh, Parity::Odd)] {
        for v in vecs.iter().rev() {
            counter += 1;
            m_letters.push(Letter { name: format!("m{counter}"), vec: v.clone(), parity: par, weight: -1, role: LetterRole::M });
        }
    }
    frame.m_basis = m_letters.iter().map(|l| l.vec.clone()).collect();
    frame.mprime_basis = frame.m_basis.iter().cloned().chain(mid.iter().cloned()).collect();
    frame.p_basis = frame.grading.sum_basis(|j| j >= 0);
    // Centralizer ordered by weight, then the complement [f, g(j)].
    let mut letters = Vec::new();
    let mut ge_dims = (0, 0);
    let mut comp: Vec<(Parity, i64, Vector)> = Vec::new();
    let mut ge: Vec<(Parity, i64, Vector)> = Vec::new();
    for p in frame.grading.pieces.iter().filter(|p| p.degree >= 0) {
        for (par, vecs) in [(Parity::Even, &p.even), (Parity::Odd, &p.odd)] {
            for v in kernel_on(alg, &frame.triple.e, vecs) {
                ge.push((par, p.degree, v));
            }
        }
    }
    if !frame.triple.degenerate {
        for p in frame.grading.pieces.iter().filter(|p| p.degree >= 2) {
            for (par, vecs) in [(Parity::Even, &p.even), (Parity::Odd, &p.odd)] {
                let img: Vec<Vector> = vecs.iter().map(|x| alg.bracket(&frame.triple.f, x)).collect();
                for v in span_basis(&img, n) {
                    comp.push((par, p.degree - 2, v));
                }
            }
        }
    }
    let (mut xi, mut yi) = (0, 0);
    for (par, role_ge, role_c) in [
        (Parity::Even, LetterRole::CentralizerEven, LetterRole::ComplementEven),
        (Parity::Odd, LetterRole::CentralizerOdd, LetterRole::ComplementOdd),
    ] {
        for (src, role) in [(&ge, role_ge), (&comp, role_c)] {
            for (p, w, v) in src.iter().filter(|(p, _, _)| *p == par) {
                let name = if p.is_odd() {
                    yi += 1;
                    format!("y{yi}")
                } else {
                    xi += 1;
                    format!("x{xi}")
                };
                if role == role_ge {
                    if p.is_odd() {
                        ge_dims.1 += 1;
                    } else {
                        ge_dims.0 += 1;
                    }
                }
                letters.push(Letter { name, vec: v.clone(), parity: *p, weight: *w, role });
            }
        }
    }
    for (i, u) in lows.iter().enumerate() {
        letters.push(Letter { name: format!("u{}", i + 1), vec: u.clone(), parity: Parity::Even, weight: -1, role: LetterRole::U });
    }
    for (i, v) in vl.iter().enumerate() {
        letters.push(Letter { name: format!("v{}", i + 1), vec: v.clone(), parity: Parity::Odd, weight: -1, role: LetterRole::V });
    }
    if let Some(v) = &mid {
        letters.push(Letter { name: format!("v{}", vl.len() + 1), vec: v.clone(), parity: Parity::Odd, weight: -1, role: LetterRole::VMid });
    }
    let (de, dodd) = alg.dims();
    frame.counters = Counters {
        s,
        r,
        t: r.div_ceil(2),
        t_prime: r / 2,
        d0: de - ge_dims.0,
        d1: dodd - ge_dims.1,
        l: ge_dims.0,
        q: ge_dims.1,
        m: xi,
        n: yi,
    };
    frame.letters = letters;
    frame.m_letters = m_letters;
    Ok(frame)
}

type SymplecticPairs = (Vec<Vector>, Vec<Vector>);

fn symplectic_frame(frame: &NilpotentFrame, mut rest: Vec<Vector>) -> Result<SymplecticPairs> {
    let n = frame.alg.dim();
    let mut lows = Vec::new();
    let mut highs = Vec::new();
    while !rest.is_empty() {
        let a = rest[0].clone();
        let Some(bi) = (1..rest.len()).find(|&i| !frame.pairing(&a, &rest[i]).is_zero()) else {
            return Err(Error::Degenerate("the skew form on g(−1)_0̄ is degenerate".into()));
        };
        let ab = frame.pairing(&a, &rest[bi]);
        let b = scale_to(&rest[bi], &(-ab.inv()?));
        let mut projected = Vec::new();
        for (i, w) in rest.iter().enumerate() {
            if i == 0 || i == bi {
                continue;
            }
            let alpha = frame.pairing(w, &b);
            let beta = -frame.pairing(w, &a);
            let mut w2 = w.clone();
            vec_axpy(&mut w2, &alpha, &a);
            vec_axpy(&mut w2, &beta, &b);
            projected.push(w2);
        }
        lows.push(a);
        highs.push(b);
        rest = span_basis(&projected, n);
    }
    Ok((lows, highs))
}

type SymmetricFrame = (Vec<Vector>, Option<Vector>, Vec<Vector>, Scalar);

fn find_isotropic(frame: &NilpotentFrame, rest: &[Vector], opts: FrameOptions) -> Result<Option<Vector>> {
    if let Some(w) = rest.iter().find(|w| frame.pairing(w, w).is_zero()) {
        return Ok(Some(w.clone()));
    }
    let mut ext_candidate = None;
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            let a = frame.pairing(&rest[i], &rest[i]);
            let b = frame.pairing(&rest[i], &rest[j]);
            let c = frame.pairing(&rest[j], &rest[j]);
            // c λ² + 2 b λ + a = 0
            let disc = &(&b * &b) - &(&a * &c);
            let root = match disc.as_rational().as_ref().and_then(rational_sqrt) {
                Some(r) => Some(Scalar::from_rational(r)),
                None if opts.allow_extension && ext_candidate.is_none() => {
                    ext_candidate = Some((i, j, disc.sqrt(true)?, b.clone(), c.clone()));
                    None
                }
                None => None,
            };
            if let Some(sq) = root {
                let lambda = (&(-&b) + &sq).try_div(&c)?;
                let mut w = rest[i].clone();
                vec_axpy(&mut w, &lambda, &rest[j]);
                return Ok(Some(w));
            }
        }
    }
    if let Some((i, j, sq, b, c)) = ext_candidate {
        let lambda = (&(-&b) + &sq).try_div(&c)?;
        let mut w = rest[i].clone();
        vec_axpy(&mut w, &lambda, &rest[j]);
        return Ok(Some(w));
    }
    Ok(None)
}

fn symmetric_frame(frame: &NilpotentFrame, mut rest: Vec<Vector>, opts: FrameOptions) -> Result<SymmetricFrame> {
    let n = frame.alg.dim();
    let mut lows = Vec::new();
    let mut highs = Vec::new();
    while rest.len() >= 2 {
        let Some(a) = find_isotropic(frame, &rest, opts)? else {
            return Err(Error::NeedsExtension(
                "the symmetric form on g(−1)_1̄ has no rational isotropic vector".into(),
            ));
        };
        let Some(b) = rest.iter().find(|w| !frame.pairing(&a, w).is_zero()).cloned() else {
            return Err(Error::Degenerate("the symmetric form on g(−1)_1̄ is degenerate".into()));
        };
        let ab = frame.pairing(&a, &b);
        let bb = frame.pairing(&b, &b);
        let mut b2 = b.clone();
        vec_axpy(&mut b2, &(-(bb.try_div(&(&Scalar::int(2) * &ab))?)), &a);
        let b2 = scale_to(&b2, &frame.pairing(&a, &b2).inv()?);
        let projected: Vec<Vector> = rest
            .iter()
            .map(|w| {
                let mut w2 = w.clone();
                vec_axpy(&mut w2, &(-frame.pairing(w, &b2)), &a);
                vec_axpy(&mut w2, &(-frame.pairing(w, &a)), &b2);
                w2
            })
            .collect();
        lows.push(a);
        highs.push(b2);
        rest = span_basis(&projected, n);
    }
    let (mid, c) = match rest.pop() {
        None => (None, Scalar::one()),
        Some(w) => {
            let c = frame.pairing(&w, &w);
            if c.is_zero() {
                return Err(Error::Degenerate("the symmetric form on g(−1)_1̄ is degenerate".into()));
            }
            match c.sqrt(opts.allow_extension) {
                Ok(sq) => (Some(scale_to(&w, &sq.inv()?)), Scalar::one()),
                Err(Error::NeedsExtension(_)) => (Some(w), c),
                Err(e) => return Err(e),
            }
        }
    };
    Ok((lows, mid, highs, c))
}

// ---------------------------------------------------------------------------
// Toral decompositions, Jordan decomposition, Levi splits.
// ---------------------------------------------------------------------------

/// Eigenspaces of a diagonalizable square matrix with rational eigenvalues.
pub fn eigenspaces(m: &Matrix) -> Result<Vec<(Rational, Vec<Vector>)>> {
    let k = m.nrows();
    if k == 0 {
        return Ok(Vec::new());
    }
    let cp = UPoly::new(m.charpoly()?);
    let (roots, rest) = cp.rational_roots()?;
    if rest > 0 {
        return Err(Error::Unsupported("eigenvalues outside ℚ".into()));
    }
    let mut out = Vec::new();
    let mut total = 0;
    for r in roots {
        let shifted = m.sub(&Matrix::identity(k).scale(&Scalar::from_rational(r.clone())));
        let ns = shifted.nullspace();
        total += ns.len();
        out.push((r, ns));
    }
    if total != k {
        return Err(Error::Unsupported("matrix is not diagonalizable".into()));
    }
    Ok(out)
}

/// Simultaneous eigenspace decomposition under `ad t^e`.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedRoots {
    /// Weight (one value per `t^e` basis element) → basis of the weight space in `g`.
    pub on_g: BTreeMap<Vec<Rational>, Vec<Vector>>,
    /// The same for `g^e`.
    pub on_ge: BTreeMap<Vec<Rational>, Vec<Vector>>,
}

impl RestrictedRoots {
    /// True when the two weight sets coincide.
    pub fn weight_sets_agree(&self) -> bool {
        self.on_g.keys().eq(self.on_ge.keys())
    }
}

fn simultaneous(
    alg: &LieSuperalgebra,
    te: &[Vector],
    space: Vec<Vector>,
) -> Result<BTreeMap<Vec<Rational>, Vec<Vector>>> {
    let n = alg.dim();
    let mut parts: Vec<(Vec<Rational>, Vec<Vector>)> = vec![(Vec::new(), space)];
    for t in te {
        let mut next = Vec::new();
        for (w, basis) in parts {
            if basis.is_empty() {
                continue;
            }
            let coord = Coordinatizer::new(basis.clone(), n)?;
            let cols: Vec<Vector> = basis
                .iter()
                .map(|b| coord.coords(&alg.bracket(t, b)).ok_or_else(|| Error::Invalid("subspace not ad-stable".into())))
                .collect::<Result<_>>()?;
            let k = basis.len();
            let mat = Matrix::from_cols(&cols, k);
            for (ev, vecs) in eigenspaces(&mat)? {
                let mut w2 = w.clone();
                w2.push(ev);
                let vs: Vec<Vector> = vecs.iter().map(|c| lin_comb(c, &basis, n)).collect();
                next.push((w2, span_basis(&vs, n)));
            }
        }
        parts = next;
    }
    let mut out = BTreeMap::new();
    for (w, b) in parts {
        if !b.is_empty() {
            out.insert(w, b);
        }
    }
    Ok(out)
}

/// Weight decomposition of `g` and `g^e` under a toral subalgebra of
/// `g(0)_0̄ ∩ g^e`.
pub fn restricted_roots(frame: &NilpotentFrame, te_basis: &[Vector]) -> Result<RestrictedRoots> {
    let alg = &frame.alg;
    let n = alg.dim();
    let (ge0, ge1) = frame.ge_basis();
    let ge: Vec<Vector> = ge0.iter().chain(&ge1).cloned().collect();
    let g0 = frame.grading.basis_of(0, Parity::Even);
    for (i, t) in te_basis.iter().enumerate() {
        if !in_span(&g0, t, n) || !in_span(&ge0, t, n) {
            return Err(Error::Invalid("t^e element outside g(0)_0̄ ∩ g^e".into()));
        }
        for t2 in &te_basis[i + 1..] {
            if !is_zero_vec(&alg.bracket(t, t2)) {
                return Err(Error::Invalid("t^e elements do not commute".into()));
            }
        }
    }
    let full: Vec<Vector> = (0..n).map(|i| alg.basis_vec(i)).collect();
    Ok(RestrictedRoots { on_g: simultaneous(alg, te_basis, full)?, on_ge: simultaneous(alg, te_basis, ge)? })
}

/// Splits a square matrix with rational eigenvalues into commuting
/// semisimple and nilpotent parts.
fn matrix_jordan(xm: &Matrix) -> Result<(Matrix, Matrix)> {
    let k = xm.nrows();
    let cp = UPoly::new(xm.charpoly()?);
    let (roots, rest) = cp.rational_roots()?;
    if rest > 0 {
        return Err(Error::Unsupported(format!(
            "characteristic polynomial has an irreducible factor of degree {rest} over ℚ"
        )));
    }
    let mut cols = Vec::new();
    let mut diag = Vec::new();
    for r in roots {
        let lam = Scalar::from_rational(r);
        let gen = xm.sub(&Matrix::identity(k).scale(&lam)).pow(k as u64);
        for v in gen.nullspace() {
            cols.push(v);
            diag.push(lam.clone());
        }
    }
    if cols.len() != k {
        return Err(Error::Unsupported("generalized eigenspaces do not span".into()));
    }
    let p = Matrix::from_cols(&cols, k);
    let mut d = Matrix::zeros(k, k);
    for (i, l) in diag.into_iter().enumerate() {
        d.set(i, i, l);
    }
    let sm = p.mul(&d).mul(&p.inverse()?);
    let nm = xm.sub(&sm);
    Ok((sm, nm))
}

/// Jordan decomposition `x = s + n`, computed in the matrix realization when
/// there is one and otherwise through the adjoint representation (which
/// requires `ad` to be faithful, i.e. a trivial center).
pub fn jordan_decompose(alg: &LieSuperalgebra, x: &[Scalar]) -> Result<(Vector, Vector)> {
    if alg.parity_of(x) != Some(Parity::Even) {
        return Err(Error::Invalid("Jordan decomposition of a non-even element".into()));
    }
    if let Some(xm) = alg.matrix_of(x) {
        let (sm, nm) = matrix_jordan(&xm)?;
        let s = alg.element_from_matrix(&sm).ok_or_else(|| Error::NoSolution("semisimple part outside the algebra".into()))?;
        let nn = alg.element_from_matrix(&nm).ok_or_else(|| Error::NoSolution("nilpotent part outside the algebra".into()))?;
        return Ok((s, nn));
    }
    jordan_via_adjoint(alg, x)
}

fn jordan_via_adjoint(alg: &LieSuperalgebra, x: &[Scalar]) -> Result<(Vector, Vector)> {
    let n = alg.dim();
    let flat: Vec<Vector> = (0..n).map(|i| alg.ad_matrix(&alg.basis_vec(i)).entries().to_vec()).collect();
    let coords = Coordinatizer::new(flat, n * n)
        .map_err(|_| Error::Unsupported("no matrix realization and the adjoint representation is not faithful".into()))?;
    let (sm, _) = matrix_jordan(&alg.ad_matrix(x))?;
    let s = coords.coords(sm.entries()).ok_or_else(|| Error::NoSolution("semisimple part of ad x is not inner".into()))?;
    let nn: Vector = x.iter().zip(&s).map(|(a, b)| a - b).collect();
    Ok((s, nn))
}

/// A subalgebra together with the coordinates of its basis in `g`.
#[derive(Clone, Debug)]
pub struct LeviPart {
    /// The subalgebra with its own basis.
    pub alg: LieSuperalgebra,
    /// Its basis vectors written in `g`.
    pub basis_in_g: Vec<Vector>,
}

/// The centralizer of a semisimple element split into ideal summands.
#[derive(Clone, Debug)]
pub struct LeviSplit {
    /// `l = g^s`.
    pub l: LeviPart,
    /// Connected components of the derived algebra `[l, l]`.
    pub summands: Vec<LeviPart>,
    /// The center of `l`.
    pub toral: LeviPart,
    /// True when `l = center ⊕ ⊕ summands` is a direct sum.
    pub direct: bool,
}

fn part(alg: &LieSuperalgebra, vecs: Vec<Vector>, prefix: &str) -> Result<LeviPart> {
    let names = (0..vecs.len()).map(|i| format!("{prefix}{}", i + 1)).collect();
    Ok(LeviPart { alg: alg.subalgebra(&vecs, names)?, basis_in_g: vecs })
}

/// Splits `g^s` for a semisimple even `s`.
pub fn levi_split(alg: &LieSuperalgebra, s: &[Scalar]) -> Result<LeviSplit> {
    let n = alg.dim();
    let (c0, c1) = centralizer(alg, s)?;
    let lvecs: Vec<Vector> = c0.into_iter().chain(c1).collect();
    let k = lvecs.len();
    // Center: Σ c_i l_i with [Σ c_i l_i, l_j] = 0 for all j (separately per parity).
    let mut center = Vec::new();
    for par in [Parity::Even, Parity::Odd] {
        let idx: Vec<usize> = (0..k).filter(|&i| alg.parity_of(&lvecs[i]) == Some(par)).collect();
        if idx.is_empty() {
            continue;
        }
        let mut rows: Vec<Vector> = Vec::new();
        for lj in &lvecs {
            let imgs: Vec<Vector> = idx.iter().map(|&i| alg.bracket(&lvecs[i], lj)).collect();
            for r in 0..n {
                rows.push(imgs.iter().map(|v| v[r].clone()).collect());
            }
        }
        let m = Matrix::from_rows_with_cols(rows, idx.len());
        for c in m.nullspace() {
            let basis: Vec<Vector> = idx.iter().map(|&i| lvecs[i].clone()).collect();
            center.push(lin_comb(&c, &basis, n));
        }
    }
    let center = span_basis(&center, n);
    let mut brs = Vec::new();
    for a in &lvecs {
        for b in &lvecs {
            brs.push(alg.bracket(a, b));
        }
    }
    let derived = span_basis(&brs, n);
    let direct = intersection(&center, &derived, n).is_empty() && center.len() + derived.len() == k;
    let mut uf = UnionFind::<usize>::new(derived.len());
    for i in 0..derived.len() {
        for j in 0..derived.len() {
            if !is_zero_vec(&alg.bracket(&derived[i], &derived[j])) {
                uf.union(i, j);
            }
        }
    }
    let mut comps: BTreeMap<usize, Vec<Vector>> = BTreeMap::new();
    for (i, v) in derived.iter().enumerate() {
        comps.entry(uf.find(i)).or_default().push(v.clone());
    }
    let mut summands = Vec::new();
    for (ci, vecs) in comps.into_values().enumerate() {
        // Order each summand even-first for a clean subalgebra basis.
        let mut sorted: Vec<Vector> = vecs.iter().filter(|v| alg.parity_of(v) == Some(Parity::Even)).cloned().collect();
        sorted.extend(vecs.iter().filter(|v| alg.parity_of(v) == Some(Parity::Odd)).cloned());
        summands.push(part(alg, sorted, &format!("l{}_", ci + 1))?);
    }
    let mut lsorted: Vec<Vector> = lvecs.iter().filter(|v| alg.parity_of(v) == Some(Parity::Even)).cloned().collect();
    lsorted.extend(lvecs.iter().filter(|v| alg.parity_of(v) == Some(Parity::Odd)).cloned());
    Ok(LeviSplit { l: part(alg, lsorted, "l")?, summands, toral: part(alg, center, "z")?, direct })
}

/// `(dim g_0̄ − dim g^x_0̄, dim g_1̄ − dim g^x_1̄)`.
pub fn d_counters(alg: &LieSuperalgebra, x: &[Scalar]) -> Result<(usize, usize)> {
    let (c0, c1) = centralizer(alg, x)?;
    let (d0, d1) = alg.dims();
    Ok((d0 - c0.len(), d1 - c1.len()))
}

/// Per-summand data for an element `x = s + n` with Jordan parts `s`, `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviCounters {
    /// `(d_0, d_1)` of each summand for its component of `n`.
    pub summand_d: Vec<(usize, usize)>,
    /// `(dim g − dim l)` per parity.
    pub nilradical_twice: (usize, usize),
    /// `d(x)` assembled from the Levi data.
    pub via_levi: (usize, usize),
    /// `d(x)` computed directly from `g^x`.
    pub direct: (usize, usize),
}

/// Computes the d-counters of `x = s + n` along both paths.
pub fn levi_counters(alg: &LieSuperalgebra, split: &LeviSplit, n_elem: &[Scalar], x: &[Scalar]) -> Result<LeviCounters> {
    let n = alg.dim();
    let mut family: Vec<Vector> = split.toral.basis_in_g.clone();
    let mut ranges = Vec::new();
    for s in &split.summands {
        let start = family.len();
        family.extend(s.basis_in_g.iter().cloned());
        ranges.push(start..family.len());
    }
    let coord = Coordinatizer::new(family, n)?;
    let c = coord.coords(n_elem).ok_or_else(|| Error::Invalid("nilpotent part outside g^s".into()))?;
    let mut summand_d = Vec::new();
    for (s, range) in split.summands.iter().zip(ranges) {
        let local: Vector = c[range].to_vec();
        summand_d.push(d_counters(&s.alg, &local)?);
    }
    let (g0, g1) = alg.dims();
    let (l0, l1) = split.l.alg.dims();
    let nil = (g0 - l0, g1 - l1);
    let sum0: usize = summand_d.iter().map(|d| d.0).sum();
    let sum1: usize = summand_d.iter().map(|d| d.1).sum();
    Ok(LeviCounters {
        summand_d,
        nilradical_twice: nil,
        via_levi: (nil.0 + sum0, nil.1 + sum1),
        direct: d_counters(alg, x)?,
    })
}

/// Returns the unique `k` with `v = k·w`, if `v` is a multiple of the non-zero `w`.
pub fn proportionality(v: &[Scalar], w: &[Scalar]) -> Option<Scalar> {
    let i = w.iter().position(|c| !c.is_zero())?;
    let k = v[i].try_div(&w[i]).ok()?;
    if vec_scale(w, &k).iter().zip(v).all(|(a, b)| a == b) {
        Some(k)
    } else {
        None
    }
}

/// Integer value of a rational known to be integral.
pub fn rational_to_i64(r: &Rational) -> Option<i64> {
    if r.denom().is_one() {
        r.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_data::{build_d21a, build_gl, build_osp12n, build_sl, element};
    use crate::scalar::rat;

    fn osp_regular() -> (LieSuperalgebra, Vector) {
        let g = build_osp12n(1).unwrap();
        // The even raising operator of the symplectic block: e_2 ↦ e_1 on odd coordinates.
        let mut m = Matrix::zeros(3, 3);
        m.set(1, 2, Scalar::one());
        let e = g.element_from_matrix(&m).unwrap();
        (g, e)
    }

    #[test]
    fn gl21_triple_is_standard() {
        let g = build_gl(2, 1).unwrap();
        let e = g.named("E12").unwrap();
        let t = complete_sl2(&g, &e).unwrap();
        assert_eq!(t.h, element(&g, &[("E11", Scalar::one()), ("E22", Scalar::int(-1))]).unwrap());
        assert_eq!(t.f, g.named("E21").unwrap());
    }

    #[test]
    fn zero_nilpotent_is_degenerate() {
        let g = build_gl(1, 1).unwrap();
        let t = complete_sl2(&g, &g.zero()).unwrap();
        assert!(t.degenerate);
        let fr = build_frame(&g, t, FrameOptions::default()).unwrap();
        assert!(fr.m_basis.is_empty());
        assert_eq!(fr.letters.len(), 4);
        assert!(fr.verify().all());
    }

    #[test]
    fn non_nilpotent_is_rejected() {
        let g = build_gl(2, 1).unwrap();
        assert_eq!(complete_sl2(&g, &g.named("E11").unwrap()), Err(Error::NotNilpotent));
    }

    #[test]
    fn osp12_regular_frame() {
        let (g, e) = osp_regular();
        let fr = NilpotentFrame::new(&g, &e, FrameOptions::default()).unwrap();
        for j in [-2, -1, 0, 1, 2] {
            let want = if j % 2 == 0 { (1, 0) } else { (0, 1) };
            assert_eq!(fr.grading.dims(j), want, "degree {j}");
        }
        let c = fr.counters;
        assert_eq!((c.s, c.r, c.d0, c.d1, c.l, c.q), (0, 1, 2, 1, 1, 1));
        assert_eq!(fr.m_basis.len(), 1);
        assert_eq!(fr.mprime_basis.len(), 2);
        assert!(fr.verify().all(), "{:?}", fr.verify());
        assert_eq!(fr.chi(&fr.triple.f), Scalar::one());
        let names: Vec<&str> = fr.letters.iter().map(|l| l.name.as_str()).collect();
        assert_eq!(names, vec!["x1", "x2", "y1", "v1"]);
        assert_eq!(fr.letters[0].weight, 2);
        assert_eq!(fr.letters[2].weight, 1);
    }

    #[test]
    fn gl21_frame() {
        let g = build_gl(2, 1).unwrap();
        let fr = NilpotentFrame::new(&g, &g.named("E12").unwrap(), FrameOptions::default()).unwrap();
        assert_eq!(fr.grading.dims(1), (0, 2));
        assert_eq!(fr.grading.dims(-1), (0, 2));
        assert_eq!(fr.grading.dims(0), (3, 0));
        let c = fr.counters;
        assert_eq!((c.r, c.l, c.q, c.d0, c.d1), (2, 3, 2, 2, 2));
        assert!(fr.verify().all(), "{:?}", fr.verify());
        assert_eq!(fr.c, Scalar::one());
    }

    #[test]
    fn restricted_roots_agree() {
        let g = build_gl(2, 1).unwrap();
        let fr = NilpotentFrame::new(&g, &g.named("E12").unwrap(), FrameOptions::default()).unwrap();
        let te = vec![
            element(&g, &[("E11", Scalar::one()), ("E22", Scalar::one())]).unwrap(),
            g.named("E33").unwrap(),
        ];
        let rr = restricted_roots(&fr, &te).unwrap();
        assert!(rr.weight_sets_agree());
        let none = restricted_roots(&fr, &[]).unwrap();
        assert_eq!(none.on_g.len(), 1);
    }

    #[test]
    fn jordan_of_mixed_element() {
        let g = build_gl(2, 1).unwrap();
        let x = element(&g, &[("E11", Scalar::one()), ("E22", Scalar::one()), ("E12", Scalar::one())]).unwrap();
        let (s, n) = jordan_decompose(&g, &x).unwrap();
        assert_eq!(s, element(&g, &[("E11", Scalar::one()), ("E22", Scalar::one())]).unwrap());
        assert_eq!(n, g.named("E12").unwrap());
        assert!(is_zero_vec(&g.bracket(&s, &n)));
        let (s0, n0) = jordan_decompose(&g, &g.named("E12").unwrap()).unwrap();
        assert!(is_zero_vec(&s0));
        assert_eq!(n0, g.named("E12").unwrap());
    }

    #[test]
    fn adjoint_jordan_matches_the_matrix_path() {
        let g = build_sl(2, 1).unwrap();
        let x = element(&g, &[("h1", rat(2, 1).into()), ("h2", Scalar::one()), ("E12", Scalar::one())])
            .unwrap();
        assert_eq!(jordan_via_adjoint(&g, &x).unwrap(), jordan_decompose(&g, &x).unwrap());
        let d = build_d21a(&rat(2, 1)).unwrap();
        let i = (0..d.dim()).find(|&i| d.basis()[i].name.starts_with('e') && d.parity(i) == Parity::Even).unwrap();
        let e = d.basis_vec(i);
        let (s0, n0) = jordan_decompose(&d, &e).unwrap();
        assert!(is_zero_vec(&s0));
        assert_eq!(n0, e);
        let h = d.named("H1").unwrap();
        assert_eq!(jordan_decompose(&d, &h).unwrap(), (h.clone(), d.zero()));
    }

    #[test]
    fn levi_split_of_gl21() {
        let g = build_gl(2, 1).unwrap();
        let s = g.named("E33").unwrap();
        let sp = levi_split(&g, &s).unwrap();
        assert_eq!(sp.l.alg.dims(), (5, 0));
        assert_eq!(sp.toral.alg.dims(), (2, 0));
        assert_eq!(sp.summands.len(), 1);
        assert_eq!(sp.summands[0].alg.dims(), (3, 0));
        assert!(sp.direct);
        let zero = levi_split(&g, &g.zero()).unwrap();
        assert_eq!(zero.l.alg.dim(), 9);
    }

    #[test]
    fn two_path_counters_agree() {
        let g = build_gl(2, 1).unwrap();
        let x = element(&g, &[("E11", Scalar::one()), ("E22", Scalar::one()), ("E12", Scalar::one())]).unwrap();
        let (s, n) = jordan_decompose(&g, &x).unwrap();
        let sp = levi_split(&g, &s).unwrap();
        let lc = levi_counters(&g, &sp, &n, &x).unwrap();
        assert_eq!(lc.direct, (2, 4));
        assert_eq!(lc.via_levi, lc.direct);
    }
}
