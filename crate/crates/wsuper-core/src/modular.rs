//! Reduction modulo `p`: restricted structure, p-centers, reduced enveloping
//! algebras, baby Verma modules, Whittaker vectors and the transition-algebra
//! tensor decomposition.
//!
//! Everything here works over `F_p` itself.  The `p`-map `x ↦ x^{[p]}` is
//! taken from the matrix realization when there is one (`X^p`), and otherwise
//! from the linear equation `ad z = (ad x)^p`.

use crate::algebra_data::{AlgebraKind, LieSuperalgebra, Parity};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{vec_add, vec_sub, Matrix, SparseEchelon, Vector};
use crate::nilpotent_frame::{
    DynkinGrading, GradedPiece, Letter, LetterRole, NilpotentFrame, Sl2Triple,
};
use crate::pbw_engine::{q_sub, InducedModel, Mono, QElem};
use crate::scalar::{is_prime, Scalar};
use crate::walgebra::{invariants_up_to, qchi_model, WAlgebra};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};

/// Which admissibility conditions a prime satisfies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    /// The prime.
    pub p: u64,
    /// `p` is an odd prime.
    pub odd_prime: bool,
    /// No structure constant or form entry has a denominator divisible by `p`.
    pub constants_reduce: bool,
    /// The Gram determinant is a unit mod `p`.
    pub gram_invertible: bool,
    /// `p` is not a bad prime for the root data of the algebra.
    pub good_prime: bool,
    /// `p` exceeds the largest Kazhdan degree involved (when supplied).
    pub above_degrees: Option<bool>,
}

impl Admissibility {
    /// True if every applicable condition holds.
    pub fn ok(&self) -> bool {
        self.odd_prime && self.constants_reduce && self.gram_invertible && self.good_prime && self.above_degrees != Some(false)
    }

    /// The first failing condition, if any.
    pub fn failure(&self) -> Option<&'static str> {
        if !self.odd_prime {
            Some("not an odd prime")
        } else if !self.constants_reduce {
            Some("a structure constant has a denominator divisible by p")
        } else if !self.gram_invertible {
            Some("the Gram determinant vanishes mod p")
        } else if !self.good_prime {
            Some("bad prime for the root system")
        } else if self.above_degrees == Some(false) {
            Some("p does not exceed the Kazhdan degrees involved")
        } else {
            None
        }
    }
}

fn bad_primes(kind: &AlgebraKind) -> Vec<u64> {
    match kind {
        AlgebraKind::Gl { .. } | AlgebraKind::Sl { .. } | AlgebraKind::Toral(_) => vec![],
        AlgebraKind::Osp { .. } => vec![2],
        AlgebraKind::D21a { a } => {
            // p must also keep a and 1 + a invertible.
            let mut v = vec![2];
            for r in [a.clone(), a + num_rational::BigRational::one()] {
                for n in [r.numer().clone(), r.denom().clone()] {
                    let mut n = n.magnitude().clone();
                    let mut d = 2u64;
                    while n > num_bigint::BigUint::one() && d < 10_000 {
                        while (&n % d).is_zero() {
                            if !v.contains(&d) {
                                v.push(d);
                            }
                            n /= d;
                        }
                        d += 1;
                    }
                }
            }
            v
        }
        AlgebraKind::DirectSum(parts) => parts.iter().flat_map(bad_primes).collect(),
        AlgebraKind::Sub(_) | AlgebraKind::Table(_) => vec![2],
    }
}

/// Evaluates the admissibility conditions for `p`.
pub fn admissibility(alg: &LieSuperalgebra, p: u64, max_kdeg: Option<i64>) -> Admissibility {
    let odd_prime = p > 2 && is_prime(p);
    let reduced = if odd_prime { alg.reduce_mod(p).ok() } else { None };
    let constants_reduce = reduced.is_some();
    let gram_invertible = match (alg.gram(), &reduced) {
        (Some(_), Some(r)) => r.gram().is_some_and(|g| !g.det().is_zero()),
        (None, Some(_)) => true,
        _ => false,
    };
    Admissibility {
        p,
        odd_prime,
        constants_reduce,
        gram_invertible,
        good_prime: !bad_primes(&alg.kind).contains(&p),
        above_degrees: max_kdeg.map(|d| (p as i64) > d),
    }
}

/// A Lie superalgebra over `F_p` with its `p`-map.
#[derive(Clone, Debug)]
pub struct ModularAlgebra {
    /// The prime.
    pub p: u64,
    /// The reduced algebra.
    pub base: LieSuperalgebra,
    /// `b^{[p]}` for each even basis element (`None` for odd ones).
    pub pmap: Vec<Option<Vector>>,
    /// The admissibility report.
    pub admissibility: Admissibility,
}

/// Reduces an algebra modulo an admissible prime and computes its `p`-map.
pub fn reduce_mod_p(alg: &LieSuperalgebra, p: u64) -> Result<ModularAlgebra> {
    let adm = admissibility(alg, p, None);
    if let Some(reason) = adm.failure() {
        return Err(Error::Inadmissible { p, reason: reason.into() });
    }
    let base = alg.reduce_mod(p)?;
    let mut m = ModularAlgebra { p, base, pmap: Vec::new(), admissibility: adm };
    let pmap = (0..m.base.dim())
        .map(|i| {
            if m.base.parity(i).is_odd() {
                Ok(None)
            } else {
                m.pmap_of(&m.base.basis_vec(i)).map(Some)
            }
        })
        .collect::<Result<_>>()?;
    m.pmap = pmap;
    Ok(m)
}

fn ad_power(alg: &LieSuperalgebra, x: &[Scalar], p: u64) -> Matrix {
    alg.ad_matrix(x).pow(p)
}

impl ModularAlgebra {
    /// `x^{[p]}` for an even element, via the realization when available.
    pub fn pmap_of(&self, x: &[Scalar]) -> Result<Vector> {
        if self.base.parity_of(x) == Some(Parity::Odd) {
            return Err(Error::Invalid("the p-map is defined on even elements".into()));
        }
        if let Some(v) = self.pmap_matrix(x) {
            return Ok(v);
        }
        self.pmap_adjoint(x).map(|(v, _)| v)
    }

    /// `X^p` read back in the basis, when the realization contains it.
    pub fn pmap_matrix(&self, x: &[Scalar]) -> Option<Vector> {
        let m = self.base.matrix_of(x)?;
        self.base.element_from_matrix(&m.pow(self.p))
    }

    /// An even solution of `ad z = (ad x)^p` and the dimension of the even
    /// center (the ambiguity of the solution).
    pub fn pmap_adjoint(&self, x: &[Scalar]) -> Result<(Vector, usize)> {
        let alg = &self.base;
        let n = alg.dim();
        let evens = alg.indices_of_parity(Parity::Even);
        let target = ad_power(alg, x, self.p);
        let mut rows = Vec::with_capacity(n * n);
        let mut rhs = Vec::with_capacity(n * n);
        let ads: Vec<Matrix> = evens.iter().map(|&k| alg.ad_matrix(&alg.basis_vec(k))).collect();
        for r in 0..n {
            for c in 0..n {
                rows.push(ads.iter().map(|a| a.get(r, c).clone()).collect::<Vector>());
                rhs.push(target.get(r, c).clone());
            }
        }
        let sys = Matrix::from_rows_with_cols(rows, evens.len());
        let sol = sys.solve(&rhs).ok_or_else(|| Error::NoSolution("(ad x)^p is not inner".into()))?;
        let amb = evens.len() - sys.rank();
        let mut z = alg.zero();
        for (k, &i) in evens.iter().enumerate() {
            z[i] = sol[k].clone();
        }
        Ok((z, amb))
    }

    /// Compares the realization and adjoint paths on every even basis element:
    /// `(all agree modulo the center, all agree exactly)`.
    pub fn pmap_paths_agree(&self) -> Result<(bool, bool)> {
        let mut mod_center = true;
        let mut exact = true;
        for i in self.base.indices_of_parity(Parity::Even) {
            let x = self.base.basis_vec(i);
            let Some(a) = self.pmap_matrix(&x) else { continue };
            let (b, _) = self.pmap_adjoint(&x)?;
            let d = vec_sub(&a, &b);
            if !self.base.ad_matrix(&d).is_zero() {
                mod_center = false;
            }
            if d.iter().any(|c| !c.is_zero()) {
                exact = false;
            }
        }
        Ok((mod_center, exact))
    }

    /// Checks the axioms of a restricted structure: homogeneity on the given
    /// scalars, `[x^{[p]}, y] = (ad x)^p y` on basis pairs, and Jacobson's
    /// formula on pairs of even basis elements.
    pub fn restrictedness(&self, scalars: &[i64]) -> Result<RestrictednessReport> {
        let alg = &self.base;
        let p = self.p;
        let evens = alg.indices_of_parity(Parity::Even);
        let mut homogeneity = true;
        let mut ad_law = true;
        let mut jacobson = true;
        for &i in &evens {
            let x = alg.basis_vec(i);
            let xp = self.pmap_of(&x)?;
            for &s in scalars {
                let l = Scalar::fp(s, p);
                let lx: Vector = x.iter().map(|c| c * &l).collect();
                let lhs = self.pmap_of(&lx)?;
                let lp = l.pow(p as i64)?;
                let rhs: Vector = xp.iter().map(|c| c * &lp).collect();
                if lhs != rhs {
                    homogeneity = false;
                }
            }
            let adp = ad_power(alg, &x, p);
            let adxp = alg.ad_matrix(&xp);
            if adp != adxp {
                ad_law = false;
            }
            for &j in &evens {
                if j <= i {
                    continue;
                }
                let y = alg.basis_vec(j);
                let lhs = self.pmap_of(&vec_add(&x, &y))?;
                let mut rhs = vec_add(&xp, &self.pmap_of(&y)?);
                for s in jacobson_terms(alg, &x, &y, p)? {
                    rhs = vec_add(&rhs, &s);
                }
                if lhs != rhs {
                    jacobson = false;
                }
            }
        }
        Ok(RestrictednessReport { homogeneity, ad_law, jacobson })
    }
}

/// The terms `s_i(x, y)`, `1 ≤ i ≤ p − 1`, where `i·s_i` is the coefficient
/// of `λ^{i−1}` in `ad(λx + y)^{p−1}(x)`.
pub fn jacobson_terms(alg: &LieSuperalgebra, x: &[Scalar], y: &[Scalar], p: u64) -> Result<Vec<Vector>> {
    let n = alg.dim();
    let zero = || vec![Scalar::fp(0, p); n];
    let mut coeffs: Vec<Vector> = vec![x.to_vec()];
    for _ in 0..p - 1 {
        let mut next = vec![zero(); coeffs.len() + 1];
        for (k, v) in coeffs.iter().enumerate() {
            next[k] = vec_add(&next[k], &alg.bracket(y, v));
            next[k + 1] = vec_add(&next[k + 1], &alg.bracket(x, v));
        }
        coeffs = next;
    }
    (1..p as usize)
        .map(|i| {
            let inv = Scalar::fp(i as i64, p).inv()?;
            Ok(coeffs[i - 1].iter().map(|c| c * &inv).collect())
        })
        .collect()
}

/// Result of the restricted-structure checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictednessReport {
    /// `(λx)^{[p]} = λ^p x^{[p]}`.
    pub homogeneity: bool,
    /// `ad(x^{[p]}) = (ad x)^p`.
    pub ad_law: bool,
    /// `(x + y)^{[p]} = x^{[p]} + y^{[p]} + Σ s_i(x, y)`.
    pub jacobson: bool,
}

impl RestrictednessReport {
    /// True if every axiom holds.
    pub fn all(&self) -> bool {
        self.homogeneity && self.ad_law && self.jacobson
    }
}

/// A generator `x^p − x^{[p]}` of the `p`-center.
#[derive(Clone, Debug, PartialEq)]
pub struct PCenterElement {
    /// The even element `x`.
    pub x: Vector,
    /// `x^{[p]}`.
    pub xp: Vector,
    /// `x^p − x^{[p]}` in the PBW basis of `U(g)`.
    pub element: QElem,
}

/// Builds `x^p − x^{[p]}` in `U(g)` for an even element `x`.
pub fn p_center_element(malg: &ModularAlgebra, env: &InducedModel, x: &[Scalar]) -> Result<PCenterElement> {
    let xp = malg.pmap_of(x)?;
    let mut cur = env.unit();
    for _ in 0..malg.p {
        cur = env.act(x, &cur)?;
    }
    let lin = env.act(&xp, &env.unit())?;
    Ok(PCenterElement { x: x.to_vec(), xp, element: q_sub(&cur, &lin) })
}

impl PCenterElement {
    /// True if the element supercommutes with every basis element of `g`.
    pub fn is_central(&self, env: &InducedModel) -> Result<bool> {
        let alg = env.algebra();
        for i in 0..alg.dim() {
            let b = alg.basis_vec(i);
            let left = env.act(&b, &self.element)?;
            let right = env.mul(&self.element, &env.act(&b, &env.unit())?);
            if !q_sub(&left, &right).is_empty() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `(dim g_0̄, dim g_1̄)`: `dim U_ξ(g) = p^{dim g_0̄}·2^{dim g_1̄}`.
pub fn dim_reduced_env(alg: &LieSuperalgebra) -> (usize, usize) {
    alg.dims()
}

/// `p^a · 2^b` as an integer.
pub fn p2(p: u64, a: usize, b: usize) -> BigInt {
    BigInt::from(p).pow(a as u32) * BigInt::from(2u32).pow(b as u32)
}

/// `dim U_ξ(g)` as an integer.
pub fn reduced_env_dim(alg: &LieSuperalgebra, p: u64) -> BigInt {
    let (a, b) = dim_reduced_env(alg);
    p2(p, a, b)
}

/// The matrix size `δ = p^{d₀/2}·2^{⌊d₁/2⌋}` of `U_χ(g) ≅ Mat_δ(U_χ(g, e))`.
pub fn delta(frame: &NilpotentFrame, p: u64) -> Result<BigInt> {
    let c = frame.counters;
    if !c.d0.is_multiple_of(2) {
        return Err(Error::Invalid("d₀ is odd; the frame is inconsistent".into()));
    }
    Ok(p2(p, c.d0 / 2, c.d1 / 2))
}

/// `dim U_χ(g, e) = p^l·2^q`, times 2 when `dim g(−1)_1̄` is odd.
pub fn reduced_w_dim(frame: &NilpotentFrame, p: u64) -> BigInt {
    let c = frame.counters;
    p2(p, c.l, c.q + usize::from(c.r_odd()))
}

/// Checks `dim U_χ(g) = δ²·dim U_χ(g, e)`; returns both sides.
pub fn matrix_size_identity(frame: &NilpotentFrame, p: u64) -> Result<(BigInt, BigInt, bool)> {
    let lhs = reduced_env_dim(&frame.alg, p);
    let d = delta(frame, p)?;
    let rhs = &d * &d * reduced_w_dim(frame, p);
    let ok = lhs == rhs;
    Ok((lhs, rhs, ok))
}

/// The divisor `p^{d₀/2}·2^{⌈d₁/2⌉}` of every `U_χ(g)`-module dimension.
pub fn kw_modulus(frame: &NilpotentFrame, p: u64) -> BigInt {
    let c = frame.counters;
    p2(p, c.d0 / 2, c.d1.div_ceil(2))
}

/// Tests `dim` for divisibility by [`kw_modulus`].
pub fn kw_divisibility(dim: &BigInt, frame: &NilpotentFrame, p: u64) -> bool {
    (dim % kw_modulus(frame, p)).is_zero()
}

fn reduce_vec(v: &[Scalar], p: u64) -> Result<Vector> {
    v.iter().map(|c| c.to_fp(p)).collect()
}

fn reduce_vecs(vs: &[Vector], p: u64) -> Result<Vec<Vector>> {
    vs.iter().map(|v| reduce_vec(v, p)).collect()
}

fn reduce_letter(l: &Letter, p: u64) -> Result<Letter> {
    Ok(Letter { vec: reduce_vec(&l.vec, p)?, ..l.clone() })
}

/// Reduces every vector and constant of a rational frame modulo `p`.
pub fn reduce_frame(frame: &NilpotentFrame, p: u64) -> Result<NilpotentFrame> {
    let t = &frame.triple;
    Ok(NilpotentFrame {
        alg: frame.alg.reduce_mod(p)?,
        triple: Sl2Triple {
            e: reduce_vec(&t.e, p)?,
            h: reduce_vec(&t.h, p)?,
            f: reduce_vec(&t.f, p)?,
            degenerate: t.degenerate,
        },
        form_scale: frame.form_scale.to_fp(p)?,
        grading: DynkinGrading {
            pieces: frame
                .grading
                .pieces
                .iter()
                .map(|pc| {
                    Ok(GradedPiece { degree: pc.degree, even: reduce_vecs(&pc.even, p)?, odd: reduce_vecs(&pc.odd, p)? })
                })
                .collect::<Result<_>>()?,
        },
        u: reduce_vecs(&frame.u, p)?,
        v: reduce_vecs(&frame.v, p)?,
        c: frame.c.to_fp(p)?,
        m_basis: reduce_vecs(&frame.m_basis, p)?,
        mprime_basis: reduce_vecs(&frame.mprime_basis, p)?,
        p_basis: reduce_vecs(&frame.p_basis, p)?,
        letters: frame.letters.iter().map(|l| reduce_letter(l, p)).collect::<Result<_>>()?,
        m_letters: frame.m_letters.iter().map(|l| reduce_letter(l, p)).collect::<Result<_>>()?,
        counters: frame.counters,
    })
}

/// A finite-dimensional supermodule over `F_p` given by action matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteModule {
    /// The prime.
    pub p: u64,
    /// Parity of each basis vector.
    pub parities: Vec<Parity>,
    /// Names of the basis vectors.
    pub basis_names: Vec<String>,
    /// Action matrix of each basis element of `g` (columns are images).
    pub action: Vec<Matrix>,
    /// The `p`-character on the basis of `g`.
    pub xi: Vec<Scalar>,
}

impl FiniteModule {
    /// Total dimension.
    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    /// `(even, odd)` dimensions.
    pub fn dims(&self) -> (usize, usize) {
        let odd = self.parities.iter().filter(|p| p.is_odd()).count();
        (self.dim() - odd, odd)
    }

    /// Action matrix of an arbitrary element.
    pub fn action_of(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (c, a) in x.iter().zip(&self.action) {
            if !c.is_zero() {
                m = m.add(&a.scale(c));
            }
        }
        m
    }

    /// `ρ([x, y]) = ρ(x)ρ(y) − (−1)^{|x||y|}ρ(y)ρ(x)` on all basis pairs.
    pub fn respects_brackets(&self, alg: &LieSuperalgebra) -> bool {
        let n = alg.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let (a, b) = (&self.action[i], &self.action[j]);
                let sign = if alg.parity(i).is_odd() && alg.parity(j).is_odd() { Scalar::one() } else { Scalar::int(-1) };
                let lhs = a.mul(b).add(&b.mul(a).scale(&sign));
                let rhs = self.action_of(&alg.bracket(&alg.basis_vec(i), &alg.basis_vec(j)));
                lhs == rhs
            })
        })
    }

    /// `ρ(x)^p − ρ(x^{[p]}) = ξ(x)^p` for every even basis element.
    pub fn respects_p_character(&self, malg: &ModularAlgebra) -> Result<bool> {
        let n = self.dim();
        for i in malg.base.indices_of_parity(Parity::Even) {
            let xp = malg.pmap[i].as_ref().expect("even");
            let lhs = self.action[i].pow(malg.p).sub(&self.action_of(xp));
            let want = Matrix::identity(n).map(|c| c.to_fp(malg.p).expect("integer")).scale(&self.xi[i].pow(malg.p as i64)?);
            if lhs != want {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The module action matrices as rows of symmetric residues.
    pub fn export_matrices(&self) -> Vec<Vec<Vec<i64>>> {
        self.action
            .iter()
            .map(|m| (0..m.nrows()).map(|r| m.row(r).iter().map(|c| c.fp_symmetric().unwrap_or(0).rem_euclid(self.p as i64)).collect()).collect())
            .collect()
    }

    /// The cyclic submodule generated by `v`.
    pub fn cyclic_dim(&self, v: &[Scalar]) -> usize {
        let mut span = IncrementalSpan::default();
        let mut queue = vec![v.to_vec()];
        while let Some(w) = queue.pop() {
            if span.insert(&w) {
                for a in &self.action {
                    queue.push(a.mul_vec(&w));
                }
            }
        }
        span.rows.len()
    }

    /// Exhaustively checks that every non-zero homogeneous vector generates
    /// the whole module.  Returns the number of vectors tested.
    pub fn is_irreducible(&self, limit: u64) -> Result<(bool, u64)> {
        let p = self.p;
        let mut tested = 0u64;
        for par in [Parity::Even, Parity::Odd] {
            let idx: Vec<usize> = (0..self.dim()).filter(|&i| self.parities[i] == par).collect();
            let k = idx.len() as u32;
            if k == 0 {
                continue;
            }
            let count = (p.checked_pow(k).ok_or_else(|| Error::SearchTooLarge("irreducibility search".into()))? - 1) / (p - 1);
            if tested + count > limit {
                return Err(Error::SearchTooLarge(format!("{count} projective vectors exceed the limit {limit}")));
            }
            // Projective points: leading coordinate 1, earlier ones 0.
            for lead in 0..idx.len() {
                let free = idx.len() - lead - 1;
                for code in 0..p.pow(free as u32) {
                    let mut v = vec![Scalar::fp(0, p); self.dim()];
                    v[idx[lead]] = Scalar::fp(1, p);
                    let mut c = code;
                    for &t in &idx[lead + 1..] {
                        v[t] = Scalar::fp((c % p) as i64, p);
                        c /= p;
                    }
                    tested += 1;
                    if self.cyclic_dim(&v) != self.dim() {
                        return Ok((false, tested));
                    }
                }
            }
        }
        Ok((true, tested))
    }
}

#[derive(Default)]
struct IncrementalSpan {
    rows: Vec<(usize, Vector)>,
}

impl IncrementalSpan {
    fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut w = v.to_vec();
        for (piv, r) in &self.rows {
            if !w[*piv].is_zero() {
                let f = w[*piv].clone();
                w = w.iter().zip(r).map(|(a, b)| a - &(&f * b)).collect();
            }
        }
        match w.iter().position(|c| !c.is_zero()) {
            None => false,
            Some(piv) => {
                let inv = w[piv].inv().expect("non-zero");
                let w: Vector = w.iter().map(|c| c * &inv).collect();
                self.rows.push((piv, w));
                true
            }
        }
    }
}

/// Simultaneous kernel of `ρ(x) − χ(x)` over the basis of `m`.
pub fn whittaker_vectors(module: &FiniteModule, frame_p: &NilpotentFrame) -> Vec<Vector> {
    let n = module.dim();
    let mut rows = Vec::new();
    for l in &frame_p.m_letters {
        let chi = frame_p.chi(&l.vec);
        let id = Matrix::identity(n).map(|c| c.to_fp(module.p).expect("integer"));
        let m = module.action_of(&l.vec).sub(&id.scale(&chi));
        rows.extend(m.to_rows());
    }
    if rows.is_empty() {
        return (0..n).map(|i| crate::linalg::unit_vec(n, i).iter().map(|c| c.to_fp(module.p).expect("integer")).collect()).collect();
    }
    Matrix::from_rows_with_cols(rows, n).nullspace()
}

/// Builds the baby Verma module `U_χ(g) ⊗_{U_χ(b)} k_λ` for a rank-one frame
/// (`g(0)` one-dimensional), where `b = ⊕_{j≥0} g(j)` and `λ(h) = lambda`.
pub fn build_baby_verma(malg: &ModularAlgebra, frame_p: &NilpotentFrame, lambda: i64) -> Result<FiniteModule> {
    let p = malg.p;
    let alg = &malg.base;
    let g0 = frame_p.grading.piece(0).ok_or_else(|| Error::Unsupported("empty g(0)".into()))?;
    if g0.even.len() != 1 || !g0.odd.is_empty() || frame_p.triple.degenerate {
        return Err(Error::Unsupported("baby Verma modules are implemented for rank-one frames only".into()));
    }
    let h0 = &g0.even[0];
    let scale = crate::nilpotent_frame::proportionality(h0, &frame_p.triple.h)
        .ok_or_else(|| Error::Unsupported("g(0) is not spanned by h".into()))?;
    let lam = Scalar::fp(lambda, p);
    let mut letters = Vec::new();
    let mut sub = Vec::new();
    for pc in &frame_p.grading.pieces {
        for (i, v) in pc.even.iter().chain(&pc.odd).enumerate() {
            let odd = i >= pc.even.len();
            let name = format!("{}{}{}", if odd { "n" } else { "m" }, if pc.degree < 0 { "-" } else { "+" }, pc.degree.abs());
            if pc.degree < 0 {
                letters.push((format!("{name}_{i}"), v.clone(), pc.degree));
            } else {
                let val = if pc.degree == 0 { &scale * &lam } else { Scalar::fp(0, p) };
                sub.push((format!("{name}_{i}"), v.clone(), val));
            }
        }
    }
    let mut restriction = Vec::new();
    for (i, (_, v, _)) in letters.iter().enumerate() {
        if alg.parity_of(v) == Some(Parity::Even) {
            let xp = malg.pmap_of(v)?;
            let chi = frame_p.chi(v).pow(p as i64)?;
            restriction.push((i, xp, chi));
        }
    }
    let model = InducedModel::new(alg, letters, sub, Some((p, restriction)))?;
    let basis = model.restricted_basis()?;
    let index: HashMap<&Mono, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let n = basis.len();
    let mut action = Vec::new();
    for b in 0..alg.dim() {
        let x = alg.basis_vec(b);
        let mut m = Matrix::zeros(n, n).map(|_| Scalar::fp(0, p));
        for (j, mono) in basis.iter().enumerate() {
            for (mu, c) in model.act(&x, &model.mono_elem(mono))? {
                let r = *index.get(&mu).ok_or_else(|| Error::Invalid("action left the restricted basis".into()))?;
                m.set(r, j, c);
            }
        }
        action.push(m);
    }
    let xi = (0..alg.dim()).map(|i| frame_p.chi(&alg.basis_vec(i))).collect();
    Ok(FiniteModule {
        p,
        parities: basis.iter().map(|m| model.mono_parity(m)).collect(),
        basis_names: basis.iter().map(|m| model.format_mono(m)).collect(),
        action,
        xi,
    })
}

/// Per-degree counts of the transition-algebra check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorRow {
    /// Kazhdan degree.
    pub degree: i64,
    /// `dim gr_d` of the modular invariants.
    pub invariant_dim: usize,
    /// Products of `Θ̄`-monomials and `p`-center monomials in `a`-letters.
    pub family_a: usize,
    /// Products of restricted `Θ̄`-monomials and `p`-center monomials in all even letters.
    pub family_b: usize,
}

/// Result of the transition-algebra tensor check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorReport {
    /// The prime.
    pub p: u64,
    /// The degree cap.
    pub cap: i64,
    /// Per-degree counts.
    pub rows: Vec<TensorRow>,
    /// The reduced generators are `ad m`-invariant over `F_p`.
    pub generators_invariant: bool,
    /// Family A is linearly independent.
    pub family_a_independent: bool,
    /// Family B is linearly independent.
    pub family_b_independent: bool,
    /// Every product lies in the invariant space.
    pub families_invariant: bool,
    /// The top Kazhdan term of `x^p − x^{[p]}` is `x^p` for every even letter.
    pub top_term_law: bool,
    /// Number of `p`-center generators of degree `≤ D` used.
    pub witnessed: usize,
}

impl TensorReport {
    /// True if every check passed and the counts match the invariant dimensions.
    pub fn all(&self) -> bool {
        self.generators_invariant
            && self.family_a_independent
            && self.family_b_independent
            && self.families_invariant
            && self.top_term_law
            && self.rows.iter().all(|r| r.family_a == r.invariant_dim && r.family_b == r.invariant_dim)
    }
}

fn monomials_of_degrees(degs: &[i64], caps: &[Option<u32>], budget: i64) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for (k, &d) in degs.iter().enumerate() {
        let mut next = Vec::new();
        for m in &out {
            let used: i64 = m.iter().zip(degs).map(|(e, dd)| *e as i64 * dd).sum();
            let mut e = 0u32;
            while used + e as i64 * d <= budget && caps[k].is_none_or(|c| e <= c) {
                let mut m2 = m.clone();
                m2.push(e);
                next.push(m2);
                e += 1;
                if d == 0 {
                    break;
                }
            }
        }
        out = next;
    }
    out
}

/// Checks, through Kazhdan degree `D`, that the modular invariants decompose
/// as `Θ̄`-monomials tensored with the `p`-center generated by the letters
/// outside `g^e`, and that they are free over the full `p`-center with basis
/// the restricted `Θ̄`-monomials.
pub fn transition_tensor_check(w: &WAlgebra, p: u64, exec: Exec) -> Result<TensorReport> {
    let cap = w.cap();
    let frame = &w.frame;
    let malg = reduce_mod_p(&frame.alg, p)?;
    let frame_p = reduce_frame(frame, p)?;
    let model = qchi_model(&frame_p)?.with_exec(exec);
    // Reduced generators.
    let thetas: Vec<QElem> = w
        .gens
        .iter()
        .map(|g| g.theta.iter().map(|(m, c)| Ok((m.clone(), c.to_fp(p)?))).filter(|r| !matches!(r, Ok((_, c)) if c.is_zero())).collect())
        .collect::<Result<_>>()?;
    let mut generators_invariant = true;
    for t in &thetas {
        for x in &frame_p.m_letters {
            if !model.ad_action(&x.vec, t)?.is_empty() {
                generators_invariant = false;
            }
        }
    }
    // p-center elements z_x ⊗ 1 for every even letter.
    let even_letters: Vec<usize> = (0..frame_p.letters.len()).filter(|&i| !frame_p.letters[i].parity.is_odd()).collect();
    let mut zvals: BTreeMap<usize, QElem> = BTreeMap::new();
    let mut top_term_law = true;
    for &i in &even_letters {
        let x = &frame_p.letters[i].vec;
        let mut cur = model.unit();
        for _ in 0..p {
            cur = model.act_letter(i, &cur);
        }
        let xp = malg.pmap_of(x)?;
        let z = q_sub(&cur, &model.act(&xp, &model.unit())?);
        let top = model.top_degree(&z).unwrap_or(i64::MIN);
        let mut want_mono = vec![0u32; model.nletters()];
        want_mono[i] = p as u32;
        if model.degree_part(&z, top) != model.mono_elem(&want_mono) {
            top_term_law = false;
        }
        zvals.insert(i, z);
    }
    let a_letters: Vec<usize> =
        even_letters.iter().copied().filter(|&i| frame_p.letters[i].role != LetterRole::CentralizerEven).collect();
    let min_a = a_letters.iter().map(|&i| p as i64 * frame_p.letters[i].kdeg()).min();
    if let Some(need) = min_a {
        if need > cap {
            return Err(Error::DegreeCap { needed: need, given: cap });
        }
    }
    let space = invariants_up_to(&frame_p, &model, cap)?;
    let space_ech = {
        let mut e = SparseEchelon::new();
        for (t, b) in space.basis.iter().enumerate() {
            e.insert(b.clone(), t);
        }
        e
    };
    let gdeg: Vec<i64> = w.gens.iter().map(|g| g.kdeg()).collect();
    let gcap: Vec<Option<u32>> = w.gens.iter().map(|g| if g.parity.is_odd() { Some(1) } else { None }).collect();
    let gcap_restricted: Vec<Option<u32>> =
        w.gens.iter().map(|g| if g.parity.is_odd() { Some(1) } else { Some(p as u32 - 1) }).collect();
    // Θ̄-monomial values with memoization.
    let mut theta_memo: HashMap<Vec<u32>, QElem> = HashMap::new();
    let mut theta_val = |a: &[u32]| -> QElem {
        fn go(a: &[u32], thetas: &[QElem], model: &InducedModel, memo: &mut HashMap<Vec<u32>, QElem>) -> QElem {
            if let Some(v) = memo.get(a) {
                return v.clone();
            }
            let v = match a.iter().position(|&e| e > 0) {
                None => model.unit(),
                Some(i) => {
                    let mut rest = a.to_vec();
                    rest[i] -= 1;
                    let r = go(&rest, thetas, model, memo);
                    model.mul(&thetas[i], &r)
                }
            };
            memo.insert(a.to_vec(), v.clone());
            v
        }
        go(a, &thetas, &model, &mut theta_memo)
    };
    let apply_z = |zl: &[usize], exps: &[u32], q: &QElem| -> Result<QElem> {
        let mut cur = q.clone();
        for (k, &e) in exps.iter().enumerate() {
            let i = zl[k];
            let xp = malg.pmap_of(&frame_p.letters[i].vec)?;
            for _ in 0..e {
                let mut pw = cur.clone();
                for _ in 0..p {
                    pw = model.act_letter(i, &pw);
                }
                cur = q_sub(&pw, &model.act(&xp, &cur)?);
            }
        }
        Ok(cur)
    };
    let mut family = |zl: &[usize], caps: &[Option<u32>]| -> Result<(BTreeMap<i64, usize>, bool, bool)> {
        let zdeg: Vec<i64> = zl.iter().map(|&i| p as i64 * frame_p.letters[i].kdeg()).collect();
        let zmonos = monomials_of_degrees(&zdeg, &vec![None; zl.len()], cap);
        let tmonos = monomials_of_degrees(&gdeg, caps, cap);
        let mut counts: BTreeMap<i64, usize> = (0..=cap).map(|d| (d, 0)).collect();
        let mut ech = SparseEchelon::new();
        let mut independent = true;
        let mut inside = true;
        let mut tag = 0;
        for zm in &zmonos {
            let zd: i64 = zm.iter().zip(&zdeg).map(|(e, d)| *e as i64 * d).sum();
            for tm in &tmonos {
                let td: i64 = tm.iter().zip(&gdeg).map(|(e, d)| *e as i64 * d).sum();
                if zd + td > cap {
                    continue;
                }
                let v = apply_z(zl, zm, &theta_val(tm))?;
                *counts.entry(zd + td).or_default() += 1;
                if !space_ech.contains(&v) {
                    inside = false;
                }
                if ech.insert(v, tag).is_some() {
                    independent = false;
                }
                tag += 1;
            }
        }
        Ok((counts, independent, inside))
    };
    let (ca, ind_a, in_a) = family(&a_letters, &gcap)?;
    let (cb, ind_b, in_b) = family(&even_letters, &gcap_restricted)?;
    let dims = space.graded_dims();
    let rows = (0..=cap)
        .map(|d| TensorRow {
            degree: d,
            invariant_dim: dims.get(&d).copied().unwrap_or(0),
            family_a: ca.get(&d).copied().unwrap_or(0),
            family_b: cb.get(&d).copied().unwrap_or(0),
        })
        .collect();
    let witnessed = a_letters.iter().filter(|&&i| p as i64 * frame_p.letters[i].kdeg() <= cap).count();
    Ok(TensorReport {
        p,
        cap,
        rows,
        generators_invariant,
        family_a_independent: ind_a,
        family_b_independent: ind_b,
        families_invariant: in_a && in_b,
        top_term_law,
        witnessed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_data::{build_gl, build_osp12n, element, osp12_regular_nilpotent};
    use crate::nilpotent_frame::FrameOptions;

    fn osp_frame() -> NilpotentFrame {
        let g = build_osp12n(1).unwrap();
        let e = osp12_regular_nilpotent(&g).unwrap();
        NilpotentFrame::new(&g, &e, FrameOptions::default()).unwrap()
    }

    #[test]
    fn nilpotent_p_power_vanishes() {
        let g = build_osp12n(1).unwrap();
        let m = reduce_mod_p(&g, 5).unwrap();
        let e = reduce_vec(&osp12_regular_nilpotent(&g).unwrap(), 5).unwrap();
        assert!(m.pmap_of(&e).unwrap().iter().all(Scalar::is_zero));
        assert!(m.restrictedness(&[2, 3]).unwrap().all());
    }

    #[test]
    fn diagonal_toral_element_is_fixed() {
        let g = build_gl(1, 1).unwrap();
        let m = reduce_mod_p(&g, 7).unwrap();
        let i = g.index_of("E11").unwrap();
        assert_eq!(m.pmap[i].as_ref().unwrap(), &m.base.basis_vec(i));
    }

    #[test]
    fn gl21_paths_agree() {
        let g = build_gl(2, 1).unwrap();
        let m = reduce_mod_p(&g, 5).unwrap();
        let (mod_center, _) = m.pmap_paths_agree().unwrap();
        assert!(mod_center);
        assert!(m.restrictedness(&[2]).unwrap().all());
    }

    #[test]
    fn inadmissible_primes_are_rejected() {
        let g = build_osp12n(1).unwrap();
        assert!(matches!(reduce_mod_p(&g, 2), Err(Error::Inadmissible { .. })));
        assert!(matches!(reduce_mod_p(&g, 9), Err(Error::Inadmissible { .. })));
        let adm = admissibility(&g, 3, Some(4));
        assert_eq!(adm.above_degrees, Some(false));
    }

    #[test]
    fn osp_dimension_identities() {
        let f = osp_frame();
        assert_eq!(dim_reduced_env(&f.alg), (3, 2));
        assert_eq!(delta(&f, 5).unwrap(), BigInt::from(5));
        assert_eq!(reduced_w_dim(&f, 5), BigInt::from(20));
        let (l, r, ok) = matrix_size_identity(&f, 5).unwrap();
        assert!(ok);
        assert_eq!(l, BigInt::from(500));
        assert_eq!(r, BigInt::from(500));
        assert!(kw_divisibility(&BigInt::from(10), &f, 5));
        assert!(!kw_divisibility(&BigInt::from(1), &f, 5));
    }

    #[test]
    fn osp_baby_verma() {
        let f = osp_frame();
        let m = reduce_mod_p(&f.alg, 5).unwrap();
        let fp = reduce_frame(&f, 5).unwrap();
        let z = build_baby_verma(&m, &fp, 1).unwrap();
        assert_eq!(z.dim(), 10);
        assert_eq!(z.dims(), (5, 5));
        assert!(z.respects_brackets(&m.base));
        assert!(z.respects_p_character(&m).unwrap());
        assert_eq!(whittaker_vectors(&z, &fp).len(), 2);
        let (irr, tested) = z.is_irreducible(10_000).unwrap();
        assert!(irr);
        assert_eq!(tested, 2 * 781);
    }

    #[test]
    fn p_center_is_central() {
        let g = build_osp12n(1).unwrap();
        let m = reduce_mod_p(&g, 3).unwrap();
        let env = InducedModel::enveloping(&m.base).unwrap();
        for i in m.base.indices_of_parity(Parity::Even) {
            let z = p_center_element(&m, &env, &m.base.basis_vec(i)).unwrap();
            assert!(z.is_central(&env).unwrap());
        }
    }

    #[test]
    fn osp_transition_tensor() {
        let w = WAlgebra::compute(&osp_frame(), 8, Exec::default()).unwrap();
        let rep = transition_tensor_check(&w, 3, Exec::default()).unwrap();
        assert!(rep.all(), "{rep:?}");
        assert!(rep.witnessed >= 1);
    }

    #[test]
    fn gl21_element_helper() {
        let g = build_gl(2, 1).unwrap();
        assert!(element(&g, &[("E12", Scalar::one())]).is_ok());
    }
}
