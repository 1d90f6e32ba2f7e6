//! Exact PBW arithmetic in induced modules.
//!
//! An [`InducedModel`] realizes `U(g) ⊗_{U(s)} k_λ` for a subalgebra `s`
//! with a character `λ`, on the PBW basis of ordered monomials in a fixed
//! alphabet spanning a complement of `s`.  Three instances matter here:
//!
//! * `s = 0`: the enveloping algebra `U(g)` itself (PBW normal forms);
//! * `s = m`, `λ = χ`: the generalized Gelfand–Graev module `Q_χ`, whose
//!   elements are ordered monomials `x^a y^b u^c v^d ⊗ 1_χ`;
//! * `s` a Borel subalgebra with an optional restricted quotient: baby
//!   Verma modules over `F_p`.
//!
//! Left multiplication by a basis element is computed by straightening with
//! supercommutators (`zw = (−1)^{|z||w|} wz + [z, w]`), odd squares are
//! rewritten as `z² = ½[z, z]`, elements of `s` arriving at the right end are
//! replaced by their character value, and in restricted models `x^p` is
//! replaced by `x^{[p]} + ξ(x)^p`.  Results are memoized per
//! `(letter, monomial)`.

use crate::algebra_data::{LieSuperalgebra, Parity};
use crate::error::{Error, Result};
use crate::exec::{par_map, Exec};
use crate::linalg::{sparse_axpy, Coordinatizer, SparseVec, Vector};
use crate::scalar::Scalar;
use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

/// Exponent vector over the alphabet (odd exponents are 0 or 1).
pub type Mono = Vec<u32>;

/// A sparse element of the model: monomial → coefficient.
pub type QElem = SparseVec<Mono>;

/// One PBW letter of the alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphabetLetter {
    /// Display name.
    pub name: String,
    /// ℤ₂-degree.
    pub parity: Parity,
    /// `ad h`-weight (Kazhdan degree is `weight + 2`).
    pub weight: i64,
}

/// Data of a restricted quotient: `x^p = x^{[p]} + ξ(x)^p` on even letters.
#[derive(Clone, Debug)]
pub struct Restriction {
    /// The characteristic.
    pub p: u64,
    /// For each letter: `(x^{[p]} in g-coordinates, ξ(x)^p)` (even letters only).
    pub pth: Vec<Option<(Vector, Scalar)>>,
}

type Cache = RwLock<HashMap<(usize, Mono), QElem>>;

/// `U(g) ⊗_{U(s)} k_λ` on an ordered PBW alphabet.
#[derive(Debug)]
pub struct InducedModel {
    alg: LieSuperalgebra,
    letters: Vec<AlphabetLetter>,
    sub_names: Vec<String>,
    sub_parity: Vec<Parity>,
    sub_values: Vec<Scalar>,
    coord: Coordinatizer,
    brackets: Vec<Vec<SparseVec<usize>>>,
    pth: Vec<Option<(SparseVec<usize>, Scalar)>>,
    p: Option<u64>,
    exec: Exec,
    cache: Cache,
}

fn to_sparse(v: &[Scalar]) -> SparseVec<usize> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

/// Adds `c·x` to `acc`.
pub fn q_axpy(acc: &mut QElem, c: &Scalar, x: &QElem) {
    sparse_axpy(acc, c, x);
}

/// `a + b`.
pub fn q_add(a: &QElem, b: &QElem) -> QElem {
    let mut r = a.clone();
    sparse_axpy(&mut r, &Scalar::one(), b);
    r
}

/// `a − b`.
pub fn q_sub(a: &QElem, b: &QElem) -> QElem {
    let mut r = a.clone();
    sparse_axpy(&mut r, &Scalar::int(-1), b);
    r
}

/// `c·a`.
pub fn q_scale(a: &QElem, c: &Scalar) -> QElem {
    let mut r = QElem::new();
    sparse_axpy(&mut r, c, a);
    r
}

impl InducedModel {
    /// Builds a model from an alphabet `(name, vector, weight)`, a
    /// subalgebra basis `(name, vector, character value)` and an optional
    /// restriction `(p, [(letter index, x^{[p]}, ξ(x)^p)])`.
    pub fn new(
        alg: &LieSuperalgebra,
        letters: Vec<(String, Vector, i64)>,
        sub: Vec<(String, Vector, Scalar)>,
        restriction: Option<(u64, Vec<(usize, Vector, Scalar)>)>,
    ) -> Result<InducedModel> {
        let n = alg.dim();
        if letters.len() + sub.len() != n {
            return Err(Error::Dimension(format!(
                "alphabet ({}) plus subalgebra ({}) must have dimension {n}",
                letters.len(),
                sub.len()
            )));
        }
        let mut vecs = Vec::with_capacity(n);
        let mut alphabet = Vec::new();
        for (name, v, w) in &letters {
            let parity = alg.parity_of(v).ok_or_else(|| Error::Invalid(format!("letter {name} is not homogeneous")))?;
            alphabet.push(AlphabetLetter { name: name.clone(), parity, weight: *w });
            vecs.push(v.clone());
        }
        let mut sub_names = Vec::new();
        let mut sub_parity = Vec::new();
        let mut sub_values = Vec::new();
        for (name, v, val) in &sub {
            let parity = alg.parity_of(v).ok_or_else(|| Error::Invalid(format!("letter {name} is not homogeneous")))?;
            if parity.is_odd() && !val.is_zero() {
                return Err(Error::Invalid(format!("character is non-zero on the odd element {name}")));
            }
            sub_names.push(name.clone());
            sub_parity.push(parity);
            sub_values.push(val.clone());
            vecs.push(v.clone());
        }
        let coord = Coordinatizer::new(vecs.clone(), n)
            .map_err(|_| Error::Degenerate("alphabet and subalgebra do not form a basis".into()))?;
        let nl = letters.len();
        let mut brackets = vec![vec![SparseVec::new(); n]; n];
        for a in 0..n {
            for b in 0..n {
                let br = alg.bracket(&vecs[a], &vecs[b]);
                let c = coord.coords(&br).expect("basis");
                brackets[a][b] = to_sparse(&c);
            }
        }
        // The subalgebra must be closed and the character must vanish on brackets.
        for a in nl..n {
            for b in nl..n {
                let br = &brackets[a][b];
                if br.keys().any(|&k| k < nl) {
                    return Err(Error::Invalid("the induced-from subspace is not a subalgebra".into()));
                }
                let val = br.iter().fold(Scalar::zero(), |acc, (k, c)| &acc + &(c * &sub_values[k - nl]));
                if !val.is_zero() {
                    return Err(Error::Invalid("the character does not vanish on brackets".into()));
                }
            }
        }
        let mut pth = vec![None; nl];
        let mut p = None;
        if let Some((pp, list)) = restriction {
            p = Some(pp);
            for (i, v, xi) in list {
                if i >= nl || alphabet[i].parity.is_odd() {
                    return Err(Error::Invalid("restriction data must refer to even letters".into()));
                }
                let c = coord.coords(&v).ok_or_else(|| Error::Invalid("p-th power outside g".into()))?;
                pth[i] = Some((to_sparse(&c), xi));
            }
        }
        Ok(InducedModel {
            alg: alg.clone(),
            letters: alphabet,
            sub_names,
            sub_parity,
            sub_values,
            coord,
            brackets,
            pth,
            p,
            exec: Exec::default(),
            cache: RwLock::new(HashMap::new()),
        })
    }

    /// The enveloping algebra `U(g)` on the basis of `g` (all weights 0).
    pub fn enveloping(alg: &LieSuperalgebra) -> Result<InducedModel> {
        let letters = alg.basis().iter().enumerate().map(|(i, b)| (b.name.clone(), alg.basis_vec(i), 0)).collect();
        InducedModel::new(alg, letters, Vec::new(), None)
    }

    /// Sets the execution policy for batch operations.
    pub fn with_exec(mut self, exec: Exec) -> InducedModel {
        self.exec = exec;
        self
    }

    /// The execution policy.
    pub fn exec(&self) -> Exec {
        self.exec
    }

    /// The ambient algebra.
    pub fn algebra(&self) -> &LieSuperalgebra {
        &self.alg
    }

    /// The alphabet.
    pub fn letters(&self) -> &[AlphabetLetter] {
        &self.letters
    }

    /// Number of letters.
    pub fn nletters(&self) -> usize {
        self.letters.len()
    }

    /// Names of the subalgebra basis.
    pub fn sub_names(&self) -> &[String] {
        &self.sub_names
    }

    /// The restriction prime, if any.
    pub fn restriction_prime(&self) -> Option<u64> {
        self.p
    }

    /// The cyclic vector `1 ⊗ 1`.
    pub fn unit(&self) -> QElem {
        let mut q = QElem::new();
        q.insert(vec![0; self.nletters()], Scalar::one());
        q
    }

    /// The monomial consisting of a single letter.
    pub fn letter_mono(&self, i: usize) -> Mono {
        let mut m = vec![0; self.nletters()];
        m[i] = 1;
        m
    }

    /// The element `mono ⊗ 1`.
    pub fn mono_elem(&self, m: &Mono) -> QElem {
        let mut q = QElem::new();
        q.insert(m.clone(), Scalar::one());
        q
    }

    /// Coordinates of `x ∈ g` in the adapted basis (letters, then subalgebra).
    pub fn adapted_coords(&self, x: &[Scalar]) -> Result<SparseVec<usize>> {
        self.coord.coords(x).map(|c| to_sparse(&c)).ok_or_else(|| Error::Invalid("element outside g".into()))
    }

    /// ℤ₂-degree of a monomial.
    pub fn mono_parity(&self, m: &Mono) -> Parity {
        let odd: u32 = m.iter().zip(&self.letters).filter(|(_, l)| l.parity.is_odd()).map(|(e, _)| *e).sum();
        Parity::from_bit((odd % 2) as u8)
    }

    /// ℤ₂-degree of an element (`None` if inhomogeneous; `Even` for zero).
    pub fn elem_parity(&self, q: &QElem) -> Option<Parity> {
        let mut par = None;
        for m in q.keys() {
            let p = self.mono_parity(m);
            if par.is_some_and(|x| x != p) {
                return None;
            }
            par = Some(p);
        }
        Some(par.unwrap_or(Parity::Even))
    }

    /// Splits an element into its even and odd parts.
    pub fn split_parity(&self, q: &QElem) -> (QElem, QElem) {
        let mut e = QElem::new();
        let mut o = QElem::new();
        for (m, c) in q {
            if self.mono_parity(m).is_odd() {
                o.insert(m.clone(), c.clone());
            } else {
                e.insert(m.clone(), c.clone());
            }
        }
        (e, o)
    }

    /// Weight `Σ e_i·wt(letter_i)`.
    pub fn weight(&self, m: &Mono) -> i64 {
        m.iter().zip(&self.letters).map(|(e, l)| *e as i64 * l.weight).sum()
    }

    /// Kazhdan degree `Σ e_i·(wt(letter_i) + 2)`.
    pub fn kazhdan_degree(&self, m: &Mono) -> i64 {
        m.iter().zip(&self.letters).map(|(e, l)| *e as i64 * (l.weight + 2)).sum()
    }

    /// PBW length `Σ e_i`.
    pub fn length(m: &Mono) -> u32 {
        m.iter().sum()
    }

    /// Highest Kazhdan degree occurring in `q` (`None` for zero).
    pub fn top_degree(&self, q: &QElem) -> Option<i64> {
        q.keys().map(|m| self.kazhdan_degree(m)).max()
    }

    /// Terms of `q` of Kazhdan degree exactly `d`.
    pub fn degree_part(&self, q: &QElem, d: i64) -> QElem {
        q.iter().filter(|(m, _)| self.kazhdan_degree(m) == d).map(|(m, c)| (m.clone(), c.clone())).collect()
    }

    /// The involution multiplying each monomial by `(−1)^{Kazhdan degree}`.
    pub fn sigma(&self, q: &QElem) -> QElem {
        q.iter()
            .map(|(m, c)| (m.clone(), if self.kazhdan_degree(m) % 2 == 0 { c.clone() } else { -c }))
            .collect()
    }

    fn parity_of_adapted(&self, a: usize) -> Parity {
        let nl = self.nletters();
        if a < nl {
            self.letters[a].parity
        } else {
            self.sub_parity[a - nl]
        }
    }

    /// `b_a · (mono ⊗ 1)` for an adapted basis index `a`.
    pub fn act_basis(&self, a: usize, mono: &Mono) -> QElem {
        let key = (a, mono.clone());
        if let Some(v) = self.cache.read().expect("cache lock").get(&key) {
            return v.clone();
        }
        let v = self.compute_basis(a, mono);
        self.cache.write().expect("cache lock").insert(key, v.clone());
        v
    }

    fn compute_basis(&self, a: usize, mono: &Mono) -> QElem {
        let nl = self.nletters();
        let first = mono.iter().position(|&e| e > 0);
        let swap = |j: usize| -> QElem {
            // z L_j R = (−1)^{|z||L_j|} L_j (z R) + [z, L_j] R
            let mut rest = mono.clone();
            rest[j] -= 1;
            let sign = if self.parity_of_adapted(a).is_odd() && self.letters[j].parity.is_odd() {
                Scalar::int(-1)
            } else {
                Scalar::one()
            };
            let inner = self.act_basis(a, &rest);
            let mut out = self.act_adapted_elem(&to_sparse_single(j), &inner);
            out = q_scale(&out, &sign);
            let br = &self.brackets[a][j];
            if !br.is_empty() {
                let t = self.act_adapted_elem(br, &self.mono_elem(&rest));
                q_axpy(&mut out, &Scalar::one(), &t);
            }
            out
        };
        if a >= nl {
            return match first {
                None => {
                    let v = &self.sub_values[a - nl];
                    if v.is_zero() {
                        QElem::new()
                    } else {
                        q_scale(&self.mono_elem(mono), v)
                    }
                }
                Some(j) => swap(j),
            };
        }
        let i = a;
        match first {
            Some(j) if j < i => swap(j),
            Some(j) if j == i && self.letters[i].parity.is_odd() => {
                // z·z·R = ½[z, z]·R
                let mut rest = mono.clone();
                rest[i] -= 1;
                let br = &self.brackets[i][i];
                let t = self.act_adapted_elem(br, &self.mono_elem(&rest));
                q_scale(&t, &Scalar::frac(1, 2))
            }
            _ => {
                let mut m = mono.clone();
                m[i] += 1;
                if let (Some(p), Some((pp, xi))) = (self.p, &self.pth[i]) {
                    if m[i] as u64 == p {
                        let mut rest = m.clone();
                        rest[i] = 0;
                        let mut out = self.act_adapted_elem(pp, &self.mono_elem(&rest));
                        if !xi.is_zero() {
                            q_axpy(&mut out, xi, &self.mono_elem(&rest));
                        }
                        return out;
                    }
                }
                self.mono_elem(&m)
            }
        }
    }

    /// `x · q` for `x` given by adapted coordinates.
    pub fn act_adapted_elem(&self, x: &SparseVec<usize>, q: &QElem) -> QElem {
        let mut out = QElem::new();
        for (a, c) in x {
            for (m, d) in q {
                let t = self.act_basis(*a, m);
                q_axpy(&mut out, &(c * d), &t);
            }
        }
        out
    }

    /// `x · q` for `x ∈ g`.
    pub fn act(&self, x: &[Scalar], q: &QElem) -> Result<QElem> {
        Ok(self.act_adapted_elem(&self.adapted_coords(x)?, q))
    }

    /// `L_i · q` for the alphabet letter `i`.
    pub fn act_letter(&self, i: usize, q: &QElem) -> QElem {
        self.act_adapted_elem(&to_sparse_single(i), q)
    }

    /// `(ordered product of the letters of m) · q`.
    pub fn act_mono(&self, m: &Mono, q: &QElem) -> QElem {
        let mut cur = q.clone();
        for i in (0..m.len()).rev() {
            for _ in 0..m[i] {
                cur = self.act_letter(i, &cur);
            }
        }
        cur
    }

    /// `a · b`, where `a` is lifted to the ordered polynomial in the alphabet.
    pub fn mul(&self, a: &QElem, b: &QElem) -> QElem {
        let terms: Vec<(&Mono, &Scalar)> = a.iter().collect();
        let parts = par_map(self.exec, &terms, |(m, c)| q_scale(&self.act_mono(m, b), c));
        let mut out = QElem::new();
        for p in parts {
            q_axpy(&mut out, &Scalar::one(), &p);
        }
        out
    }

    /// `a·b − (−1)^{|a||b|} b·a` for homogeneous `a`, `b`.
    pub fn supercommutator(&self, a: &QElem, b: &QElem) -> Result<QElem> {
        let pa = self.elem_parity(a).ok_or_else(|| Error::Invalid("inhomogeneous element".into()))?;
        let pb = self.elem_parity(b).ok_or_else(|| Error::Invalid("inhomogeneous element".into()))?;
        let sign = if pa.is_odd() && pb.is_odd() { Scalar::one() } else { Scalar::int(-1) };
        let mut out = self.mul(a, b);
        q_axpy(&mut out, &sign, &self.mul(b, a));
        Ok(out)
    }

    /// `ad x (q) = x·q − (−1)^{|x||q|} q·(x ⊗ 1)` for homogeneous `x ∈ g`.
    pub fn ad_action(&self, x: &[Scalar], q: &QElem) -> Result<QElem> {
        let px = self.alg.parity_of(x).ok_or_else(|| Error::Invalid("inhomogeneous element".into()))?;
        let xc = self.adapted_coords(x)?;
        let x1 = self.act_adapted_elem(&xc, &self.unit());
        let (qe, qo) = self.split_parity(q);
        let mut out = self.act_adapted_elem(&xc, q);
        let minus = Scalar::int(-1);
        q_axpy(&mut out, &minus, &self.mul(&qe, &x1));
        let s = if px.is_odd() { Scalar::one() } else { minus };
        q_axpy(&mut out, &s, &self.mul(&qo, &x1));
        Ok(out)
    }

    /// Canonical text form `c * x1^2 y1 + …` (terms in monomial order).
    pub fn format(&self, q: &QElem) -> String {
        if q.is_empty() {
            return "0".into();
        }
        q.iter().map(|(m, c)| format!("{} * {}", c.to_canonical_string(), self.format_mono(m))).collect::<Vec<_>>().join(" + ")
    }

    /// Text form of a monomial (`1` for the empty one).
    pub fn format_mono(&self, m: &Mono) -> String {
        let parts: Vec<String> = m
            .iter()
            .zip(&self.letters)
            .filter(|(e, _)| **e > 0)
            .map(|(e, l)| if *e == 1 { l.name.clone() } else { format!("{}^{}", l.name, e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    /// All monomials of Kazhdan degree `≤ d`, sorted by degree and then
    /// lexicographically.  Letters of non-positive Kazhdan degree are rejected.
    pub fn monomials_up_to(&self, d: i64) -> Result<Vec<Mono>> {
        if self.letters.iter().any(|l| l.weight + 2 <= 0) {
            return Err(Error::Invalid("alphabet has letters of non-positive Kazhdan degree".into()));
        }
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.nletters()];
        self.enumerate(0, d, &mut cur, &mut out);
        out.sort_by(|a, b| self.kazhdan_degree(a).cmp(&self.kazhdan_degree(b)).then(a.cmp(b)));
        Ok(out)
    }

    fn enumerate(&self, i: usize, budget: i64, cur: &mut Mono, out: &mut Vec<Mono>) {
        if i == self.nletters() {
            out.push(cur.clone());
            return;
        }
        let deg = self.letters[i].weight + 2;
        let mut max = budget / deg;
        if self.letters[i].parity.is_odd() {
            max = max.min(1);
        }
        if let (Some(p), Some(_)) = (self.p, &self.pth[i]) {
            max = max.min(p as i64 - 1);
        }
        for e in 0..=max {
            cur[i] = e as u32;
            self.enumerate(i + 1, budget - e * deg, cur, out);
        }
        cur[i] = 0;
    }

    /// All restricted PBW monomials (finite restricted models only).
    pub fn restricted_basis(&self) -> Result<Vec<Mono>> {
        let p = self.p.ok_or_else(|| Error::Unsupported("model is not restricted".into()))?;
        let mut out = vec![vec![0u32; self.nletters()]];
        for i in 0..self.nletters() {
            let max = if self.letters[i].parity.is_odd() {
                1
            } else if self.pth[i].is_some() {
                p as u32 - 1
            } else {
                return Err(Error::Unsupported(format!("letter {} has no p-th power rule", self.letters[i].name)));
            };
            out = out
                .into_iter()
                .flat_map(|m| {
                    (0..=max).map(move |e| {
                        let mut m2 = m.clone();
                        m2[i] = e;
                        m2
                    })
                })
                .collect();
        }
        out.sort();
        Ok(out)
    }

    /// Number of cached `(letter, monomial)` products.
    pub fn cache_size(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }
}

fn to_sparse_single(i: usize) -> SparseVec<usize> {
    let mut s = SparseVec::new();
    s.insert(i, Scalar::one());
    s
}

/// The sign `K` of the leading term of a product of two monomials: `0` if an
/// odd letter occurs in both, otherwise `(−1)^τ` with `τ` the number of pairs
/// (odd letter of the left factor, odd letter of the right factor) that are
/// out of order.
pub fn leading_sign(letters: &[AlphabetLetter], m1: &Mono, m2: &Mono) -> i8 {
    let mut tau = 0u32;
    for (i, l) in letters.iter().enumerate() {
        if !l.parity.is_odd() {
            continue;
        }
        if m1[i] > 0 && m2[i] > 0 {
            return 0;
        }
        if m1[i] > 0 {
            for (j, l2) in letters.iter().enumerate().take(i) {
                if l2.parity.is_odd() {
                    tau += m2[j];
                }
            }
        }
    }
    if tau.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sum of two monomials.
pub fn mono_add(a: &Mono, b: &Mono) -> Mono {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// PBW normal form of a word of basis elements of `g` in `U(g)`.
pub fn normal_form(model: &InducedModel, word: &[usize], coeff: &Scalar) -> QElem {
    let mut cur = model.unit();
    for &a in word.iter().rev() {
        cur = model.act_letter(a, &cur);
    }
    q_scale(&cur, coeff)
}

/// Groups terms by Kazhdan degree.
pub fn by_degree(model: &InducedModel, q: &QElem) -> BTreeMap<i64, QElem> {
    let mut out: BTreeMap<i64, QElem> = BTreeMap::new();
    for (m, c) in q {
        out.entry(model.kazhdan_degree(m)).or_default().insert(m.clone(), c.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_data::{build_gl, build_osp12n};
    use crate::linalg::Matrix;
    use proptest::prelude::*;

    /// Evaluates a `U(g)` element in the matrix realization.
    fn eval_in_realization(model: &InducedModel, q: &QElem) -> Matrix {
        let alg = model.algebra();
        let size = alg.realization().unwrap().size();
        let mut out = Matrix::zeros(size, size);
        for (m, c) in q {
            let mut prod = Matrix::identity(size);
            for (i, e) in m.iter().enumerate() {
                let xi = alg.matrix_of(&alg.basis_vec(i)).unwrap();
                for _ in 0..*e {
                    prod = prod.mul(&xi);
                }
            }
            out = out.add(&prod.scale(c));
        }
        out
    }

    fn eval_word(alg: &LieSuperalgebra, word: &[usize]) -> Matrix {
        let size = alg.realization().unwrap().size();
        let mut prod = Matrix::identity(size);
        for &a in word {
            prod = prod.mul(&alg.matrix_of(&alg.basis_vec(a)).unwrap());
        }
        prod
    }

    #[test]
    fn swap_of_commuting_letters() {
        let g = build_gl(1, 1).unwrap();
        let m = InducedModel::enveloping(&g).unwrap();
        // E11 (even) and E12 (odd): E12·E11 = E11·E12 + [E12, E11] = E11 E12 − E12.
        let (e11, e12) = (g.index_of("E11").unwrap(), g.index_of("E12").unwrap());
        let nf = normal_form(&m, &[e12, e11], &Scalar::one());
        let mut want = QElem::new();
        let mut a = vec![0; 4];
        a[e11] = 1;
        a[e12] = 1;
        want.insert(a, Scalar::one());
        let mut b = vec![0; 4];
        b[e12] = 1;
        want.insert(b, Scalar::int(-1));
        assert_eq!(nf, want);
    }

    #[test]
    fn odd_square_uses_half_bracket() {
        let g = build_gl(1, 1).unwrap();
        let m = InducedModel::enveloping(&g).unwrap();
        let e12 = g.index_of("E12").unwrap();
        assert!(normal_form(&m, &[e12, e12], &Scalar::one()).is_empty());
        let e21 = g.index_of("E21").unwrap();
        let nf = normal_form(&m, &[e21, e12], &Scalar::one());
        // E21 E12 = −E12 E21 + [E21, E12] = −E12 E21 + E11 + E22.
        assert_eq!(nf.len(), 3);
    }

    #[test]
    fn normal_form_matches_matrices_on_osp() {
        let g = build_osp12n(1).unwrap();
        let m = InducedModel::enveloping(&g).unwrap();
        let words: [&[usize]; 4] = [&[4, 3, 2, 1, 0], &[3, 3, 4, 4, 2], &[1, 0, 4, 3, 0], &[2, 2, 1, 4, 3]];
        for w in words {
            let nf = normal_form(&m, w, &Scalar::one());
            assert_eq!(eval_in_realization(&m, &nf), eval_word(&g, w), "word {w:?}");
        }
    }

    #[test]
    fn degree_bookkeeping() {
        let g = build_gl(1, 1).unwrap();
        let m = InducedModel::enveloping(&g).unwrap();
        assert_eq!(m.kazhdan_degree(&vec![0; 4]), 0);
        assert_eq!(m.kazhdan_degree(&vec![1, 2, 0, 1]), 8);
        assert_eq!(m.sigma(&m.unit()), m.unit());
    }

    #[test]
    fn leading_sign_counts_inversions() {
        let letters: Vec<AlphabetLetter> = ["a", "b", "c"]
            .iter()
            .map(|n| AlphabetLetter { name: n.to_string(), parity: Parity::Odd, weight: 0 })
            .collect();
        assert_eq!(leading_sign(&letters, &vec![0, 1, 0], &vec![1, 0, 0]), -1);
        assert_eq!(leading_sign(&letters, &vec![1, 0, 0], &vec![0, 1, 0]), 1);
        assert_eq!(leading_sign(&letters, &vec![0, 1, 1], &vec![1, 0, 0]), 1);
        assert_eq!(leading_sign(&letters, &vec![0, 1, 0], &vec![0, 1, 0]), 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn random_words_match_realization(word in proptest::collection::vec(0usize..5, 1..6)) {
            let g = build_osp12n(1).unwrap();
            let m = InducedModel::enveloping(&g).unwrap();
            let nf = normal_form(&m, &word, &Scalar::one());
            prop_assert_eq!(eval_in_realization(&m, &nf), eval_word(&g, &word));
            // Idempotence: the normal form of a normal monomial is itself.
            for mono in nf.keys() {
                prop_assert_eq!(m.act_mono(mono, &m.unit()), m.mono_elem(mono));
            }
        }

        #[test]
        fn gl21_words_match_realization(word in proptest::collection::vec(0usize..9, 1..5)) {
            let g = build_gl(2, 1).unwrap();
            let m = InducedModel::enveloping(&g).unwrap();
            let nf = normal_form(&m, &word, &Scalar::one());
            prop_assert_eq!(eval_in_realization(&m, &nf), eval_word(&g, &word));
        }
    }
}
