//! Finite W-superalgebras as `ad m`-invariants of the Gelfand–Graev module.
//!
//! The invariants of `Q_χ` are computed inside the Kazhdan filtration piece
//! `F_D` by one exact sparse nullspace solve.  Generators `Θ_k` are pinned
//! down by their coordinates on *pure* monomials (products of centralizer
//! letters and, when `dim g(−1)_1̄` is odd, the middle odd letter): each `Θ_k`
//! is the unique invariant whose pure part is exactly its leading letter
//! `Y_k`.  The PBW property is then checked by counting, and the relations
//! `[Θ_i, Θ_j] = F_ij(Θ)` are obtained by expressing supercommutators in the
//! basis of ordered `Θ`-monomials.

pub mod reps;

use crate::algebra_data::Parity;
use crate::error::{Error, Result};
use crate::exec::{par_map, Exec};
use crate::linalg::{sparse_nullspace, Coordinatizer, Matrix, SparseEchelon, SparseVec, Vector};
use crate::nilpotent_frame::{LetterRole, NilpotentFrame};
use crate::pbw_engine::{q_axpy, q_scale, q_sub, InducedModel, Mono, QElem};
use crate::scalar::Scalar;
use std::collections::{BTreeMap, HashMap};

/// Builds the Gelfand–Graev model `Q_χ = U(g) ⊗_{U(m)} k_χ` of a frame.
pub fn qchi_model(frame: &NilpotentFrame) -> Result<InducedModel> {
    let letters = frame.letters.iter().map(|l| (l.name.clone(), l.vec.clone(), l.weight)).collect();
    let sub = frame.m_letters.iter().map(|l| (l.name.clone(), l.vec.clone(), frame.chi(&l.vec))).collect();
    InducedModel::new(&frame.alg, letters, sub, None)
}

/// Indices of the letters spanning the pure part: centralizer letters, then
/// the middle odd letter if present.
pub fn pure_letters(frame: &NilpotentFrame) -> Vec<usize> {
    let mut v = frame.ge_letters();
    v.extend(frame.vmid_letter());
    v
}

/// A basis of `Q_χ^{ad m} ∩ F_D`, echelonized so that each element has a
/// distinct leading monomial of maximal Kazhdan degree.
#[derive(Clone, Debug)]
pub struct InvariantSpace {
    /// The degree cap `D`.
    pub cap: i64,
    /// Basis elements.
    pub basis: Vec<QElem>,
    /// Filtration degree of each basis element (degree of its leading monomial).
    pub degrees: Vec<i64>,
    /// Number of monomials of degree `≤ D` (the number of unknowns).
    pub unknowns: usize,
}

impl InvariantSpace {
    /// `dim (W ∩ F_d) / (W ∩ F_{d−1})` for every `d ≤ D`.
    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        let mut m: BTreeMap<i64, usize> = (0..=self.cap).map(|d| (d, 0)).collect();
        for d in &self.degrees {
            *m.entry(*d).or_default() += 1;
        }
        m
    }

    /// Basis elements lying in `F_d`.
    pub fn filtered(&self, d: i64) -> Vec<&QElem> {
        self.basis.iter().zip(&self.degrees).filter(|(_, k)| **k <= d).map(|(b, _)| b).collect()
    }
}

/// Orders monomials by descending Kazhdan degree, then lexicographically.
fn descending(model: &InducedModel, monos: &mut [Mono]) {
    monos.sort_by(|a, b| model.kazhdan_degree(b).cmp(&model.kazhdan_degree(a)).then(a.cmp(b)));
}

/// Echelonizes elements so that each has a distinct leading monomial of
/// maximal degree; returns `(leading degree, element)` pairs.
pub fn filtered_echelon(model: &InducedModel, elems: &[QElem]) -> Vec<(i64, QElem)> {
    let mut monos: Vec<Mono> = elems.iter().flat_map(|q| q.keys().cloned()).collect();
    monos.sort();
    monos.dedup();
    descending(model, &mut monos);
    let index: HashMap<&Mono, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let rows: Vec<Vector> = elems
        .iter()
        .map(|q| {
            let mut v = vec![Scalar::zero(); monos.len()];
            for (m, c) in q {
                v[index[m]] = c.clone();
            }
            v
        })
        .collect();
    if rows.is_empty() || monos.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = Matrix::from_rows_with_cols(rows, monos.len()).rref();
    pivots
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let q: QElem =
                r.row(i).iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (monos[j].clone(), c.clone())).collect();
            (model.kazhdan_degree(&monos[p]), q)
        })
        .collect()
}

/// Computes `Q_χ^{ad m} ∩ F_D` by solving `ad x (q) = 0` for every basis
/// element `x` of `m`.
pub fn invariants_up_to(frame: &NilpotentFrame, model: &InducedModel, cap: i64) -> Result<InvariantSpace> {
    if cap < 0 {
        return Err(Error::Invalid("degree cap must be non-negative".into()));
    }
    let extra: Vec<Vector> = frame.m_letters.iter().map(|l| l.vec.clone()).collect();
    invariants_of(model, &extra, cap)
}

/// Invariants in `F_D` of the adjoint action of the given homogeneous elements.
pub fn invariants_of(model: &InducedModel, xs: &[Vector], cap: i64) -> Result<InvariantSpace> {
    let mut monos = model.monomials_up_to(cap)?;
    descending(model, &mut monos);
    let n = monos.len();
    let jobs: Vec<(usize, usize)> = (0..xs.len()).flat_map(|z| (0..n).map(move |j| (z, j))).collect();
    let images = par_map(model.exec(), &jobs, |&(z, j)| model.ad_action(&xs[z], &model.mono_elem(&monos[j])));
    let mut eqs: BTreeMap<(usize, Mono), SparseVec<usize>> = BTreeMap::new();
    for (&(z, j), img) in jobs.iter().zip(images) {
        for (mu, c) in img? {
            eqs.entry((z, mu)).or_default().insert(j, c);
        }
    }
    let null = sparse_nullspace(eqs.into_values(), n);
    let mut basis = Vec::new();
    let mut degrees = Vec::new();
    if !null.is_empty() {
        let (r, pivots) = Matrix::from_rows_with_cols(null, n).rref();
        for (i, &p) in pivots.iter().enumerate() {
            let q: QElem =
                r.row(i).iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (monos[j].clone(), c.clone())).collect();
            basis.push(q);
            degrees.push(model.kazhdan_degree(&monos[p]));
        }
    }
    Ok(InvariantSpace { cap, basis, degrees, unknowns: n })
}

/// Number of pure monomials (polynomial in even pure letters, exterior in odd
/// ones) in each Kazhdan degree `≤ D`: the Hilbert series of `S(g^e)`, times
/// one exterior generator of degree 1 when `dim g(−1)_1̄` is odd.
pub fn pbw_prediction(frame: &NilpotentFrame, cap: i64) -> BTreeMap<i64, usize> {
    let gens: Vec<(i64, bool)> =
        pure_letters(frame).iter().map(|&i| (frame.letters[i].kdeg(), frame.letters[i].parity.is_odd())).collect();
    hilbert_counts(&gens, cap)
}

/// Counts monomials per degree `≤ cap` for generators `(degree, is_odd)`.
pub fn hilbert_counts(gens: &[(i64, bool)], cap: i64) -> BTreeMap<i64, usize> {
    let mut counts = vec![0usize; cap.max(0) as usize + 1];
    counts[0] = 1;
    for &(d, odd) in gens {
        if d <= 0 {
            continue;
        }
        let mut next = counts.clone();
        if odd {
            for k in (d as usize..counts.len()).rev() {
                next[k] = counts[k] + counts[k - d as usize];
            }
        } else {
            for k in d as usize..counts.len() {
                next[k] += next[k - d as usize];
            }
        }
        counts = next;
    }
    counts.into_iter().enumerate().map(|(i, c)| (i as i64, c)).collect()
}

/// A generator `Θ_k` of the W-superalgebra.
#[derive(Clone, Debug, PartialEq)]
pub struct WGenerator {
    /// Display name `Θk` (1-based).
    pub name: String,
    /// The alphabet index of its leading letter `Y_k`.
    pub letter: usize,
    /// Name of the leading letter.
    pub symbol: String,
    /// `ad h`-weight `m_k` of the leading letter.
    pub weight: i64,
    /// ℤ₂-degree.
    pub parity: Parity,
    /// `Θ_k(1_χ)` as an element of `Q_χ`.
    pub theta: QElem,
}

impl WGenerator {
    /// Kazhdan degree `m_k + 2`.
    pub fn kdeg(&self) -> i64 {
        self.weight + 2
    }
}

/// The W-superalgebra up to a Kazhdan degree cap.
#[derive(Debug)]
pub struct WAlgebra {
    /// The nilpotent frame.
    pub frame: NilpotentFrame,
    /// The `Q_χ` model.
    pub model: InducedModel,
    /// Invariants in `F_D`.
    pub space: InvariantSpace,
    /// The generators, in alphabet order of their leading letters.
    pub gens: Vec<WGenerator>,
    theta_cache: std::sync::RwLock<HashMap<Vec<u32>, QElem>>,
}

impl WAlgebra {
    /// Computes invariants and generators up to the cap `D`.
    pub fn compute(frame: &NilpotentFrame, cap: i64, exec: Exec) -> Result<WAlgebra> {
        let model = qchi_model(frame)?.with_exec(exec);
        let space = invariants_up_to(frame, &model, cap)?;
        let gens = compute_generators(frame, &model, &space)?;
        Ok(WAlgebra { frame: frame.clone(), model, space, gens, theta_cache: Default::default() })
    }

    /// The degree cap.
    pub fn cap(&self) -> i64 {
        self.space.cap
    }

    /// Number of generators `l + q (+1)`.
    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    /// Index of the extra odd generator (`v_mid ⊗ 1_χ`), when present.
    pub fn extra_generator(&self) -> Option<usize> {
        let vm = self.frame.vmid_letter()?;
        self.gens.iter().position(|g| g.letter == vm)
    }

    /// Kazhdan degree of a `Θ`-monomial.
    pub fn theta_degree(&self, a: &[u32]) -> i64 {
        a.iter().zip(&self.gens).map(|(e, g)| *e as i64 * g.kdeg()).sum()
    }

    /// ℤ₂-degree of a `Θ`-monomial.
    pub fn theta_parity(&self, a: &[u32]) -> Parity {
        let odd: u32 = a.iter().zip(&self.gens).filter(|(_, g)| g.parity.is_odd()).map(|(e, _)| *e).sum();
        Parity::from_bit((odd % 2) as u8)
    }

    /// All `Θ`-monomials (odd exponents 0/1) of degree `≤ d`, ordered by
    /// degree and then lexicographically.
    pub fn theta_monomials(&self, d: i64) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.ngens()];
        fn rec(w: &WAlgebra, i: usize, budget: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i == w.ngens() {
                out.push(cur.clone());
                return;
            }
            let g = &w.gens[i];
            let mut max = budget / g.kdeg();
            if g.parity.is_odd() {
                max = max.min(1);
            }
            for e in 0..=max {
                cur[i] = e as u32;
                rec(w, i + 1, budget - e * g.kdeg(), cur, out);
            }
            cur[i] = 0;
        }
        rec(self, 0, d, &mut cur, &mut out);
        out.sort_by(|a, b| self.theta_degree(a).cmp(&self.theta_degree(b)).then(a.cmp(b)));
        out
    }

    /// The ordered product `Θ_1^{a_1} ⋯ Θ_N^{a_N} (1_χ)` in `Q_χ`.
    pub fn theta_value(&self, a: &[u32]) -> QElem {
        if let Some(v) = self.theta_cache.read().expect("cache lock").get(a) {
            return v.clone();
        }
        let v = match a.iter().position(|&e| e > 0) {
            None => self.model.unit(),
            Some(i) => {
                let mut rest = a.to_vec();
                rest[i] -= 1;
                self.model.mul(&self.gens[i].theta, &self.theta_value(&rest))
            }
        };
        self.theta_cache.write().expect("cache lock").insert(a.to_vec(), v.clone());
        v
    }

    /// Echelon of the `Θ`-monomial values of degree `≤ d` (tags index the
    /// returned monomial list), plus the list of dependent monomials.
    fn theta_echelon(&self, d: i64) -> (Vec<Vec<u32>>, SparseEchelon<Mono>, Vec<Vec<u32>>) {
        let monos = self.theta_monomials(d);
        let values = par_map(self.model.exec(), &monos, |a| self.theta_value(a));
        let mut ech = SparseEchelon::new();
        let mut dependent = Vec::new();
        for (t, v) in values.into_iter().enumerate() {
            if ech.insert(v, t).is_some() {
                dependent.push(monos[t].clone());
            }
        }
        (monos, ech, dependent)
    }

    /// Checks the PBW property up to the cap.
    pub fn pbw_check(&self) -> PbwReport {
        let cap = self.cap();
        let predicted = pbw_prediction(&self.frame, cap);
        let observed = self.space.graded_dims();
        let (monos, ech, dependent) = self.theta_echelon(cap);
        let mut theta_counts: BTreeMap<i64, usize> = (0..=cap).map(|d| (d, 0)).collect();
        for a in &monos {
            *theta_counts.entry(self.theta_degree(a)).or_default() += 1;
        }
        let space_ech = {
            let mut e = SparseEchelon::new();
            for (t, b) in self.space.basis.iter().enumerate() {
                e.insert(b.clone(), t);
            }
            e
        };
        let theta_in_invariants = ech.rows().all(|r| space_ech.contains(r));
        let rows = (0..=cap)
            .map(|d| PbwRow {
                degree: d,
                invariant_dim: observed.get(&d).copied().unwrap_or(0),
                predicted: predicted.get(&d).copied().unwrap_or(0),
                theta_monomials: theta_counts.get(&d).copied().unwrap_or(0),
            })
            .collect();
        PbwReport { cap, rows, theta_independent: dependent.is_empty(), theta_in_invariants }
    }

    /// Smallest cap for which the full relation table can be extracted.
    pub fn minimal_relation_cap(&self) -> i64 {
        relation_pairs(self).iter().map(|&(i, j)| self.gens[i].kdeg() + self.gens[j].kdeg()).max().unwrap_or(0)
    }

    /// Computes the relation table `[Θ_i, Θ_j] = F_ij(Θ)`.
    pub fn commutator_table(&self) -> Result<RelationTable> {
        let needed = self.minimal_relation_cap();
        if self.cap() < needed {
            return Err(Error::DegreeCap { needed, given: self.cap() });
        }
        let pairs = relation_pairs(self);
        let bound = pairs.iter().map(|&(i, j)| self.gens[i].kdeg() + self.gens[j].kdeg() - 2).max().unwrap_or(0);
        let (monos, ech, _) = self.theta_echelon(bound.max(0));
        let comms = par_map(self.model.exec(), &pairs, |&(i, j)| {
            self.model.supercommutator(&self.gens[i].theta, &self.gens[j].theta)
        });
        let mut entries = Vec::new();
        for (&(i, j), comm) in pairs.iter().zip(comms) {
            let comm = comm?;
            let expr = ech.express(&comm).ok_or_else(|| {
                Error::NoSolution(format!("[{}, {}] is not in the span of Θ-monomials", self.gens[i].name, self.gens[j].name))
            })?;
            let f: SparseVec<Vec<u32>> = expr.into_iter().map(|(t, c)| (monos[t].clone(), c)).collect();
            entries.push(Relation { i, j, f });
        }
        Ok(RelationTable {
            names: self.gens.iter().map(|g| g.name.clone()).collect(),
            symbols: self.gens.iter().map(|g| g.symbol.clone()).collect(),
            parities: self.gens.iter().map(|g| g.parity).collect(),
            weights: self.gens.iter().map(|g| g.weight).collect(),
            l: self.gens.iter().filter(|g| !g.parity.is_odd()).count(),
            extra: self.extra_generator(),
            c: self.frame.c.clone(),
            alpha: self.structure_constants()?,
            entries,
            cap: self.cap(),
        })
    }

    /// Structure constants `α_ij^k` of `g^e` in the basis of leading letters
    /// (pairs among centralizer generators only).
    pub fn structure_constants(&self) -> Result<BTreeMap<(usize, usize), SparseVec<usize>>> {
        let alg = &self.frame.alg;
        let ge: Vec<usize> = (0..self.ngens()).filter(|&k| Some(k) != self.extra_generator()).collect();
        let vecs: Vec<Vector> = ge.iter().map(|&k| self.frame.letters[self.gens[k].letter].vec.clone()).collect();
        let mut out = BTreeMap::new();
        if vecs.is_empty() {
            return Ok(out);
        }
        let coord = Coordinatizer::new(vecs.clone(), alg.dim())?;
        for (a, &i) in ge.iter().enumerate() {
            for (b, &j) in ge.iter().enumerate() {
                let br = alg.bracket(&vecs[a], &vecs[b]);
                let c = coord.coords(&br).ok_or_else(|| Error::Invalid("g^e is not closed under the bracket".into()))?;
                let sv: SparseVec<usize> =
                    c.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(t, x)| (ge[t], x)).collect();
                out.insert((i, j), sv);
            }
        }
        Ok(out)
    }

    /// Checks every generator for `ad m`-invariance and its normalization.
    pub fn generator_report(&self) -> Result<GeneratorReport> {
        let mut invariant = true;
        let mut leading = true;
        let mut sigma = true;
        let pure = pure_letters(&self.frame);
        for g in &self.gens {
            for x in &self.frame.m_letters {
                if !self.model.ad_action(&x.vec, &g.theta)?.is_empty() {
                    invariant = false;
                }
            }
            let ymono = self.model.letter_mono(g.letter);
            let top = self.model.top_degree(&g.theta);
            let pure_part: QElem = g
                .theta
                .iter()
                .filter(|(m, _)| m.iter().enumerate().all(|(i, e)| *e == 0 || pure.contains(&i)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect();
            if top != Some(g.kdeg()) || pure_part != self.model.mono_elem(&ymono) {
                leading = false;
            }
            let s = self.model.sigma(&g.theta);
            let expect = if g.kdeg() % 2 == 0 { g.theta.clone() } else { q_scale(&g.theta, &Scalar::int(-1)) };
            if s != expect {
                sigma = false;
            }
        }
        Ok(GeneratorReport { count: self.gens.len(), invariant, leading, sigma })
    }

    /// Computes `W′ = Q_χ^{ad m′}` inside `F_D` and checks
    /// `W′ ∩ F_d = [v_mid, W ∩ F_{d+1}]` for every `d < D`.
    pub fn w_prime(&self) -> Result<WPrimeReport> {
        let Some(vm) = self.frame.vmid() else {
            return Ok(WPrimeReport {
                trivial: true,
                dims: self.space.graded_dims(),
                identity_holds: true,
                vmid_in_w: true,
                vmid_not_in_w_prime: true,
                type_q: true,
            });
        };
        let model = &self.model;
        let images: Vec<QElem> =
            par_map(model.exec(), &self.space.basis, |b| model.ad_action(vm, b)).into_iter().collect::<Result<_>>()?;
        // Kernel of ad v_mid on W.
        let mut monos: Vec<Mono> = images.iter().flat_map(|q| q.keys().cloned()).collect();
        monos.sort();
        monos.dedup();
        let index: HashMap<&Mono, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut eqs: Vec<SparseVec<usize>> = vec![SparseVec::new(); monos.len()];
        for (j, img) in images.iter().enumerate() {
            for (m, c) in img {
                eqs[index[m]].insert(j, c.clone());
            }
        }
        let kernel = sparse_nullspace(eqs, self.space.basis.len());
        let wprime: Vec<QElem> = kernel
            .iter()
            .map(|c| {
                let mut q = QElem::new();
                for (j, cj) in c.iter().enumerate() {
                    q_axpy(&mut q, cj, &self.space.basis[j]);
                }
                q
            })
            .collect();
        let wp = filtered_echelon(model, &wprime);
        let mut dims: BTreeMap<i64, usize> = (0..=self.cap()).map(|d| (d, 0)).collect();
        for (d, _) in &wp {
            *dims.entry(*d).or_default() += 1;
        }
        let mut identity_holds = true;
        for d in 0..self.cap() {
            let a: Vec<&QElem> =
                images.iter().zip(&self.space.degrees).filter(|(_, k)| **k <= d + 1).map(|(q, _)| q).collect();
            let b: Vec<&QElem> = wp.iter().filter(|(k, _)| *k <= d).map(|(_, q)| q).collect();
            if !same_span(&a, &b) {
                identity_holds = false;
            }
        }
        let theta_n = self.extra_generator().map(|k| self.gens[k].theta.clone()).unwrap_or_default();
        let vmid_in_w = self.extra_generator().is_some();
        let vmid_not_in_w_prime = {
            let mut e = SparseEchelon::new();
            for (t, (_, q)) in wp.iter().enumerate() {
                e.insert(q.clone(), t);
            }
            !e.contains(&theta_n)
        };
        let mut type_q = true;
        for (_, w) in &wp {
            if !model.supercommutator(&theta_n, w)?.is_empty() {
                type_q = false;
            }
        }
        Ok(WPrimeReport { trivial: false, dims, identity_holds, vmid_in_w, vmid_not_in_w_prime, type_q })
    }

    /// Checks that every generator is an eigenvector of `ad t` for each `t`
    /// in `te_basis`, with the eigenvalue of its leading letter; returns the
    /// weights.  Generators are left unchanged (the pure-coordinate
    /// normalization already produces weight vectors when the letters are
    /// weight vectors).
    pub fn weight_normalize(&self, te_basis: &[Vector]) -> Result<Vec<Vec<Scalar>>> {
        let mut weights = Vec::new();
        for g in &self.gens {
            let mut w = Vec::new();
            let y = &self.frame.letters[g.letter].vec;
            for t in te_basis {
                let ty = self.frame.alg.bracket(t, y);
                let lambda = crate::nilpotent_frame::proportionality(&ty, y).ok_or_else(|| {
                    Error::Unsupported(format!("leading letter {} is not a weight vector for the torus", g.symbol))
                })?;
                let img = self.model.ad_action(t, &g.theta)?;
                if q_sub(&img, &q_scale(&g.theta, &lambda)).is_empty() {
                    w.push(lambda);
                } else {
                    return Err(Error::Unsupported(format!("{} is not a torus weight vector", g.name)));
                }
            }
            weights.push(w);
        }
        Ok(weights)
    }
}

fn same_span(a: &[&QElem], b: &[&QElem]) -> bool {
    let mut ea = SparseEchelon::new();
    for (t, q) in a.iter().enumerate() {
        ea.insert((*q).clone(), t);
    }
    let mut eb = SparseEchelon::new();
    for (t, q) in b.iter().enumerate() {
        eb.insert((*q).clone(), t);
    }
    ea.rank() == eb.rank() && b.iter().all(|q| ea.contains(q))
}

/// The pairs `(i, j)` with `i < j`, plus `(i, i)` for odd `Θ_i`.
pub fn relation_pairs(w: &WAlgebra) -> Vec<(usize, usize)> {
    let n = w.ngens();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            if i < j || w.gens[i].parity.is_odd() {
                out.push((i, j));
            }
        }
    }
    out
}

/// Selects `Θ_k` for every pure letter: the unique invariant whose pure
/// coordinates are exactly `Y_k`.
pub fn compute_generators(frame: &NilpotentFrame, model: &InducedModel, space: &InvariantSpace) -> Result<Vec<WGenerator>> {
    let pure = pure_letters(frame);
    let needed = pure.iter().map(|&i| frame.letters[i].kdeg()).max().unwrap_or(0);
    if space.cap < needed {
        return Err(Error::DegreeCap { needed, given: space.cap });
    }
    let is_pure = |m: &Mono| m.iter().enumerate().all(|(i, e)| *e == 0 || pure.contains(&i));
    let mut pure_monos: Vec<Mono> = space.basis.iter().flat_map(|q| q.keys().filter(|m| is_pure(m)).cloned()).collect();
    for &i in &pure {
        pure_monos.push(model.letter_mono(i));
    }
    pure_monos.sort();
    pure_monos.dedup();
    let index: HashMap<&Mono, usize> = pure_monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let nb = space.basis.len();
    let mut mat = Matrix::zeros(pure_monos.len(), nb);
    for (j, q) in space.basis.iter().enumerate() {
        for (m, c) in q {
            if let Some(&r) = index.get(m) {
                mat.set(r, j, c.clone());
            }
        }
    }
    if mat.rank() != nb {
        return Err(Error::Degenerate("an invariant with vanishing pure part exists; the PBW property fails".into()));
    }
    let mut gens = Vec::new();
    for (k, &i) in pure.iter().enumerate() {
        let l = &frame.letters[i];
        let mut rhs = vec![Scalar::zero(); pure_monos.len()];
        rhs[index[&model.letter_mono(i)]] = Scalar::one();
        let c = mat.solve(&rhs).ok_or_else(|| {
            Error::NoSolution(format!("no invariant with leading letter {} below degree {}", l.name, space.cap))
        })?;
        let mut theta = QElem::new();
        for (j, cj) in c.iter().enumerate() {
            q_axpy(&mut theta, cj, &space.basis[j]);
        }
        gens.push(WGenerator {
            name: format!("Θ{}", k + 1),
            letter: i,
            symbol: l.name.clone(),
            weight: l.weight,
            parity: l.parity,
            theta,
        });
    }
    Ok(gens)
}

/// A basis of the toral part of `g^e ∩ g(0)_0̄` (an abelian subspace of
/// ad-semisimple elements), used for weight normalization.
pub fn te_basis(frame: &NilpotentFrame) -> Result<Vec<Vector>> {
    let alg = &frame.alg;
    let zero_piece: Vec<Vector> = frame
        .letters
        .iter()
        .filter(|l| l.role == LetterRole::CentralizerEven && l.weight == 0)
        .map(|l| l.vec.clone())
        .collect();
    for a in &zero_piece {
        for b in &zero_piece {
            if alg.bracket(a, b).iter().any(|c| !c.is_zero()) {
                return Err(Error::Unsupported("g^e(0) is not abelian; torus selection not implemented".into()));
            }
        }
        let spaces = crate::nilpotent_frame::eigenspaces(&alg.ad_matrix(a))?;
        let total: usize = spaces.iter().map(|(_, v)| v.len()).sum();
        if total != alg.dim() {
            return Err(Error::Unsupported("g^e(0) contains non-semisimple elements".into()));
        }
    }
    Ok(zero_piece)
}

/// Per-degree PBW comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbwRow {
    /// Kazhdan degree.
    pub degree: i64,
    /// `dim gr_d W` from the invariant computation.
    pub invariant_dim: usize,
    /// Predicted dimension from the Hilbert series.
    pub predicted: usize,
    /// Number of `Θ`-monomials of this degree.
    pub theta_monomials: usize,
}

/// Result of the PBW check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbwReport {
    /// The cap.
    pub cap: i64,
    /// Per-degree rows.
    pub rows: Vec<PbwRow>,
    /// `Θ`-monomials of degree `≤ D` are linearly independent.
    pub theta_independent: bool,
    /// `Θ`-monomials lie in the computed invariant space.
    pub theta_in_invariants: bool,
}

impl PbwReport {
    /// True if every degree matches and the monomials form a basis.
    pub fn all(&self) -> bool {
        self.theta_independent
            && self.theta_in_invariants
            && self.rows.iter().all(|r| r.invariant_dim == r.predicted && r.predicted == r.theta_monomials)
    }
}

/// Result of the generator checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorReport {
    /// Number of generators.
    pub count: usize,
    /// Every generator is killed by `ad m`.
    pub invariant: bool,
    /// Top degree is `m_k + 2` and the pure part is exactly `Y_k`.
    pub leading: bool,
    /// `σ(Θ_k) = (−1)^{m_k} Θ_k`.
    pub sigma: bool,
}

impl GeneratorReport {
    /// True if every check passed.
    pub fn all(&self) -> bool {
        self.invariant && self.leading && self.sigma
    }
}

/// Result of the `W′` computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WPrimeReport {
    /// `dim g(−1)_1̄` is even, so `W′ = W`.
    pub trivial: bool,
    /// Graded dimensions of `W′ ∩ F_D`.
    pub dims: BTreeMap<i64, usize>,
    /// `W′ ∩ F_d = [v_mid, W ∩ F_{d+1}]` for all `d < D`.
    pub identity_holds: bool,
    /// `v_mid ⊗ 1_χ ∈ W`.
    pub vmid_in_w: bool,
    /// `v_mid ⊗ 1_χ ∉ W′`.
    pub vmid_not_in_w_prime: bool,
    /// `[Θ_extra, w] = 0` for every computed `w ∈ W′`.
    pub type_q: bool,
}

impl WPrimeReport {
    /// True if every check passed.
    pub fn all(&self) -> bool {
        self.trivial || (self.identity_holds && self.vmid_in_w && self.vmid_not_in_w_prime && self.type_q)
    }
}

/// One relation `[Θ_i, Θ_j] = F_ij(Θ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    /// Left index (0-based).
    pub i: usize,
    /// Right index (0-based).
    pub j: usize,
    /// `F_ij` as ordered `Θ`-monomial → coefficient.
    pub f: SparseVec<Vec<u32>>,
}

/// The table of relations among the generators.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationTable {
    /// Generator names.
    pub names: Vec<String>,
    /// Leading letters.
    pub symbols: Vec<String>,
    /// Generator parities.
    pub parities: Vec<Parity>,
    /// Generator weights `m_k`.
    pub weights: Vec<i64>,
    /// Number of even generators.
    pub l: usize,
    /// Index of the extra odd generator.
    pub extra: Option<usize>,
    /// The frame constant `c = χ([v_mid, v_mid])`.
    pub c: Scalar,
    /// Structure constants of `g^e` on the leading letters.
    pub alpha: BTreeMap<(usize, usize), SparseVec<usize>>,
    /// The relations.
    pub entries: Vec<Relation>,
    /// The cap used.
    pub cap: i64,
}

impl RelationTable {
    /// Kazhdan degree of a `Θ`-monomial.
    pub fn degree(&self, a: &[u32]) -> i64 {
        a.iter().zip(&self.weights).map(|(e, w)| *e as i64 * (w + 2)).sum()
    }

    /// The relation for the pair `(i, j)`, if tabulated.
    pub fn get(&self, i: usize, j: usize) -> Option<&Relation> {
        self.entries.iter().find(|r| r.i == i && r.j == j)
    }

    /// Text form of a `Θ`-polynomial.
    pub fn format_poly(&self, f: &SparseVec<Vec<u32>>) -> String {
        if f.is_empty() {
            return "0".into();
        }
        f.iter()
            .map(|(a, c)| {
                let vars: Vec<String> = a
                    .iter()
                    .zip(&self.names)
                    .filter(|(e, _)| **e > 0)
                    .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
                    .collect();
                let m = if vars.is_empty() { "1".to_string() } else { vars.join(" ") };
                format!("{} * {}", c.to_canonical_string(), m)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Structural checks on the table.
    pub fn check(&self) -> RelationReport {
        let mut leading = true;
        let mut degree_bound = true;
        let mut sigma_parity = true;
        let mut odd_square = true;
        for r in &self.entries {
            let top = self.weights[r.i] + self.weights[r.j] + 2;
            let mut linear_top: SparseVec<usize> = SparseVec::new();
            for (a, c) in &r.f {
                let d = self.degree(a);
                if d > top {
                    degree_bound = false;
                }
                if (top - d) % 2 != 0 {
                    sigma_parity = false;
                }
                if d == top && a.iter().sum::<u32>() == 1 {
                    linear_top.insert(a.iter().position(|&e| e == 1).expect("linear"), c.clone());
                }
            }
            // The g^e structure constants govern pairs of centralizer generators only.
            let governed = Some(r.i) != self.extra && Some(r.j) != self.extra;
            let expect = self.alpha.get(&(r.i, r.j)).cloned().unwrap_or_default();
            if governed && linear_top != expect {
                leading = false;
            }
            if Some(r.i) == self.extra && r.i == r.j {
                let mut want = SparseVec::new();
                if !self.c.is_zero() {
                    want.insert(vec![0; self.names.len()], self.c.clone());
                }
                if r.f != want {
                    odd_square = false;
                }
            }
        }
        RelationReport { pairs: self.entries.len(), leading, degree_bound, sigma_parity, odd_square }
    }
}

/// Result of the relation-table checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    /// Number of tabulated pairs.
    pub pairs: usize,
    /// For centralizer generators, the linear top-degree part of `F_ij`
    /// equals `Σ α_ij^k Θ_k`.
    pub leading: bool,
    /// Every term has degree `≤ m_i + m_j + 2`.
    pub degree_bound: bool,
    /// Every term has degree `≡ m_i + m_j (mod 2)`.
    pub sigma_parity: bool,
    /// `[Θ_extra, Θ_extra] = c` (vacuous without an extra generator).
    pub odd_square: bool,
}

impl RelationReport {
    /// True if every check passed.
    pub fn all(&self) -> bool {
        self.leading && self.degree_bound && self.sigma_parity && self.odd_square
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_data::{build_gl, build_osp12n, element};
    use crate::nilpotent_frame::FrameOptions;

    fn osp_frame() -> NilpotentFrame {
        let g = build_osp12n(1).unwrap();
        let e = crate::algebra_data::osp12_regular_nilpotent(&g).unwrap();
        NilpotentFrame::new(&g, &e, FrameOptions::default()).unwrap()
    }

    #[test]
    fn hilbert_counts_small() {
        let c = hilbert_counts(&[(2, false), (1, true)], 4);
        assert_eq!(c.values().copied().collect::<Vec<_>>(), vec![1, 1, 1, 1, 1]);
        let c = hilbert_counts(&[(2, false), (2, false)], 4);
        assert_eq!(c.values().copied().collect::<Vec<_>>(), vec![1, 0, 2, 0, 3]);
    }

    #[test]
    fn osp_regular_pbw_and_relations() {
        let frame = osp_frame();
        let w = WAlgebra::compute(&frame, 8, Exec::default()).unwrap();
        assert_eq!(w.ngens(), 3);
        assert!(w.generator_report().unwrap().all());
        let pbw = w.pbw_check();
        assert!(pbw.all(), "{pbw:?}");
        let table = w.commutator_table().unwrap();
        let rep = table.check();
        assert!(rep.all(), "{rep:?}");
    }

    #[test]
    fn zero_nilpotent_gives_enveloping_algebra() {
        let g = build_gl(1, 1).unwrap();
        let frame = NilpotentFrame::new(&g, &g.zero(), FrameOptions::default()).unwrap();
        let w = WAlgebra::compute(&frame, 4, Exec::Sequential).unwrap();
        assert_eq!(w.ngens(), 4);
        for gen in &w.gens {
            assert_eq!(gen.theta, w.model.mono_elem(&w.model.letter_mono(gen.letter)));
        }
        assert!(w.pbw_check().all());
    }

    #[test]
    fn gl21_small_cap_is_reported() {
        let g = build_gl(2, 1).unwrap();
        let e = element(&g, &[("E12", Scalar::one())]).unwrap();
        let frame = NilpotentFrame::new(&g, &e, FrameOptions::default()).unwrap();
        let err = WAlgebra::compute(&frame, 3, Exec::Sequential).unwrap_err();
        assert_eq!(err, Error::DegreeCap { needed: 4, given: 3 });
    }

    #[test]
    fn gl21_pbw_and_weights() {
        let g = build_gl(2, 1).unwrap();
        let e = element(&g, &[("E12", Scalar::one())]).unwrap();
        let frame = NilpotentFrame::new(&g, &e, FrameOptions::default()).unwrap();
        let w = WAlgebra::compute(&frame, 8, Exec::default()).unwrap();
        assert_eq!(w.ngens(), 5);
        assert!(w.generator_report().unwrap().all());
        let pbw = w.pbw_check();
        assert!(pbw.all(), "{pbw:?}");
        let te = te_basis(&frame).unwrap();
        assert_eq!(te.len(), 2);
        let weights = w.weight_normalize(&te).unwrap();
        assert_eq!(weights.len(), 5);
        let table = w.commutator_table().unwrap();
        assert!(table.check().all(), "{:?}", table.check());
        assert!(w.w_prime().unwrap().trivial);
    }

    #[test]
    fn osp_w_prime_identity() {
        let w = WAlgebra::compute(&osp_frame(), 6, Exec::default()).unwrap();
        let rep = w.w_prime().unwrap();
        assert!(rep.all(), "{rep:?}");
        assert!(!rep.trivial);
    }

    #[test]
    fn osp_normalized_frame_has_unit_constant() {
        let g = build_osp12n(1).unwrap();
        let e = crate::algebra_data::osp12_regular_nilpotent(&g).unwrap();
        let frame = NilpotentFrame::new(&g, &e, FrameOptions { allow_extension: true }).unwrap();
        assert!(frame.c.is_one());
        let w = WAlgebra::compute(&frame, 8, Exec::default()).unwrap();
        let table = w.commutator_table().unwrap();
        assert!(table.check().all());
        let n = w.extra_generator().unwrap();
        let sq = table.get(n, n).unwrap();
        assert_eq!(sq.f.values().next(), Some(&Scalar::one()));
    }

    #[test]
    fn osp_cap_ten_pbw() {
        let w = WAlgebra::compute(&osp_frame(), 10, Exec::default()).unwrap();
        assert!(w.pbw_check().all());
    }
}
