//! Polynomial systems parametrizing one- and two-dimensional representations.
//!
//! Given a relation table, a candidate representation assigns a matrix to
//! each generator; substituting into `[Θ_i, Θ_j] = F_ij(Θ)` yields ordinary
//! polynomial equations in the matrix entries.
//!
//! * One-dimensional: odd generators act by zero, so each `F_ij` loses every
//!   monomial containing an odd generator; the remaining polynomials `F′_ij`
//!   in the even variables `X_1, …, X_l` must vanish.
//! * Two-dimensional on `k v ⊕ k w` (`v` even, `w` odd): an even generator
//!   acts diagonally as `diag(X0_i, Y1_i)` and an odd one as
//!   `[[0, Y0_i], [X1_i, 0]]`; the four matrix entries of each relation give
//!   the polynomials `A_ij, B_ij, C_ij, D_ij`.
//!
//! Points are verified exactly; small systems can be searched exhaustively
//! over `F_p`, and modular points are lifted to small rationals when possible.

use super::RelationTable;
use crate::error::{Error, Result};
use crate::exec::{par_range, Exec};
use crate::mpoly::{mat2_axpy, mat2_identity, mat2_mul, MPoly, PolyMat2};
use crate::scalar::{Rational, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;

/// Which representation ansatz a system encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepVariant {
    /// One-dimensional representations.
    OneDim,
    /// Two-dimensional representations with one even and one odd basis vector.
    TwoDim,
}

/// A named polynomial equation `poly = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct RepEquation {
    /// Label such as `F'_12` or `B_13`.
    pub label: String,
    /// The polynomial.
    pub poly: MPoly,
}

/// A polynomial system whose zeros are representations.
#[derive(Clone, Debug, PartialEq)]
pub struct RepSystem {
    /// The ansatz.
    pub variant: RepVariant,
    /// Variable names.
    pub vars: Vec<String>,
    /// Non-trivial equations.
    pub equations: Vec<RepEquation>,
    /// Labels of pairs whose equations vanish identically.
    pub vacuous: Vec<String>,
    /// A non-zero constant equation, if present (a proof of infeasibility).
    pub obstruction: Option<String>,
}

impl RepSystem {
    /// Exact residuals of every equation at a point.
    pub fn residuals(&self, point: &[Scalar]) -> Result<Vec<Scalar>> {
        if point.len() != self.vars.len() {
            return Err(Error::Dimension(format!("point has {} coordinates, expected {}", point.len(), self.vars.len())));
        }
        Ok(self.equations.iter().map(|e| e.poly.eval(point)).collect())
    }

    /// True if every equation vanishes at the point.
    pub fn verify(&self, point: &[Scalar]) -> Result<bool> {
        Ok(self.residuals(point)?.iter().all(Scalar::is_zero))
    }

    /// Human-readable form, one equation per line.
    pub fn format(&self) -> String {
        let mut out = String::new();
        for e in &self.equations {
            out.push_str(&format!("{}: {} = 0\n", e.label, e.poly.format(&self.vars)));
        }
        out
    }
}

fn is_odd_gen(t: &RelationTable, k: usize) -> bool {
    t.parities[k].is_odd()
}

/// Builds the one-dimensional system from the pairs `i < j ≤ l` and
/// `l < i ≤ j` (1-based); mixed pairs are recorded as vacuous when their
/// reduced polynomial vanishes.
pub fn onedim_system(t: &RelationTable) -> RepSystem {
    let n = t.names.len();
    let even: Vec<usize> = (0..n).filter(|&k| !is_odd_gen(t, k)).collect();
    let vars: Vec<String> = even.iter().map(|k| format!("X_{}", k + 1)).collect();
    let nv = vars.len();
    let mut equations = Vec::new();
    let mut vacuous = Vec::new();
    let mut obstruction = None;
    for r in &t.entries {
        let label = format!("F'_{}{}", r.i + 1, r.j + 1);
        let mut p = MPoly::zero(nv);
        for (a, c) in &r.f {
            if a.iter().enumerate().any(|(k, e)| *e > 0 && is_odd_gen(t, k)) {
                continue;
            }
            let mut term = MPoly::constant(nv, c.clone());
            for (vi, &k) in even.iter().enumerate() {
                for _ in 0..a[k] {
                    term = term.mul(&MPoly::var(nv, vi));
                }
            }
            p = p.add(&term);
        }
        let mixed = is_odd_gen(t, r.i) != is_odd_gen(t, r.j);
        if p.is_zero() {
            vacuous.push(label);
            continue;
        }
        if mixed {
            // A mixed pair is an odd relation; its reduction is always zero.
            vacuous.push(format!("{label} (unexpected non-zero reduction)"));
        }
        if p.is_nonzero_constant() && obstruction.is_none() {
            obstruction = Some(format!("{label} reduces to the non-zero constant {}", p.constant_term()));
        }
        equations.push(RepEquation { label, poly: p });
    }
    RepSystem { variant: RepVariant::OneDim, vars, equations, vacuous, obstruction }
}

/// Builds the two-dimensional system.
pub fn twodim_system(t: &RelationTable) -> RepSystem {
    let n = t.names.len();
    let mut vars = Vec::new();
    let mut slots = Vec::new();
    for k in 0..n {
        let idx = vars.len();
        if is_odd_gen(t, k) {
            vars.push(format!("Y0_{}", k + 1));
            vars.push(format!("X1_{}", k + 1));
        } else {
            vars.push(format!("X0_{}", k + 1));
            vars.push(format!("Y1_{}", k + 1));
        }
        slots.push(idx);
    }
    let nv = vars.len();
    let rho: Vec<PolyMat2> = (0..n)
        .map(|k| {
            let a = MPoly::var(nv, slots[k]);
            let b = MPoly::var(nv, slots[k] + 1);
            let z = MPoly::zero(nv);
            if is_odd_gen(t, k) {
                [[z.clone(), a], [b, z]]
            } else {
                [[a, z.clone()], [z, b]]
            }
        })
        .collect();
    let mono_mat = |a: &[u32]| {
        let mut m = mat2_identity(nv);
        for (k, e) in a.iter().enumerate() {
            for _ in 0..*e {
                m = mat2_mul(&m, &rho[k]);
            }
        }
        m
    };
    let mut equations = Vec::new();
    let mut vacuous = Vec::new();
    let mut obstruction = None;
    for r in &t.entries {
        let sign = if is_odd_gen(t, r.i) && is_odd_gen(t, r.j) { Scalar::one() } else { Scalar::int(-1) };
        let mut lhs = mat2_axpy(&mat2_mul(&rho[r.i], &rho[r.j]), &sign, &mat2_mul(&rho[r.j], &rho[r.i]));
        for (a, c) in &r.f {
            lhs = mat2_axpy(&lhs, &(-c), &mono_mat(a));
        }
        for (name, (x, y)) in ["A", "B", "C", "D"].iter().zip([(0, 0), (0, 1), (1, 0), (1, 1)]) {
            let label = format!("{name}_{}{}", r.i + 1, r.j + 1);
            let p = lhs[x][y].clone();
            if p.is_zero() {
                vacuous.push(label);
            } else {
                if p.is_nonzero_constant() && obstruction.is_none() {
                    obstruction = Some(format!("{label} reduces to a non-zero constant"));
                }
                equations.push(RepEquation { label, poly: p });
            }
        }
    }
    RepSystem { variant: RepVariant::TwoDim, vars, equations, vacuous, obstruction }
}

/// Hard limit on the number of points an exhaustive search may visit.
pub const SEARCH_LIMIT: u64 = 50_000_000;

/// Result of an exhaustive modular search.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularSearch {
    /// The prime.
    pub p: u64,
    /// Number of points visited.
    pub visited: u64,
    /// Number of solutions found.
    pub count: u64,
    /// The first solutions in enumeration order (at most `keep`).
    pub solutions: Vec<Vec<Scalar>>,
}

/// Enumerates `F_p^n` and returns the zeros of the system.
pub fn search_rep_modular(sys: &RepSystem, p: u64, keep: usize, exec: Exec) -> Result<ModularSearch> {
    if !crate::scalar::is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    let nv = sys.vars.len() as u32;
    let total = p.checked_pow(nv).filter(|&t| t <= SEARCH_LIMIT).ok_or_else(|| {
        Error::SearchTooLarge(format!("{p}^{nv} points exceed the limit of {SEARCH_LIMIT}"))
    })?;
    let polys: Vec<MPoly> = sys
        .equations
        .iter()
        .map(|e| e.poly.to_fp(p).ok_or_else(|| Error::Inadmissible { p, reason: "coefficient denominator".into() }))
        .collect::<Result<_>>()?;
    if nv == 0 {
        let ok = polys.iter().all(|q| q.is_zero());
        return Ok(ModularSearch { p, visited: 1, count: ok as u64, solutions: if ok { vec![vec![]] } else { vec![] } });
    }
    let chunk = total / p;
    let parts = par_range(exec, p as usize, |first| {
        let mut sols = Vec::new();
        let mut count = 0u64;
        for idx in 0..chunk {
            let mut rest = idx;
            let mut pt = Vec::with_capacity(nv as usize);
            pt.push(Scalar::fp(first as i64, p));
            for _ in 1..nv {
                pt.push(Scalar::fp((rest % p) as i64, p));
                rest /= p;
            }
            if polys.iter().all(|q| q.eval(&pt).is_zero()) {
                count += 1;
                if sols.len() < keep {
                    sols.push(pt);
                }
            }
        }
        (count, sols)
    });
    let mut count = 0;
    let mut solutions = Vec::new();
    for (c, s) in parts {
        count += c;
        for pt in s {
            if solutions.len() < keep {
                solutions.push(pt);
            }
        }
    }
    Ok(ModularSearch { p, visited: total, count, solutions })
}

/// Rationals `a/b` with `|a|, b ≤ height`, `p ∤ b`, reducing to `r` mod `p`,
/// ordered by height.
pub fn small_lifts(r: &Scalar, p: u64, height: i64) -> Vec<Rational> {
    let target = r.fp_symmetric().unwrap_or(0).rem_euclid(p as i64);
    let mut out = Vec::new();
    for h in 0..=height {
        for b in 1..=h.max(1) {
            for a in -h..=h {
                if a.abs().max(b) != h && !(h == 0 && a == 0) {
                    continue;
                }
                if b % p as i64 == 0 || a.gcd(&b) != 1 && a != 0 {
                    continue;
                }
                if a == 0 && b != 1 {
                    continue;
                }
                let inv = Scalar::fp(b, p).inv().expect("unit");
                let v = &Scalar::fp(a, p) * &inv;
                if v.fp_symmetric().unwrap_or(0).rem_euclid(p as i64) == target {
                    let q = Rational::new(BigInt::from(a), BigInt::from(b));
                    if !out.contains(&q) {
                        out.push(q);
                    }
                }
            }
        }
    }
    out
}

/// Tries to lift a modular zero to an exact rational zero with small
/// numerators and denominators (at most `budget` candidate points).
pub fn lift_solution(sys: &RepSystem, point: &[Scalar], p: u64, height: i64, budget: usize) -> Option<Vec<Scalar>> {
    let cands: Vec<Vec<Rational>> = point.iter().map(|c| small_lifts(c, p, height)).collect();
    if cands.iter().any(Vec::is_empty) {
        return None;
    }
    let mut idx = vec![0usize; cands.len()];
    for _ in 0..budget {
        let pt: Vec<Scalar> = idx.iter().zip(&cands).map(|(&i, c)| Scalar::from_rational(c[i].clone())).collect();
        if sys.verify(&pt).unwrap_or(false) {
            return Some(pt);
        }
        // Odometer increment.
        let mut k = 0;
        loop {
            if k == idx.len() {
                return None;
            }
            idx[k] += 1;
            if idx[k] < cands[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
    None
}

/// Searches modularly, then lifts the first liftable solution.
pub fn find_rational_point(sys: &RepSystem, p: u64, exec: Exec) -> Result<(ModularSearch, Option<Vec<Scalar>>)> {
    let search = search_rep_modular(sys, p, 512, exec)?;
    let lifted = search.solutions.iter().find_map(|pt| lift_solution(sys, pt, p, 4, 20_000));
    Ok((search, lifted))
}

/// `(number of even generators, number of non-trivial one-dimensional relations)`.
pub fn abelianization_dims(t: &RelationTable) -> (usize, usize) {
    let sys = onedim_system(t);
    (sys.vars.len(), sys.equations.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_data::{build_gl, build_osp12n, element, osp12_regular_nilpotent};
    use crate::nilpotent_frame::{FrameOptions, NilpotentFrame};
    use crate::walgebra::WAlgebra;

    fn osp_table() -> RelationTable {
        let g = build_osp12n(1).unwrap();
        let e = osp12_regular_nilpotent(&g).unwrap();
        let frame = NilpotentFrame::new(&g, &e, FrameOptions::default()).unwrap();
        WAlgebra::compute(&frame, 8, Exec::default()).unwrap().commutator_table().unwrap()
    }

    #[test]
    fn osp_has_no_onedim_but_a_twodim_representation() {
        let t = osp_table();
        let one = onedim_system(&t);
        assert!(one.obstruction.is_some());
        let s = search_rep_modular(&one, 5, 4, Exec::default()).unwrap();
        assert_eq!(s.count, 0);
        let two = twodim_system(&t);
        let (search, lifted) = find_rational_point(&two, 5, Exec::default()).unwrap();
        assert!(search.count > 0);
        let pt = lifted.expect("a small rational point");
        assert!(two.verify(&pt).unwrap());
        // Negative control: the zero point fails (Θ_extra² = c/2 ≠ 0).
        assert!(!two.verify(&vec![Scalar::zero(); two.vars.len()]).unwrap());
    }

    #[test]
    fn mixed_pairs_are_vacuous() {
        let t = osp_table();
        let one = onedim_system(&t);
        assert!(one.vacuous.iter().all(|l| !l.contains("unexpected")));
        assert!(one.vacuous.contains(&"F'_12".to_string()));
    }

    #[test]
    fn gl21_onedim_system_is_solved_by_zero() {
        let g = build_gl(2, 1).unwrap();
        let e = element(&g, &[("E12", Scalar::one())]).unwrap();
        let frame = NilpotentFrame::new(&g, &e, FrameOptions::default()).unwrap();
        let t = WAlgebra::compute(&frame, 8, Exec::default()).unwrap().commutator_table().unwrap();
        let one = onedim_system(&t);
        assert!(one.obstruction.is_none());
        assert!(one.verify(&vec![Scalar::zero(); one.vars.len()]).unwrap());
        assert_eq!(abelianization_dims(&t).0, 3);
    }

    #[test]
    fn lifts_are_small_rationals() {
        let l = small_lifts(&Scalar::fp(3, 5), 5, 2);
        assert!(l.contains(&Rational::new(BigInt::from(1), BigInt::from(2))));
        assert!(l.contains(&Rational::new(BigInt::from(-2), BigInt::from(1))));
    }

    #[test]
    fn oversized_search_is_refused() {
        let sys = RepSystem {
            variant: RepVariant::OneDim,
            vars: (0..20).map(|i| format!("X_{i}")).collect(),
            equations: vec![],
            vacuous: vec![],
            obstruction: None,
        };
        assert!(matches!(search_rep_modular(&sys, 7, 1, Exec::Sequential), Err(Error::SearchTooLarge(_))));
    }
}
