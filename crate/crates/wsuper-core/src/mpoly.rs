//! Sparse commutative multivariate polynomials over exact scalars.
//!
//! Used for the polynomial systems whose points parametrize small
//! representations: variables are named, terms are keyed by exponent
//! vectors, and evaluation works over any scalar field (rationals are coerced
//! into `F_p` when evaluated at `F_p` points).

use crate::linalg::SparseVec;
use crate::scalar::Scalar;
use std::fmt;

/// A polynomial in `nvars` commuting variables.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct MPoly {
    nvars: usize,
    terms: SparseVec<Vec<u32>>,
}

impl MPoly {
    /// The zero polynomial.
    pub fn zero(nvars: usize) -> MPoly {
        MPoly { nvars, terms: SparseVec::new() }
    }

    /// A constant.
    pub fn constant(nvars: usize, c: Scalar) -> MPoly {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    /// The variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> MPoly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = MPoly::zero(nvars);
        p.terms.insert(e, Scalar::one());
        p
    }

    /// Number of variables.
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms as exponent vector → coefficient.
    pub fn terms(&self) -> &SparseVec<Vec<u32>> {
        &self.terms
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant coefficient.
    pub fn constant_term(&self) -> Scalar {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(Scalar::zero)
    }

    /// True if the polynomial is a non-zero constant.
    pub fn is_nonzero_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Total degree (`None` for zero).
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// `self + o`.
    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        crate::linalg::sparse_axpy(&mut r.terms, &Scalar::one(), &o.terms);
        r
    }

    /// `self − o`.
    pub fn sub(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        crate::linalg::sparse_axpy(&mut r.terms, &Scalar::int(-1), &o.terms);
        r
    }

    /// `c · self`.
    pub fn scale(&self, c: &Scalar) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        crate::linalg::sparse_axpy(&mut r.terms, c, &self.terms);
        r
    }

    /// `self · o`.
    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (a, c) in &self.terms {
            for (b, d) in &o.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let mut t = SparseVec::new();
                t.insert(e, c * d);
                crate::linalg::sparse_axpy(&mut r.terms, &Scalar::one(), &t);
            }
        }
        r
    }

    /// Evaluates at a point (one scalar per variable).
    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, k) in x.iter().zip(e) {
                for _ in 0..*k {
                    t = &t * xi;
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Reduces every coefficient into `F_p` (`None` if a denominator is divisible by `p`).
    pub fn to_fp(&self, p: u64) -> Option<MPoly> {
        let mut r = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let c = c.to_fp(p).ok()?;
            if !c.is_zero() {
                r.terms.insert(e.clone(), c);
            }
        }
        Some(r)
    }

    /// Text form with the given variable names.
    pub fn format(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .zip(names)
                    .filter(|(k, _)| **k > 0)
                    .map(|(k, n)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
                    .collect();
                if vars.is_empty() {
                    c.to_canonical_string()
                } else {
                    format!("{} * {}", c.to_canonical_string(), vars.join(" "))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("t{i}")).collect();
        write!(f, "{}", self.format(&names))
    }
}

/// A 2×2 matrix of polynomials (row-major).
pub type PolyMat2 = [[MPoly; 2]; 2];

/// Product of 2×2 polynomial matrices.
pub fn mat2_mul(a: &PolyMat2, b: &PolyMat2) -> PolyMat2 {
    let entry = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

/// `a + c·b` entrywise.
pub fn mat2_axpy(a: &PolyMat2, c: &Scalar, b: &PolyMat2) -> PolyMat2 {
    let entry = |i: usize, j: usize| a[i][j].add(&b[i][j].scale(c));
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

/// The identity matrix.
pub fn mat2_identity(nvars: usize) -> PolyMat2 {
    let one = MPoly::constant(nvars, Scalar::one());
    let z = MPoly::zero(nvars);
    [[one.clone(), z.clone()], [z, one]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn arithmetic_and_evaluation() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p = x.mul(&x).sub(&y.scale(&Scalar::int(3))).add(&MPoly::constant(2, Scalar::int(2)));
        assert_eq!(p.eval(&[Scalar::int(2), Scalar::int(1)]), Scalar::int(3));
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.constant_term(), Scalar::int(2));
        let names = vec!["X".to_string(), "Y".to_string()];
        assert_eq!(p.format(&names), "2 + -3 * Y + 1 * X^2");
    }

    #[test]
    fn reduction_mod_p() {
        let p = MPoly::constant(1, Scalar::frac(1, 2)).add(&MPoly::var(1, 0));
        let q = p.to_fp(5).unwrap();
        assert_eq!(q.eval(&[Scalar::fp(2, 5)]), Scalar::fp(0, 5));
        assert!(p.to_fp(2).is_none());
    }

    proptest! {
        #[test]
        fn product_evaluates_to_product(a in -5i64..5, b in -5i64..5, c in -5i64..5, x in -4i64..4, y in -4i64..4) {
            let p = MPoly::var(2, 0).scale(&Scalar::int(a)).add(&MPoly::constant(2, Scalar::int(b)));
            let q = MPoly::var(2, 1).scale(&Scalar::int(c)).add(&MPoly::var(2, 0));
            let pt = [Scalar::int(x), Scalar::int(y)];
            prop_assert_eq!(p.mul(&q).eval(&pt), &p.eval(&pt) * &q.eval(&pt));
        }
    }
}
