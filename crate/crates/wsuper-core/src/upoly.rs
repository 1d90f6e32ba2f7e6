//! Dense univariate polynomials over exact scalars.
//!
//! Coefficients are stored lowest degree first.  The main consumer is the
//! eigenvalue search used for gradings, toral decompositions and Jordan
//! decompositions, which needs square-free parts and rational roots.

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A univariate polynomial, lowest coefficient first, without trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly {
    coeffs: Vec<Scalar>,
}

impl UPoly {
    /// Builds a polynomial, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<Scalar>) -> UPoly {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    /// Coefficients, lowest first.
    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Degree (`None` for the zero polynomial).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Evaluates at `x`.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Scalar::int(i as i64))
                .collect(),
        )
    }

    /// Division with remainder.
    pub fn divrem(&self, d: &UPoly) -> Result<(UPoly, UPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.coeffs[dd].inv()?;
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Scalar::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1;
            let c = &rem[k] * &lead_inv;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    rem[k - dd + i] = &rem[k - dd + i] - &(&c * dc);
                }
                quo[k - dd] = c;
            }
            rem.pop();
        }
        Ok((UPoly::new(quo), UPoly::new(rem)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("non-zero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scales to leading coefficient one (zero stays zero).
    pub fn monic(&self) -> UPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv().expect("non-zero leading coefficient");
                UPoly::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    /// The square-free part `P / gcd(P, P')` (characteristic zero).
    pub fn squarefree(&self) -> UPoly {
        let g = self.gcd(&self.derivative());
        self.divrem(&g).expect("non-zero gcd").0.monic()
    }

    /// Distinct rational roots of a polynomial with rational coefficients.
    ///
    /// Returns the roots together with the degree of the part that has no
    /// rational roots (0 when the polynomial splits over ℚ).
    pub fn rational_roots(&self) -> Result<(Vec<Rational>, usize)> {
        if self.is_zero() {
            return Err(Error::Invalid("roots of the zero polynomial".into()));
        }
        let mut p = self.squarefree();
        let mut roots = Vec::new();
        if p.coeffs[0].is_zero() {
            roots.push(Rational::zero());
            p = UPoly::new(p.coeffs[1..].to_vec());
        }
        if p.degree() == Some(0) {
            return Ok((roots, 0));
        }
        let ints = integer_coeffs(&p)?;
        let a0 = ints[0].abs();
        let an = ints.last().expect("non-constant").abs();
        let nums = divisors(&a0)?;
        let dens = divisors(&an)?;
        let mut cands: Vec<Rational> = Vec::new();
        for n in &nums {
            for d in &dens {
                for s in [1i64, -1] {
                    let r = Rational::new(n * BigInt::from(s), d.clone());
                    if !cands.contains(&r) {
                        cands.push(r);
                    }
                }
            }
        }
        cands.sort();
        for r in cands {
            if p.degree() == Some(0) {
                break;
            }
            let x = Scalar::from_rational(r.clone());
            if p.eval(&x).is_zero() {
                let lin = UPoly::new(vec![-x, Scalar::one()]);
                p = p.divrem(&lin)?.0;
                roots.push(r);
            }
        }
        roots.sort();
        Ok((roots, p.degree().unwrap_or(0)))
    }
}

fn integer_coeffs(p: &UPoly) -> Result<Vec<BigInt>> {
    let rats: Vec<Rational> = p
        .coeffs
        .iter()
        .map(|c| c.as_rational().ok_or_else(|| Error::Unsupported("roots over a non-rational field".into())))
        .collect::<Result<_>>()?;
    let lcm = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|r| (r * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Ok(ints.into_iter().map(|x| x / &g).collect())
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let mut n = n
        .to_u64()
        .ok_or_else(|| Error::Unsupported("coefficient too large for the rational root search".into()))?;
    let mut primes: Vec<(u64, u32)> = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            primes.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        primes.push((n, 1));
    }
    let mut divs = vec![1u64];
    for (p, e) in primes {
        let cur = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divs.extend(cur.iter().map(|x| x * pk));
        }
    }
    divs.sort_unstable();
    Ok(divs.into_iter().map(BigInt::from).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn poly(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&x| Scalar::int(x)).collect())
    }

    #[test]
    fn roots_of_split_polynomial() {
        // (t − 2)^2 (t + 1/2) t = t^4 − 7/2 t^3 + 2 t^2 + 2 t   → scaled by 2
        let p = poly(&[0, 4, 4, -7, 2]);
        let (r, rest) = p.rational_roots().unwrap();
        assert_eq!(r, vec![rat(-1, 2), rat(0, 1), rat(2, 1)]);
        assert_eq!(rest, 0);
    }

    #[test]
    fn irrational_part_is_reported() {
        let p = poly(&[-2, 0, 1]);
        let (r, rest) = p.rational_roots().unwrap();
        assert!(r.is_empty());
        assert_eq!(rest, 2);
    }

    #[test]
    fn gcd_and_division() {
        let a = poly(&[-1, 0, 1]);
        let b = poly(&[1, 1]);
        assert_eq!(a.gcd(&b), b);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q, poly(&[-1, 1]));
        assert!(r.is_zero());
    }
}
