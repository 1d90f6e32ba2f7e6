//! Exact scalars.
//!
//! A [`Scalar`] is a rational number, a residue modulo a prime, or an element
//! `a + b·√q` of a quadratic extension of the rationals.  Rationals coerce
//! into either of the other two kinds when combined with them, so code that
//! builds sums starting from [`Scalar::zero`] works uniformly over every field.
//! Combining a prime-field residue with an extension element, two different
//! primes, or two different radicands is a programming error and panics; use
//! the `try_*` methods where the operands are not under the caller's control.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// An exact field element.
#[derive(Clone, Debug)]
pub enum Scalar {
    /// A rational number.
    Q(Rational),
    /// The residue `v` modulo the odd prime `p` (`0 <= v < p`).
    Fp { v: u64, p: u64 },
    /// `a + b·√q` where `q` is a rational that is not a square.
    Quad { a: Rational, b: Rational, q: Rational },
}

use Scalar::{Fp, Quad, Q};

/// Builds a rational from a numerator and a non-zero denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"n"` or `"n/d"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Invalid(format!("not a rational number: {s:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// Formats a rational as `"n"` or `"n/d"`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc: u64 = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Returns true when `p` is a prime (trial division; `p` is small in practice).
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn int_mod(n: &BigInt, p: u64) -> u64 {
    let pb = BigInt::from(p);
    n.mod_floor(&pb).to_u64().expect("residue fits in u64")
}

impl Scalar {
    /// The rational zero; coerces into any field.
    pub fn zero() -> Scalar {
        Q(Rational::zero())
    }

    /// The rational one; coerces into any field.
    pub fn one() -> Scalar {
        Q(Rational::one())
    }

    /// A rational integer.
    pub fn int(n: i64) -> Scalar {
        Q(Rational::from_integer(BigInt::from(n)))
    }

    /// The rational `n/d`.
    pub fn frac(n: i64, d: i64) -> Scalar {
        Q(rat(n, d))
    }

    /// Wraps a rational.
    pub fn from_rational(r: Rational) -> Scalar {
        Q(r)
    }

    /// The residue of `n` modulo the prime `p`.
    pub fn fp(n: i64, p: u64) -> Scalar {
        Fp { v: int_mod(&BigInt::from(n), p), p }
    }

    /// The element `√q` of the quadratic extension `ℚ(√q)`.
    ///
    /// Fails when `q` is zero or a rational square (then no extension is needed).
    pub fn sqrt_of(q: &Rational) -> Result<Scalar> {
        if q.is_zero() {
            return Err(Error::Invalid("radicand must be non-zero".into()));
        }
        if rational_sqrt(q).is_some() {
            return Err(Error::Invalid(format!(
                "{} is a rational square; no extension is needed",
                format_rational(q)
            )));
        }
        Ok(Quad { a: Rational::zero(), b: Rational::one(), q: q.clone() })
    }

    /// Square root inside the current field when it exists exactly.
    ///
    /// Rationals that are squares give rationals; otherwise an extension
    /// element `√q` is returned only if `allow_extension` is set.
    pub fn sqrt(&self, allow_extension: bool) -> Result<Scalar> {
        match self {
            Q(r) => match rational_sqrt(r) {
                Some(s) => Ok(Q(s)),
                None if allow_extension => Scalar::sqrt_of(r),
                None => Err(Error::NeedsExtension(format!("√{}", format_rational(r)))),
            },
            Fp { v, p } => {
                for x in 0..*p {
                    if ((x as u128 * x as u128) % *p as u128) as u64 == *v {
                        return Ok(Fp { v: x, p: *p });
                    }
                }
                Err(Error::NeedsExtension(format!("√{v} mod {p}")))
            }
            Quad { .. } => Err(Error::Unsupported("square roots inside a quadratic extension".into())),
        }
    }

    /// True for the additive identity.
    pub fn is_zero(&self) -> bool {
        match self {
            Q(r) => r.is_zero(),
            Fp { v, .. } => *v == 0,
            Quad { a, b, .. } => a.is_zero() && b.is_zero(),
        }
    }

    /// True for the multiplicative identity.
    pub fn is_one(&self) -> bool {
        match self {
            Q(r) => r.is_one(),
            Fp { v, .. } => *v == 1,
            Quad { a, b, .. } => a.is_one() && b.is_zero(),
        }
    }

    /// The rational value, if this scalar is a rational (or an extension
    /// element with zero irrational part).
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Q(r) => Some(r.clone()),
            Quad { a, b, .. } if b.is_zero() => Some(a.clone()),
            _ => None,
        }
    }

    /// The prime of the field, if this is a prime-field residue.
    pub fn prime(&self) -> Option<u64> {
        match self {
            Fp { p, .. } => Some(*p),
            _ => None,
        }
    }

    /// Reduces a rational (or residue of the same prime) modulo `p`.
    pub fn to_fp(&self, p: u64) -> Result<Scalar> {
        match self {
            Q(r) => {
                let d = int_mod(r.denom(), p);
                if d == 0 {
                    return Err(Error::Inadmissible {
                        p,
                        reason: format!("denominator of {} is divisible by p", format_rational(r)),
                    });
                }
                let n = int_mod(r.numer(), p);
                let dinv = mod_pow(d, p - 2, p);
                Ok(Fp { v: ((n as u128 * dinv as u128) % p as u128) as u64, p })
            }
            Fp { v, p: q } if *q == p => Ok(Fp { v: *v, p }),
            Fp { p: q, .. } => Err(Error::FieldMismatch(format!("F_{q} versus F_{p}"))),
            Quad { a, b, q } if b.is_zero() => Q(a.clone()).to_fp(p).map_err(|e| match e {
                Error::Inadmissible { .. } => e,
                _ => Error::FieldMismatch(format!("ℚ(√{}) to F_{p}", format_rational(q))),
            }),
            Quad { q, .. } => {
                Err(Error::FieldMismatch(format!("ℚ(√{}) element to F_{p}", format_rational(q))))
            }
        }
    }

    /// Symmetric integer representative of a prime-field residue, in `(-p/2, p/2]`.
    pub fn fp_symmetric(&self) -> Option<i64> {
        match self {
            Fp { v, p } => {
                let v = *v as i64;
                let p = *p as i64;
                Some(if v > p / 2 { v - p } else { v })
            }
            _ => None,
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Q(r) => Q(r.recip()),
            Fp { v, p } => Fp { v: mod_pow(*v, p - 2, *p), p: *p },
            Quad { a, b, q } => {
                let norm = a * a - b * b * q;
                Quad { a: a / &norm, b: -(b / &norm), q: q.clone() }
            }
        })
    }

    /// Exact division.
    pub fn try_div(&self, o: &Scalar) -> Result<Scalar> {
        self.try_mul(&o.inv()?)
    }

    /// Integer power (negative exponents invert).
    pub fn pow(&self, e: i64) -> Result<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Scalar::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(acc)
    }

    fn mismatch(&self, o: &Scalar) -> Error {
        Error::FieldMismatch(format!("{} and {}", self.field_name(), o.field_name()))
    }

    /// Short description of the field this scalar lives in.
    pub fn field_name(&self) -> String {
        match self {
            Q(_) => "ℚ".to_string(),
            Fp { p, .. } => format!("F_{p}"),
            Quad { q, .. } => format!("ℚ(√{})", format_rational(q)),
        }
    }

    /// Addition reporting field mismatches as errors.
    pub fn try_add(&self, o: &Scalar) -> Result<Scalar> {
        Ok(match (self, o) {
            (Q(x), Q(y)) => Q(x + y),
            (Fp { v, p }, Fp { v: w, p: p2 }) if p == p2 => Fp { v: (v + w) % p, p: *p },
            (Fp { p, .. }, Q(_)) => return self.try_add(&o.to_fp(*p)?),
            (Q(_), Fp { p, .. }) => return self.to_fp(*p)?.try_add(o),
            (Quad { a, b, q }, Quad { a: c, b: d, q: q2 }) if q == q2 => {
                Quad { a: a + c, b: b + d, q: q.clone() }
            }
            (Quad { a, b, q }, Q(y)) | (Q(y), Quad { a, b, q }) => {
                Quad { a: a + y, b: b.clone(), q: q.clone() }
            }
            _ => return Err(self.mismatch(o)),
        })
    }

    /// Multiplication reporting field mismatches as errors.
    pub fn try_mul(&self, o: &Scalar) -> Result<Scalar> {
        Ok(match (self, o) {
            (Q(x), Q(y)) => Q(x * y),
            (Fp { v, p }, Fp { v: w, p: p2 }) if p == p2 => {
                Fp { v: ((*v as u128 * *w as u128) % *p as u128) as u64, p: *p }
            }
            (Fp { p, .. }, Q(_)) => return self.try_mul(&o.to_fp(*p)?),
            (Q(_), Fp { p, .. }) => return self.to_fp(*p)?.try_mul(o),
            (Quad { a, b, q }, Quad { a: c, b: d, q: q2 }) if q == q2 => Quad {
                a: a * c + b * d * q,
                b: a * d + b * c,
                q: q.clone(),
            },
            (Quad { a, b, q }, Q(y)) | (Q(y), Quad { a, b, q }) => {
                Quad { a: a * y, b: b * y, q: q.clone() }
            }
            _ => return Err(self.mismatch(o)),
        })
    }

    /// Additive inverse.
    pub fn neg_ref(&self) -> Scalar {
        match self {
            Q(x) => Q(-x),
            Fp { v, p } => Fp { v: (p - v) % p, p: *p },
            Quad { a, b, q } => Quad { a: -a, b: -b, q: q.clone() },
        }
    }

    /// Exact equality reporting field mismatches as errors.
    pub fn try_eq(&self, o: &Scalar) -> Result<bool> {
        Ok(self.try_add(&o.neg_ref())?.is_zero())
    }

    /// Canonical text form: `"n"`, `"n/d"`, residues as integers in `[0,p)`,
    /// and extension elements as `"a+b*sqrt(q)"`.
    pub fn to_canonical_string(&self) -> String {
        match self {
            Q(r) => format_rational(r),
            Fp { v, .. } => v.to_string(),
            Quad { a, b, q } => {
                if b.is_zero() {
                    format_rational(a)
                } else {
                    format!("{}+{}*sqrt({})", format_rational(a), format_rational(b), format_rational(q))
                }
            }
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Scalar) -> bool {
        self.try_eq(o).unwrap_or(false)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Scalar {
        Q(r)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, o: &'a Scalar) -> Scalar {
                self.$imp(o).unwrap_or_else(|e| panic!("scalar arithmetic: {e}"))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &'a Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}

trait SubImpl {
    fn try_sub(&self, o: &Scalar) -> Result<Scalar>;
}
impl SubImpl for Scalar {
    fn try_sub(&self, o: &Scalar) -> Result<Scalar> {
        self.try_add(&o.neg_ref())
    }
}

binop!(Add, add, try_add);
binop!(Mul, mul, try_mul);
binop!(Sub, sub, try_sub);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rational_coerces_into_prime_field() {
        let x = Scalar::frac(1, 2) + Scalar::fp(1, 5);
        // 1/2 = 3 mod 5, so 1/2 + 1 = 4 mod 5.
        assert_eq!(x, Scalar::fp(4, 5));
        assert_eq!(x.prime(), Some(5));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(Scalar::zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(Scalar::fp(5, 5).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn quadratic_extension_arithmetic() {
        let s = Scalar::sqrt_of(&rat(2, 1)).unwrap();
        assert_eq!(&s * &s, Scalar::int(2));
        let x = Scalar::int(1) + s.clone();
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert!(Scalar::sqrt_of(&rat(4, 9)).is_err());
    }

    #[test]
    fn mixing_fields_is_rejected() {
        let s = Scalar::sqrt_of(&rat(3, 1)).unwrap();
        assert!(s.try_add(&Scalar::fp(1, 7)).is_err());
        assert!(Scalar::fp(1, 7).try_mul(&Scalar::fp(1, 5)).is_err());
    }

    #[test]
    fn parse_and_format_round_trip() {
        let r = parse_rational("-6/4").unwrap();
        assert_eq!(format_rational(&r), "-3/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn sqrt_of_squares_stays_rational() {
        assert_eq!(Scalar::frac(9, 4).sqrt(false).unwrap(), Scalar::frac(3, 2));
        assert!(Scalar::int(2).sqrt(false).is_err());
        assert_eq!(Scalar::fp(4, 7).sqrt(false).map(|s| &s * &s).unwrap(), Scalar::fp(4, 7));
    }

    proptest! {
        #[test]
        fn field_axioms_over_fp(a in 0i64..101, b in 0i64..101, c in 1i64..101) {
            let p = 101;
            let (a, b, c) = (Scalar::fp(a, p), Scalar::fp(b, p), Scalar::fp(c, p));
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert!((&c * &c.inv().unwrap()).is_one());
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
        }

        #[test]
        fn field_axioms_over_extension(a in -20i64..20, b in -20i64..20, c in 1i64..20, d in -20i64..20) {
            let s = Scalar::sqrt_of(&rat(5, 1)).unwrap();
            let x = Scalar::int(a) + &Scalar::int(b) * &s;
            let y = Scalar::int(c) + &Scalar::int(d) * &s;
            let z = &x * &y;
            prop_assert_eq!(z.try_div(&y).unwrap(), x);
        }
    }
}
