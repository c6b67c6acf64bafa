//! Exact arithmetic in the coefficient ring `Q[q, q^-1]`: Laurent polynomials
//! in the deformation symbol `q` with arbitrary-precision rational
//! coefficients.
//!
//! Every identity check in this crate bottoms out in this ring, so the
//! arithmetic is exact end to end; a single rounding error would falsify a
//! zero test. Exponents are machine integers checked for overflow, which is
//! unreachable at desk scale but a hard error rather than a wraparound.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Errors surfaced by scalar operations.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ScalarError {
    /// Inversion is defined only for a single nonzero monomial `c*q^k`.
    /// Hitting this from rule orientation signals a malformed relation set:
    /// every relation coefficient is a unit monomial.
    #[error("not a unit monomial: {0}")]
    NonUnit(String),
    /// Evaluation at `q = 0` is undefined in the presence of negative
    /// exponents.
    #[error("cannot evaluate a negative q-exponent at q = 0")]
    ZeroBase,
}

/// Arbitrary-precision rational, always reduced, denominator positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "rational with zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Multiplicative inverse. Panics on zero; callers guard via `is_zero`.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    /// Integer power, negative exponents through the reciprocal.
    pub fn pow(&self, k: i64) -> Result<Self, ScalarError> {
        if k == 0 {
            return Ok(Rational::one());
        }
        let base = if k < 0 {
            if self.is_zero() {
                return Err(ScalarError::ZeroBase);
            }
            self.recip()
        } else {
            self.clone()
        };
        let mut acc = Rational::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        Rational(&self.0 - &rhs.0)
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational(&self.0 * &rhs.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.0)
    }
}

/// Laurent polynomial in `q` over [`Rational`]. The term map never stores a
/// zero coefficient, and equality is structural equality of the maps.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LaurentScalar {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentScalar {
    pub fn zero() -> Self {
        LaurentScalar::default()
    }

    pub fn one() -> Self {
        LaurentScalar::monomial(Rational::one(), 0)
    }

    /// The symbol `q` itself.
    pub fn q() -> Self {
        LaurentScalar::monomial(Rational::one(), 1)
    }

    pub fn q_pow(k: i64) -> Self {
        LaurentScalar::monomial(Rational::one(), k)
    }

    pub fn monomial(coeff: Rational, exp: i64) -> Self {
        let mut s = LaurentScalar::zero();
        s.add_term(exp, coeff);
        s
    }

    pub fn from_rational(r: Rational) -> Self {
        LaurentScalar::monomial(r, 0)
    }

    pub fn from_int(n: i64) -> Self {
        LaurentScalar::from_rational(Rational::integer(n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&0)
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Rational)> {
        self.terms.iter()
    }

    /// If the scalar is a single monomial `c*q^k`, returns `(c, k)`.
    pub fn as_unit_monomial(&self) -> Option<(&Rational, i64)> {
        if self.terms.len() == 1 {
            let (k, c) = self.terms.iter().next().unwrap();
            Some((c, *k))
        } else {
            None
        }
    }

    fn add_term(&mut self, exp: i64, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(c) => {
                let sum = &*c + &coeff;
                if sum.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.terms.insert(exp, coeff);
            }
        }
    }

    /// Inverse of a unit monomial `c*q^k -> (1/c)*q^-k`.
    pub fn invert(&self) -> Result<Self, ScalarError> {
        match self.as_unit_monomial() {
            Some((c, k)) => {
                let neg = k.checked_neg().expect("q-exponent overflow");
                Ok(LaurentScalar::monomial(c.recip(), neg))
            }
            None => Err(ScalarError::NonUnit(self.to_string())),
        }
    }

    /// Substitute `q = 1`: the sum of all coefficients. A ring homomorphism.
    pub fn eval_at_one(&self) -> Rational {
        self.terms
            .values()
            .fold(Rational::zero(), |acc, c| &acc + c)
    }

    /// Substitute an arbitrary nonzero rational for `q`.
    pub fn eval_at(&self, value: &Rational) -> Result<Rational, ScalarError> {
        let mut acc = Rational::zero();
        for (k, c) in &self.terms {
            if *k < 0 && value.is_zero() {
                return Err(ScalarError::ZeroBase);
            }
            acc = &acc + &(c * &value.pow(*k)?);
        }
        Ok(acc)
    }

    /// The constant scalar obtained by specializing at `q = 1`.
    pub fn specialized_at_one(&self) -> LaurentScalar {
        LaurentScalar::from_rational(self.eval_at_one())
    }
}

impl Add for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &LaurentScalar) -> LaurentScalar {
        self + &(-rhs)
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        let mut out = LaurentScalar::zero();
        for (k, c) in &self.terms {
            out.add_term(*k, -c);
        }
        out
    }
}

impl Mul for &LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = LaurentScalar::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                let k = k1.checked_add(*k2).expect("q-exponent overflow");
                out.add_term(k, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentScalar {
    /// Canonical text: terms in ascending exponent order, joined by signs,
    /// e.g. `1/2*q^-3 + 2 + q`.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(out, "-")?;
                }
            } else if c.is_negative() {
                write!(out, " - ")?;
            } else {
                write!(out, " + ")?;
            }
            write!(out, "{}", monomial_text(&c.abs(), *k))?;
        }
        Ok(())
    }
}

fn monomial_text(c: &Rational, k: i64) -> String {
    if k == 0 {
        return c.to_string();
    }
    let qpart = if k == 1 {
        "q".to_string()
    } else {
        format!("q^{k}")
    };
    if c.is_one() {
        qpart
    } else {
        format!("{c}*{qpart}")
    }
}
