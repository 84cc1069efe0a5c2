//! Exact field scalars.
//!
//! Everything downstream of the torus charts is subtraction-free, so the
//! scalar interface deliberately omits subtraction and negation: a type only
//! has to provide `+`, `*`, `/`, an exact equality test, and the unit. The
//! two instances used here are arbitrary-precision rationals and symbolic
//! expression trees ([`crate::expr::PosExpr`]).

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// An exact field element supporting `+`, `*`, `/` and decidable equality.
pub trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Errors with [`Error::DivisionByZero`] when `rhs` is zero.
    fn div(&self, rhs: &Self) -> Result<Self>;

    /// Integer power; negative exponents error on zero base.
    fn powi(&self, exp: i64) -> Result<Self> {
        let mut acc = Self::one();
        for _ in 0..exp.unsigned_abs() {
            acc = acc.mul(self);
        }
        if exp < 0 {
            Self::one().div(&acc)
        } else {
            Ok(acc)
        }
    }

    /// Canonical text form used in JSON payloads.
    fn text(&self) -> String;
}

impl Scalar for BigRational {
    fn one() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        if Zero::is_zero(rhs) {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }

    fn text(&self) -> String {
        rational_to_text(self)
    }
}

/// Canonical "p/q" with q > 0 and gcd(p,q) = 1; the denominator is always
/// written, so integers come out as "p/1".
pub fn rational_to_text(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses "p/q" or a bare integer "p".
pub fn rational_from_text(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (
            p.trim().parse::<BigInt>().map_err(|_| bad())?,
            q.trim().parse::<BigInt>().map_err(|_| bad())?,
        ),
        None => (s.parse::<BigInt>().map_err(|_| bad())?, One::one()),
    };
    if Zero::is_zero(&den) {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(num, den))
}

pub fn rational_from_i64(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// The rational 1 as a plain function. `BigRational::one()` is ambiguous in
/// modules that also have [`Scalar`] in scope, so construction goes through
/// these helpers there.
pub fn rational_one() -> BigRational {
    One::one()
}

/// The rational 0; see [`rational_one`].
pub fn rational_zero() -> BigRational {
    Zero::zero()
}

/// Strictly positive random rational with numerator and denominator uniform
/// in [1, 1000]. Used by every seeded sampling suite.
pub fn random_pos_rational<R: Rng>(rng: &mut R) -> BigRational {
    let num: i64 = rng.gen_range(1..=1000);
    let den: i64 = rng.gen_range(1..=1000);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Like [`random_pos_rational`] but never equal to the given value.
pub fn random_pos_rational_ne<R: Rng>(rng: &mut R, avoid: &BigRational) -> BigRational {
    loop {
        let r = random_pos_rational(rng);
        if &r != avoid {
            return r;
        }
    }
}

pub fn is_positive_rational(r: &BigRational) -> bool {
    r.is_positive()
}
