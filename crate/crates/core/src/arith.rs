//! Exact rational scalars, p-adic valuations and prime enumeration.
//!
//! Everything downstream is built on arbitrary-precision rationals; no
//! floating point appears anywhere in the crate. Valuations carry a
//! distinguished `Infinite` value for zero, ordered above every integer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

/// Arbitrary-precision fraction, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// p-adic valuation: exponent of p, with a sentinel for the zero element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_at_least(&self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) => *v >= bound,
            Valuation::Infinite => true,
        }
    }

    pub fn min(self, other: Valuation) -> Valuation {
        std::cmp::min(self, other)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Exponent of `p` in a nonzero integer.
fn int_val(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut v = 0;
    let mut n = n.abs();
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        n = q;
    }
}

/// Exponent of the prime `p` in the rational `q`; `Infinite` iff `q = 0`.
pub fn padic_val(q: &Rational, p: u64) -> Valuation {
    if q.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    Valuation::Finite(int_val(q.numer(), &p) - int_val(q.denom(), &p))
}

/// All primes in `[lo, hi]`, in increasing order.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || hi < lo {
        return Vec::new();
    }
    let hi = hi as usize;
    let mut composite = vec![false; hi + 1];
    let mut out = Vec::new();
    for n in 2..=hi {
        if !composite[n] {
            if n as u64 >= lo {
                out.push(n as u64);
            }
            let mut m = n * n;
            while m <= hi {
                composite[m] = true;
                m += n;
            }
        }
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Serialize a rational as `"a/b"`, with `/b` omitted when the denominator is 1.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

/// Parse `"a"` or `"a/b"` with sign on the numerator and positive denominator.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_owned());
    let mut parts = s.split('/');
    let numer = parts.next().ok_or_else(err)?;
    let numer = BigInt::from_str(numer.trim()).map_err(|_| err())?;
    let denom = match parts.next() {
        None => BigInt::one(),
        Some(d) => BigInt::from_str(d.trim()).map_err(|_| err())?,
    };
    if parts.next().is_some() || !denom.is_positive() {
        return Err(err());
    }
    Ok(Rational::new(numer, denom))
}

/// Helper for literals in tests and builders.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
