//! Artin-Mazur zeta tooling: Moebius inversion of fixed-point counts,
//! realizability checks, exact zeta coefficients, and the Dieudonne-Dwork
//! congruence test.
//!
//! All quantifiers are truncated to the indices available; a clean result is
//! evidence to the stated bound, never a proof, the same asymmetry as the
//! congruence scans.

use crate::arith::{Rational, Valuation};
use crate::cyclotomic::{CycloError, CycloField};
use crate::series::{RationalRing, TruncSeries};
use crate::sequences::fix_from_orbits;
use serde::Serialize;

pub use crate::sequences::SeqError;

/// Standard Moebius function.
pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1);
    let mut n = n;
    let mut factors = 0;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            factors += 1;
        }
        p += 1;
    }
    if n > 1 {
        factors += 1;
    }
    if factors % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitEntry {
    pub n: u64,
    /// `O_n = (1/n) sum_{d | n} mu(n/d) fix_d`.
    #[serde(serialize_with = "ser_rat")]
    pub count: Rational,
    /// Integral for all n iff Gauss congruences hold for every prime (Dold).
    pub integral: bool,
    /// Integral and nonnegative for all n iff realizable.
    pub nonnegative: bool,
}

fn ser_rat<S: serde::Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&crate::arith::format_rational(q))
}

/// Moebius inversion of fixed-point counts into orbit counts, with
/// divisibility verdicts per index.
pub fn orbit_invert(fix: &[i64]) -> Vec<OrbitEntry> {
    (1..=fix.len() as u64)
        .map(|n| {
            let mut acc = Rational::default();
            for d in 1..=n {
                if n % d == 0 {
                    acc += Rational::from_integer(mobius(n / d).into())
                        * Rational::from_integer(fix[d as usize - 1].into());
                }
            }
            let count = acc / Rational::from_integer(n.into());
            let integral = count.is_integer();
            let nonnegative = integral && count >= Rational::default();
            OrbitEntry { n, count, integral, nonnegative }
        })
        .collect()
}

pub fn all_integral(orbits: &[OrbitEntry]) -> bool {
    orbits.iter().all(|o| o.integral)
}

pub fn realizable(orbits: &[OrbitEntry]) -> bool {
    orbits.iter().all(|o| o.nonnegative)
}

/// Taylor coefficients of `Z_f = exp(sum fix_n x^n / n)` to order N.
pub fn zeta_coeffs(fix: &[i64], order: usize) -> TruncSeries<RationalRing> {
    let mut s = vec![Rational::default(); order];
    for (i, c) in s.iter_mut().enumerate().skip(1) {
        if i <= fix.len() {
            *c = Rational::from_integer(fix[i - 1].into()) / Rational::from_integer(i.into());
        }
    }
    assert!(
        order <= fix.len() + 1,
        "zeta_coeffs needs fix counts up to n = {}",
        order.saturating_sub(1)
    );
    TruncSeries::from_coeffs(RationalRing, s, order).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DworkVerdict {
    Holds { order: usize },
    Violation { exponent: usize, valuation: i64 },
}

impl DworkVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, DworkVerdict::Holds { .. })
    }
}

/// Dieudonne-Dwork test: every coefficient of `s^tau(x^p) - p s(x)` up to
/// order N must have valuation at least 1. Equivalent to p-integrality of
/// `exp(s)`.
pub fn dwork_check(
    field: &CycloField,
    s: &TruncSeries<CycloField>,
    p: u64,
    order: usize,
) -> Result<DworkVerdict, CycloError> {
    if field.conductor().is_multiple_of(p) {
        return Err(CycloError::RamifiedPrime { p, d: field.conductor() });
    }
    let order = order.min(s.precision());
    let p_rat = Rational::from_integer(p.into());
    for m in 0..order {
        // coefficient of x^m in s^tau(x^p) - p s(x)
        let mut c = field.neg(&field.scalar_mul(&p_rat, s.coeff(m)));
        if m % p as usize == 0 && m / p as usize > 0 {
            let tau = field.frobenius(s.coeff(m / p as usize), p)?;
            c = field.add(&c, &tau);
        }
        let v = field.val_min(&c, p);
        if !v.is_at_least(1) {
            let valuation = match v {
                Valuation::Finite(v) => v,
                Valuation::Infinite => unreachable!("zero coefficient has infinite valuation"),
            };
            return Ok(DworkVerdict::Violation { exponent: m, valuation });
        }
    }
    Ok(DworkVerdict::Holds { order })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DworkCrosscheck {
    pub exp_integral: bool,
    pub dwork: DworkVerdict,
    /// Both routes of the equivalence must agree.
    pub agree: bool,
}

/// Both directions of the Dwork equivalence as a testable pair: the direct
/// p-integrality of `exp(s)` against the congruence side, for rational s.
pub fn exp_integrality_crosscheck(
    s: &TruncSeries<RationalRing>,
    p: u64,
    order: usize,
) -> DworkCrosscheck {
    let order = order.min(s.precision());
    let g = s.truncate(order).exp();
    let exp_integral = g.min_valuation(p).is_at_least(0);
    let field = CycloField::rationals();
    let lifted = TruncSeries::from_coeffs(
        field.clone(),
        s.coeffs().iter().map(|q| field.embed_rational(q.clone())).collect(),
        s.precision(),
    );
    let dwork = dwork_check(&field, &lifted, p, order).expect("no ramified primes over Q");
    let agree = exp_integral == dwork.holds();
    DworkCrosscheck { exp_integral, dwork, agree }
}

/// Convenience: synthesize fixed-point counts from orbit counts (exact
/// inverse of `orbit_invert` on realizable data).
pub fn fix_counts_from_orbits(orbits: &[u64]) -> Vec<i64> {
    (1..=orbits.len() as u64)
        .map(|n| fix_from_orbits(orbits, n).expect("n within data") as i64)
        .collect()
}
