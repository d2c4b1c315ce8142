//! p-curvature of the order-1 operator `d/dx - eta`, computed two
//! independent ways.
//!
//! The input is the stripped, Eisenstein-rescaled coefficient stream of
//! `x*eta`: a rational residue `a_0` plus `b_n = lambda^n a_n` for `n >= 1`,
//! giving `eta_tilde = sum b_n x^{n-1}` with coefficients integral away from
//! the primes dividing `lambda` and the conductor.
//!
//! The closed form `-eta^(p-1) + (-eta)^p` (Jacobson) and the literal p-fold
//! iteration of `f -> f' - eta f` in the residue ring are mutual oracles:
//! they must agree exactly, and their common zero test is equivalent to the
//! Cartier congruences on `(b_n)` over the reachable index range.

use crate::arith::Rational;
use crate::cyclotomic::{CycloField, ResidueRing};
use crate::sequences::{SeqError, SequenceSource};
use crate::series::TruncSeries;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum PcurvError {
    #[error("constant term is not rational; the Cartier property already fails")]
    NonRationalResidue,
    #[error("lambda must be a positive integer")]
    InvalidLambda,
    #[error("prime {p} divides the conductor or the Eisenstein scale")]
    BadPrime { p: u64 },
    #[error("Jacobson's closed form requires an odd prime")]
    EvenPrime,
    #[error("precision {n} is below 2p = {min}; residues live on exponents (n-1)p")]
    PrecisionTooSmall { n: usize, min: usize },
    #[error("coefficient b_{n} is not {p}-integral; the supplied lambda is wrong for this prime")]
    NonIntegralCoefficient { n: i64, p: u64 },
    #[error(transparent)]
    Seq(#[from] SeqError),
}

/// `eta_tilde = lambda*eta(lambda x) - a_0/x`, held as its coefficient stream.
pub struct EtaTilde {
    a0: Rational,
    lambda: BigInt,
    /// Whether the lambda came from the probe heuristic rather than the user.
    lambda_heuristic: bool,
    b: Arc<SequenceSource>,
    field: CycloField,
}

impl EtaTilde {
    pub fn residue(&self) -> &Rational {
        &self.a0
    }

    pub fn lambda(&self) -> &BigInt {
        &self.lambda
    }

    pub fn lambda_is_heuristic(&self) -> bool {
        self.lambda_heuristic
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    pub fn coefficients(&self) -> &Arc<SequenceSource> {
        &self.b
    }

    /// `eta_tilde` reduced modulo p, to the requested precision.
    fn reduce(&self, p: u64, precision: usize) -> Result<TruncSeries<ResidueRing>, PcurvError> {
        let ring = self.field.residue_ring(p);
        let mut coeffs = Vec::with_capacity(precision);
        for i in 0..precision {
            let n = i as i64 + 1;
            let b_n = self.b.term(n)?;
            let c = self
                .field
                .residue_project(&b_n, p)
                .map_err(|_| PcurvError::NonIntegralCoefficient { n, p })?;
            coeffs.push(c);
        }
        Ok(TruncSeries::from_coeffs(ring, coeffs, precision))
    }

    fn check_prime(&self, p: u64) -> Result<(), PcurvError> {
        let d = BigInt::from(self.field.conductor());
        let p_big = BigInt::from(p);
        if d.is_multiple_of(&p_big) || self.lambda.is_multiple_of(&p_big) {
            return Err(PcurvError::BadPrime { p });
        }
        Ok(())
    }
}

/// Separate the rational residue and rescale the tail: `a_0` plus
/// `b_n = lambda^n a_n`.
pub fn strip_and_rescale(
    seq: Arc<SequenceSource>,
    lambda: BigInt,
    lambda_heuristic: bool,
) -> Result<EtaTilde, PcurvError> {
    if !num_traits::Signed::is_positive(&lambda) {
        return Err(PcurvError::InvalidLambda);
    }
    let field = seq.field().clone();
    let a0 = seq.term(0)?;
    let a0 = field.as_rational(&a0).ok_or(PcurvError::NonRationalResidue)?;
    let b = Arc::new(SequenceSource::eisenstein_scaled(seq, lambda.clone()));
    Ok(EtaTilde { a0, lambda, lambda_heuristic, b, field })
}

/// Probe `a_1..a_depth` and return the lcm of all coordinate denominators, a
/// heuristic Eisenstein scale. Eisenstein's theorem guarantees a valid
/// lambda exists for algebraic series but gives no algorithm; reports must
/// mark this value as heuristic.
pub fn suggest_lambda(seq: &SequenceSource, depth: i64) -> Result<BigInt, PcurvError> {
    let mut l = BigInt::one();
    for n in 1..=depth {
        let t = seq.term(n)?;
        for c in t.coords() {
            l = l.lcm(c.denom());
        }
    }
    Ok(l)
}

fn check_precision(p: u64, precision: usize) -> Result<(), PcurvError> {
    if precision < 2 * p as usize {
        return Err(PcurvError::PrecisionTooSmall { n: precision, min: 2 * p as usize });
    }
    Ok(())
}

/// `Delta^p(1) = -(eta_tilde^(p-1) + eta_tilde^p)` for odd p, truncated at
/// order `precision` in the residue ring.
pub fn jacobson_residue(
    et: &EtaTilde,
    p: u64,
    precision: usize,
) -> Result<TruncSeries<ResidueRing>, PcurvError> {
    if p == 2 {
        return Err(PcurvError::EvenPrime);
    }
    et.check_prime(p)?;
    check_precision(p, precision)?;
    // The (p-1)-fold derivative drops p-1 orders: fetch extra coefficients so
    // the result is known to the full requested order.
    let eta = et.reduce(p, precision + p as usize - 1)?;
    let deriv = eta.derive_n(p as usize - 1).truncate(precision);
    let pow = eta.truncate(precision).pow(p);
    Ok(deriv.add(&pow).neg())
}

/// The p-fold iterate of `f -> f' - eta_tilde f` applied to 1, computed
/// literally in the residue ring; p = 2 is allowed here.
pub fn pcurv_iterate(
    et: &EtaTilde,
    p: u64,
    precision: usize,
) -> Result<TruncSeries<ResidueRing>, PcurvError> {
    et.check_prime(p)?;
    check_precision(p, precision)?;
    let work = precision + p as usize;
    let eta = et.reduce(p, work)?;
    let mut f = TruncSeries::one(eta.ring().clone(), work);
    for _ in 0..p {
        f = f.derive().sub(&eta.mul(&f));
    }
    Ok(f.truncate(precision))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "pcurvature", rename_all = "snake_case")]
pub enum PcurvVerdict {
    ZeroToOrder { order: usize },
    Nonzero { witness_exponent: usize },
}

/// Zero test of the p-curvature, with the smallest nonzero exponent as
/// witness. Odd primes go through the closed form; p = 2 through iteration.
pub fn pcurv_is_zero(et: &EtaTilde, p: u64, precision: usize) -> Result<PcurvVerdict, PcurvError> {
    let series = if p == 2 {
        pcurv_iterate(et, p, precision)?
    } else {
        jacobson_residue(et, p, precision)?
    };
    Ok(match series.first_nonzero() {
        None => PcurvVerdict::ZeroToOrder { order: series.precision() },
        Some(e) => PcurvVerdict::Nonzero { witness_exponent: e },
    })
}
