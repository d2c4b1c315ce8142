//! Gauss and Cartier congruence verifiers over prime ranges.
//!
//! A scan checks `a_{np} - tau_p(a_n)` against the required power of p for
//! every reachable pair and records per-prime verdicts. The semantics are
//! asymmetric by design: `holds_to_bound` is evidence only, while a violation
//! at an unramified, non-skipped prime is a proof that the property fails.
//! Verification order is deterministic (increasing p, then increasing |n|,
//! positive before negative) so the smallest witness is reproducible.

use crate::arith::{padic_val, primes_in, Rational, Valuation};
use crate::sequences::{SeqError, SequenceSource};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeSet;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum CongruenceError {
    #[error("invalid scan config: {0}")]
    InvalidConfig(String),
    #[error("ramification index must be positive")]
    InvalidRamificationIndex,
    #[error("prefix diagnostic requires an explicit bilateral sequence")]
    NotExplicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Gauss,
    Cartier,
}

/// What a scan requires at a single pair `(p, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Requirement {
    /// `val_min(a_{np} - tau_p(a_n), p) >= s`.
    MinValuation(i64),
    /// `a_0 = tau_p(a_0)` exactly (the Gauss n = 0 case: 0·O = {0}).
    ExactEquality,
}

impl Serialize for Requirement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Requirement::MinValuation(v) => s.serialize_i64(*v),
            Requirement::ExactEquality => s.serialize_str("equality"),
        }
    }
}

impl<'de> Deserialize<'de> for Requirement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(Requirement::MinValuation)
                .ok_or_else(|| D::Error::custom("non-integer requirement")),
            serde_json::Value::String(s) if s == "equality" => Ok(Requirement::ExactEquality),
            _ => Err(D::Error::custom("invalid requirement")),
        }
    }
}

/// A re-verifiable violation record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub n: i64,
    /// Observed `val_min(a_{np} - tau_p(a_n), p)`; finite by construction.
    pub valuation: i64,
    pub required: Requirement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeStatus {
    HoldsToBound,
    Violation,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeRecord {
    pub p: u64,
    pub status: PrimeStatus,
    #[serde(default)]
    pub pairs_checked: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    HoldsToBound,
    Violation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub verdict: Verdict,
    pub primes: Vec<PrimeRecord>,
}

impl CongruenceReport {
    pub fn violations(&self) -> impl Iterator<Item = &PrimeRecord> {
        self.primes
            .iter()
            .filter(|r| r.status == PrimeStatus::Violation)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub mode: Mode,
    pub p_min: u64,
    pub p_max: u64,
    /// Check all n with |n|·p <= max_index.
    pub max_index: i64,
    pub skip: BTreeSet<u64>,
}

impl ScanConfig {
    pub fn new(mode: Mode, p_min: u64, p_max: u64, max_index: i64) -> Result<Self, CongruenceError> {
        if p_min < 2 {
            return Err(CongruenceError::InvalidConfig("p_min must be at least 2".into()));
        }
        if max_index < p_max as i64 {
            return Err(CongruenceError::InvalidConfig(
                "max_index must be at least p_max, otherwise no pair is checkable".into(),
            ));
        }
        Ok(ScanConfig { mode, p_min, p_max, max_index, skip: BTreeSet::new() })
    }

    pub fn with_skips(mut self, skip: impl IntoIterator<Item = u64>) -> Self {
        self.skip.extend(skip);
        self
    }
}

fn required_at(mode: Mode, n: i64, p: u64) -> Requirement {
    match mode {
        Mode::Cartier => Requirement::MinValuation(1),
        Mode::Gauss => {
            if n == 0 {
                Requirement::ExactEquality
            } else {
                let vp_n = match padic_val(&Rational::from_integer(n.into()), p) {
                    Valuation::Finite(v) => v,
                    Valuation::Infinite => unreachable!("n is nonzero"),
                };
                Requirement::MinValuation(1 + vp_n)
            }
        }
    }
}

/// Check one prime; `max_index` bounds `|n|·p`.
pub fn check_prime(seq: &SequenceSource, mode: Mode, p: u64, max_index: i64) -> PrimeRecord {
    let field = seq.field();
    if field.conductor().is_multiple_of(p) {
        return PrimeRecord {
            p,
            status: PrimeStatus::Skipped,
            pairs_checked: 0,
            witness: None,
            reason: Some("ramified".into()),
        };
    }
    let bound = match seq.max_index() {
        Some(m) => max_index.min(m),
        None => max_index,
    };
    let n_max = bound / p as i64;
    let mut pairs = 0u64;
    let mut indices: Vec<i64> = Vec::new();
    for n in 0..=n_max {
        indices.push(n);
        if n > 0 && seq.is_bilateral() {
            indices.push(-n);
        }
    }
    for n in indices {
        let skip = |msg: String| PrimeRecord {
            p,
            status: PrimeStatus::Skipped,
            pairs_checked: pairs,
            witness: None,
            reason: Some(msg),
        };
        let a_n = match seq.term(n) {
            Ok(v) => v,
            Err(e) => return skip(e.to_string()),
        };
        let a_np = match seq.term(n * p as i64) {
            Ok(v) => v,
            Err(e) => return skip(e.to_string()),
        };
        if !field.val_min(&a_n, p).is_at_least(0) {
            return skip(format!("non-integral term at n = {n}"));
        }
        if !field.val_min(&a_np, p).is_at_least(0) {
            return skip(format!("non-integral term at n = {}", n * p as i64));
        }
        let tau = field.frobenius(&a_n, p).expect("unramified by the conductor check");
        let diff = field.sub(&a_np, &tau);
        let observed = field.val_min(&diff, p);
        let required = required_at(mode, n, p);
        let holds = match required {
            Requirement::MinValuation(s) => observed.is_at_least(s),
            Requirement::ExactEquality => field.is_zero(&diff),
        };
        if !holds {
            let valuation = match observed {
                Valuation::Finite(v) => v,
                Valuation::Infinite => unreachable!("zero difference satisfies every requirement"),
            };
            return PrimeRecord {
                p,
                status: PrimeStatus::Violation,
                pairs_checked: pairs,
                witness: Some(Witness { n, valuation, required }),
                reason: None,
            };
        }
        pairs += 1;
    }
    PrimeRecord {
        p,
        status: PrimeStatus::HoldsToBound,
        pairs_checked: pairs,
        witness: None,
        reason: None,
    }
}

pub fn cartier_check(seq: &SequenceSource, p: u64, max_index: i64) -> PrimeRecord {
    check_prime(seq, Mode::Cartier, p, max_index)
}

pub fn gauss_check(seq: &SequenceSource, p: u64, max_index: i64) -> PrimeRecord {
    check_prime(seq, Mode::Gauss, p, max_index)
}

/// Scan every prime in range, honoring the skip set; a per-prime error never
/// aborts the scan.
pub fn scan(seq: &SequenceSource, cfg: &ScanConfig) -> CongruenceReport {
    let mut records = Vec::new();
    for p in primes_in(cfg.p_min, cfg.p_max) {
        if cfg.skip.contains(&p) {
            records.push(PrimeRecord {
                p,
                status: PrimeStatus::Skipped,
                pairs_checked: 0,
                witness: None,
                reason: Some("user skip".into()),
            });
            continue;
        }
        records.push(check_prime(seq, cfg.mode, p, cfg.max_index));
    }
    let verdict = if records.iter().any(|r| r.status == PrimeStatus::Violation) {
        Verdict::Violation
    } else {
        Verdict::HoldsToBound
    };
    CongruenceReport { verdict, primes: records }
}

/// Recompute a recorded witness; report soundness requires this to hold.
pub fn verify_witness(seq: &SequenceSource, p: u64, w: &Witness) -> bool {
    let field = seq.field();
    let (Ok(a_n), Ok(a_np)) = (seq.term(w.n), seq.term(w.n * p as i64)) else {
        return false;
    };
    let Ok(tau) = field.frobenius(&a_n, p) else {
        return false;
    };
    let diff = field.sub(&a_np, &tau);
    let observed = field.val_min(&diff, p);
    if observed != Valuation::Finite(w.valuation) {
        return false;
    }
    match w.required {
        Requirement::MinValuation(s) => !observed.is_at_least(s),
        Requirement::ExactEquality => !field.is_zero(&diff),
    }
}

/// Necessary-failure certificates for the Cartier property, reported before
/// any prime scan: a nonzero term at a negative index, or an irrational
/// constant term.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrefixDiagnostic {
    pub negative_nonzero_indices: Vec<i64>,
    pub irrational_constant_term: bool,
}

impl PrefixDiagnostic {
    pub fn clean(&self) -> bool {
        self.negative_nonzero_indices.is_empty() && !self.irrational_constant_term
    }
}

pub fn prefix_diagnostic(seq: &SequenceSource) -> Result<PrefixDiagnostic, CongruenceError> {
    let (offset, terms) = seq.explicit_data().ok_or(CongruenceError::NotExplicit)?;
    let field = seq.field();
    let mut negative = Vec::new();
    for (i, t) in terms.iter().enumerate() {
        let n = offset + i as i64;
        if n < 0 && !field.is_zero(t) {
            negative.push(n);
        }
    }
    let a0 = seq.term(0).expect("explicit sources are total");
    let irrational = field.as_rational(&a0).is_none();
    Ok(PrefixDiagnostic {
        negative_nonzero_indices: negative,
        irrational_constant_term: irrational,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionPoint {
    Finite,
    Infinity,
}

/// Reduce a Puiseux expansion with ramification index `d` to an ordinary scan:
/// the coefficients are scaled by `d` at a finite point and by `-d` at
/// infinity, and the verdict is independent of the expansion point.
pub fn puiseux_rescale(
    coeffs: Arc<SequenceSource>,
    d: u64,
    at: ExpansionPoint,
) -> Result<SequenceSource, CongruenceError> {
    if d == 0 {
        return Err(CongruenceError::InvalidRamificationIndex);
    }
    let factor = match at {
        ExpansionPoint::Finite => Rational::from_integer(d.into()),
        ExpansionPoint::Infinity => -Rational::from_integer(d.into()),
    };
    Ok(SequenceSource::rescaled(coeffs, factor))
}

/// Scan each prime in range for consistency of a sequence error with the
/// report; convenience used by the CLI for round-trip verification.
pub fn reverify_report(seq: &SequenceSource, report: &CongruenceReport) -> bool {
    report.primes.iter().all(|r| match (&r.status, &r.witness) {
        (PrimeStatus::Violation, Some(w)) => verify_witness(seq, r.p, w),
        (PrimeStatus::Violation, None) => false,
        _ => true,
    })
}

#[allow(unused)]
fn seq_err_msg(e: &SeqError) -> String {
    e.to_string()
}
