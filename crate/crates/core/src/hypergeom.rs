//! Classifiers for hypergeometric parameter tuples: conjugate families,
//! the Beukers-Heckman interlacing test for algebraicity, and the factorial
//! (Galois-rational root multiset) test.

use crate::arith::Rational;
use crate::sequences::ParamTuple;
use num_integer::Integer;
use num_traits::ToPrimitive;
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum HypError {
    #[error("tuples must have equal length: {alpha} vs {beta}")]
    LengthMismatch { alpha: usize, beta: usize },
    #[error("tuples share the parameter {0}; interlacing requires disjoint tuples")]
    SharedParameter(String),
}

/// lcm of all parameter denominators across both tuples.
pub fn conductor(alpha: &ParamTuple, beta: &ParamTuple) -> u64 {
    alpha.denominator_lcm().lcm(&beta.denominator_lcm())
}

/// The phi(d) conjugate parameter pairs `(<k alpha>, <k beta>)` for k in
/// [1, d] coprime to d, each sorted.
pub fn conjugate_family(alpha: &ParamTuple, beta: &ParamTuple) -> Vec<(u64, ParamTuple, ParamTuple)> {
    let d = conductor(alpha, beta);
    (1..=d)
        .filter(|k| k.gcd(&d) == 1)
        .map(|k| (k, alpha.scaled_bracket(k as i64), beta.scaled_bracket(k as i64)))
        .collect()
}

/// Strict alternation of alpha- and beta-origin points on (0, 1] after a
/// sorted merge; any tie fails.
fn interlaces(alpha: &ParamTuple, beta: &ParamTuple) -> bool {
    let mut points: Vec<(&Rational, bool)> = alpha
        .entries()
        .iter()
        .map(|q| (q, true))
        .chain(beta.entries().iter().map(|q| (q, false)))
        .collect();
    points.sort_by(|a, b| a.0.cmp(b.0));
    for w in points.windows(2) {
        if w[0].0 == w[1].0 || w[0].1 == w[1].1 {
            return false;
        }
    }
    true
}

/// Beukers-Heckman criterion: true iff for every k coprime to the conductor,
/// the points `<k alpha_i>` and `<k beta_j>` strictly interlace on (0, 1].
pub fn is_algebraic_interlacing(alpha: &ParamTuple, beta: &ParamTuple) -> Result<bool, HypError> {
    if alpha.len() != beta.len() {
        return Err(HypError::LengthMismatch { alpha: alpha.len(), beta: beta.len() });
    }
    if let Some(q) = alpha.entries().iter().find(|q| beta.entries().contains(q)) {
        return Err(HypError::SharedParameter(q.to_string()));
    }
    Ok(conjugate_family(alpha, beta)
        .iter()
        .all(|(_, a, b)| interlaces(a, b)))
}

/// Signed multiset of reduced fractions in (0, 1] standing for roots of
/// unity `e^{2 pi i k/m}`; alpha-roots count +1, beta-roots -1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RootMultiset {
    /// (numerator, denominator) in lowest terms -> multiplicity; zero
    /// multiplicities are pruned.
    mult: BTreeMap<(u64, u64), i64>,
}

impl RootMultiset {
    pub fn from_params(alpha: &ParamTuple, beta: &ParamTuple) -> RootMultiset {
        let mut m = RootMultiset::default();
        for q in alpha.entries() {
            m.insert(q, 1);
        }
        for q in beta.entries() {
            m.insert(q, -1);
        }
        m
    }

    fn insert(&mut self, q: &Rational, delta: i64) {
        let key = (q.numer().to_u64().unwrap(), q.denom().to_u64().unwrap());
        let e = self.mult.entry(key).or_insert(0);
        *e += delta;
        if *e == 0 {
            self.mult.remove(&key);
        }
    }

    pub fn multiplicities(&self) -> &BTreeMap<(u64, u64), i64> {
        &self.mult
    }

    /// True iff the multiset is a Z-linear combination of full Galois orbits:
    /// for each denominator m, all reduced fractions j/m carry the same
    /// multiplicity.
    pub fn is_galois_rational(&self) -> bool {
        let mut by_denom: BTreeMap<u64, Vec<i64>> = BTreeMap::new();
        for (&(_, m), &mult) in &self.mult {
            by_denom.entry(m).or_default().push(mult);
        }
        for (m, mults) in by_denom {
            let phi = (1..=m).filter(|j| j.gcd(&m) == 1).count();
            if mults.len() != phi || mults.windows(2).any(|w| w[0] != w[1]) {
                return false;
            }
        }
        true
    }
}

/// True iff the quotient of the root polynomials lies in `Q(x)`, i.e. the
/// signed root multiset is Galois-rational (the R-partitioned condition).
pub fn is_factorial(alpha: &ParamTuple, beta: &ParamTuple) -> bool {
    RootMultiset::from_params(alpha, beta).is_galois_rational()
}
