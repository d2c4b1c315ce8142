//! Coefficient-sequence generators behind a uniform source contract.
//!
//! Each source is a pure mapping `n -> a_n` with values in a fixed cyclotomic
//! field. Sources memoize internally behind a mutex; memoization is invisible
//! to callers and `term` is callable concurrently.

use crate::arith::{parse_rational, Rational};
use crate::cyclotomic::{CycloElem, CycloError, CycloField};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

#[derive(Debug, thiserror::Error)]
pub enum SeqError {
    #[error("index {n} is beyond the supplied data (max {max})")]
    OutOfRange { n: i64, max: i64 },
    #[error("parameter {0} is not in (0, 1]")]
    ParameterOutOfRange(String),
    #[error("conductor {given} does not match the parameter denominators (lcm {lcm})")]
    ConductorMismatch { given: u64, lcm: u64 },
    #[error("matrix is not square: {rows} rows, {cols} columns in row {row}")]
    NonSquareMatrix { rows: usize, cols: usize, row: usize },
    #[error("exponent vector of length {found}, expected {expected}")]
    ExponentArity { expected: usize, found: usize },
    #[error(transparent)]
    Field(#[from] CycloError),
    #[error("invalid rational: {0}")]
    BadRational(String),
    #[error("{0}")]
    Invalid(String),
}

// ---- hypergeometric parameters ----

/// Sorted multiset of rationals in (0, 1].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamTuple {
    entries: Vec<Rational>,
}

impl ParamTuple {
    pub fn new(mut entries: Vec<Rational>) -> Result<ParamTuple, SeqError> {
        for q in &entries {
            if !q.is_positive() || q > &Rational::one() {
                return Err(SeqError::ParameterOutOfRange(q.to_string()));
            }
        }
        entries.sort();
        Ok(ParamTuple { entries })
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// lcm of the denominators of the entries (in reduced form).
    pub fn denominator_lcm(&self) -> u64 {
        let mut l = BigInt::one();
        for q in &self.entries {
            l = l.lcm(q.denom());
        }
        u64::try_from(&l).expect("desk-scale conductor")
    }

    /// Componentwise `<k·>`.
    pub fn scaled_bracket(&self, k: i64) -> ParamTuple {
        let mut entries: Vec<Rational> = self
            .entries
            .iter()
            .map(|q| bracket(&(q * Rational::from_integer(k.into()))))
            .collect();
        entries.sort();
        ParamTuple { entries }
    }

    pub fn is_disjoint_from(&self, other: &ParamTuple) -> bool {
        self.entries.iter().all(|q| !other.entries.contains(q))
    }
}

/// Fractional part, except integers map to 1.
pub fn bracket(x: &Rational) -> Rational {
    let f = x - x.floor();
    if f.is_zero() {
        Rational::one()
    } else {
        f
    }
}

/// Exact Pochhammer quotient `(alpha_1)_n ... / (beta_1)_n ...`; `Q(0) = 1`.
pub fn pochhammer_ratio(alpha: &ParamTuple, beta: &ParamTuple, n: u64) -> Rational {
    let mut num = Rational::one();
    let mut den = Rational::one();
    for k in 0..n {
        let kq = Rational::from_integer(k.into());
        for a in alpha.entries() {
            num *= a + &kq;
        }
        for b in beta.entries() {
            den *= b + &kq;
        }
    }
    num / den
}

/// `sum_{k in [1,d], gcd(k,d)=1} xi^k Q_{<k alpha>, <k beta>}(n)`.
pub fn mixed_coeff(
    alpha: &ParamTuple,
    beta: &ParamTuple,
    d: u64,
    xi: &CycloElem,
    field: &CycloField,
    n: u64,
) -> Result<CycloElem, SeqError> {
    let lcm = alpha.denominator_lcm().lcm(&beta.denominator_lcm());
    if d != lcm {
        return Err(SeqError::ConductorMismatch { given: d, lcm });
    }
    let mut acc = field.zero_elem();
    let mut xi_k = field.one_elem();
    for k in 1..=d {
        xi_k = field.mul(&xi_k, xi);
        if d.gcd(&k) != 1 {
            continue;
        }
        let q = pochhammer_ratio(&alpha.scaled_bracket(k as i64), &beta.scaled_bracket(k as i64), n);
        acc = field.add(&acc, &field.scalar_mul(&q, &xi_k));
    }
    Ok(acc)
}

// ---- Laurent polynomials ----

/// Sparse Laurent polynomial over a cyclotomic field: exponent vectors of a
/// fixed arity mapped to nonzero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    vars: usize,
    terms: BTreeMap<Vec<i64>, CycloElem>,
}

impl LaurentPoly {
    pub fn new(vars: usize) -> LaurentPoly {
        LaurentPoly { vars, terms: BTreeMap::new() }
    }

    pub fn one(field: &CycloField, vars: usize) -> LaurentPoly {
        let mut p = LaurentPoly::new(vars);
        p.terms.insert(vec![0; vars], field.one_elem());
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn add_term(
        &mut self,
        field: &CycloField,
        exp: Vec<i64>,
        coef: CycloElem,
    ) -> Result<(), SeqError> {
        if exp.len() != self.vars {
            return Err(SeqError::ExponentArity { expected: self.vars, found: exp.len() });
        }
        let entry = self.terms.entry(exp.clone()).or_insert_with(|| field.zero_elem());
        *entry = field.add(entry, &coef);
        if field.is_zero(entry) {
            self.terms.remove(&exp);
        }
        Ok(())
    }

    pub fn add(&self, field: &CycloField, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(field, e.clone(), c.clone()).expect("matching arity");
        }
        out
    }

    pub fn mul(&self, field: &CycloField, other: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.vars, other.vars, "Laurent arity mismatch");
        let mut out = LaurentPoly::new(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exp: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(field, exp, field.mul(c1, c2)).expect("matching arity");
            }
        }
        out
    }

    /// Coefficient of the zero exponent vector.
    pub fn constant_term(&self, field: &CycloField) -> CycloElem {
        self.terms
            .get(&vec![0i64; self.vars])
            .cloned()
            .unwrap_or_else(|| field.zero_elem())
    }
}

/// Constant term of `lambda^n`, by exact repeated multiplication.
pub fn laurent_ct(field: &CycloField, lambda: &LaurentPoly, n: u64) -> CycloElem {
    let mut acc = LaurentPoly::one(field, lambda.vars());
    for _ in 0..n {
        acc = acc.mul(field, lambda);
    }
    acc.constant_term(field)
}

pub type LaurentMatrix = Vec<Vec<LaurentPoly>>;

fn matrix_mul(field: &CycloField, a: &LaurentMatrix, b: &LaurentMatrix) -> LaurentMatrix {
    let n = a.len();
    let vars = a[0][0].vars();
    let mut out = vec![vec![LaurentPoly::new(vars); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].terms.is_empty() {
                continue;
            }
            for j in 0..n {
                let prod = a[i][k].mul(field, &b[k][j]);
                out[i][j] = out[i][j].add(field, &prod);
            }
        }
    }
    out
}

fn matrix_identity(field: &CycloField, size: usize, vars: usize) -> LaurentMatrix {
    let mut m = vec![vec![LaurentPoly::new(vars); size]; size];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = LaurentPoly::one(field, vars);
    }
    m
}

fn matrix_trace_constant(field: &CycloField, m: &LaurentMatrix) -> CycloElem {
    let mut acc = field.zero_elem();
    for (i, row) in m.iter().enumerate() {
        acc = field.add(&acc, &row[i].constant_term(field));
    }
    acc
}

/// Constant term of `Tr(A^n)`; `A^0` is the identity.
pub fn matrix_trace_ct(
    field: &CycloField,
    a: &LaurentMatrix,
    n: u64,
) -> Result<CycloElem, SeqError> {
    let size = a.len();
    for (row, r) in a.iter().enumerate() {
        if r.len() != size {
            return Err(SeqError::NonSquareMatrix { rows: size, cols: r.len(), row });
        }
    }
    let vars = a[0][0].vars();
    let mut acc = matrix_identity(field, size, vars);
    for _ in 0..n {
        acc = matrix_mul(field, &acc, a);
    }
    Ok(matrix_trace_constant(field, &acc))
}

/// `|Fix(f^n)| = sum_{d | n} d * O_d` from orbit counts.
pub fn fix_from_orbits(orbits: &[u64], n: u64) -> Result<u64, SeqError> {
    if n == 0 || n as usize > orbits.len() {
        return Err(SeqError::OutOfRange { n: n as i64, max: orbits.len() as i64 });
    }
    let mut acc = 0u64;
    for d in 1..=n {
        if n.is_multiple_of(d) {
            acc += d * orbits[d as usize - 1];
        }
    }
    Ok(acc)
}

// ---- JSON sequence specifications ----

/// Wire format for a sequence, as accepted by the CLI and job files.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SequenceSpec {
    Hypergeometric {
        alpha: Vec<String>,
        beta: Vec<String>,
        #[serde(default = "default_scale")]
        scale: String,
    },
    MixedHypergeometric {
        alpha: Vec<String>,
        beta: Vec<String>,
        d: u64,
        xi_power: u64,
    },
    LaurentCt {
        vars: usize,
        terms: Vec<LaurentTermSpec>,
    },
    MatrixTraceCt {
        size: usize,
        entries: Vec<Vec<Vec<LaurentTermSpec>>>,
    },
    Orbits {
        counts: Vec<u64>,
    },
    Fix {
        counts: Vec<u64>,
    },
    Explicit {
        offset: i64,
        terms: Vec<ElemSpec>,
    },
}

fn default_scale() -> String {
    "1".to_owned()
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LaurentTermSpec {
    pub exp: Vec<i64>,
    pub coef: ElemSpec,
}

/// A cyclotomic element literal: conductor plus rational coordinate strings.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ElemSpec {
    pub d: u64,
    pub coords: Vec<String>,
}

impl ElemSpec {
    pub fn build(&self, field: &CycloField) -> Result<CycloElem, SeqError> {
        if self.d != field.conductor() {
            return Err(SeqError::Field(CycloError::FieldMismatch {
                expected: field.conductor(),
                found: self.d,
            }));
        }
        let coords = self
            .coords
            .iter()
            .map(|s| parse_rational(s).map_err(|e| SeqError::BadRational(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(field.from_coords(coords)?)
    }

    pub fn of(field: &CycloField, e: &CycloElem) -> ElemSpec {
        ElemSpec {
            d: field.conductor(),
            coords: e.coords().iter().map(crate::arith::format_rational).collect(),
        }
    }
}

fn parse_tuple(raw: &[String]) -> Result<ParamTuple, SeqError> {
    let entries = raw
        .iter()
        .map(|s| parse_rational(s).map_err(|e| SeqError::BadRational(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    ParamTuple::new(entries)
}

// ---- the source itself ----

enum SourceKind {
    Hypergeometric {
        alpha: ParamTuple,
        beta: ParamTuple,
        scale: Rational,
    },
    Mixed {
        alpha: ParamTuple,
        beta: ParamTuple,
        d: u64,
        xi: CycloElem,
    },
    LaurentCt {
        poly: LaurentPoly,
        /// Powers of the polynomial, grown on demand.
        powers: Mutex<Vec<LaurentPoly>>,
    },
    MatrixTraceCt {
        mat: LaurentMatrix,
        powers: Mutex<Vec<LaurentMatrix>>,
    },
    Orbits {
        counts: Vec<u64>,
    },
    Fix {
        counts: Vec<u64>,
    },
    Explicit {
        offset: i64,
        terms: Vec<CycloElem>,
    },
    /// Constant coefficient rescale `n -> c * a_n` (Puiseux reduction).
    Rescaled {
        base: Arc<SequenceSource>,
        factor: Rational,
    },
    /// Eisenstein rescale `n -> lambda^n * a_n`, with `a_0` stripped.
    EisensteinScaled {
        base: Arc<SequenceSource>,
        lambda: BigInt,
    },
}

/// A pure mapping `n -> a_n` in a fixed cyclotomic field. One-sided variants
/// return 0 for negative indices; only `Explicit` carries genuine bilateral
/// data.
pub struct SequenceSource {
    field: CycloField,
    kind: SourceKind,
    cache: Mutex<HashMap<i64, CycloElem>>,
}

impl SequenceSource {
    pub fn from_spec(spec: &SequenceSpec) -> Result<SequenceSource, SeqError> {
        let (field, kind) = match spec {
            SequenceSpec::Hypergeometric { alpha, beta, scale } => {
                let alpha = parse_tuple(alpha)?;
                let beta = parse_tuple(beta)?;
                let scale =
                    parse_rational(scale).map_err(|e| SeqError::BadRational(e.to_string()))?;
                (CycloField::rationals(), SourceKind::Hypergeometric { alpha, beta, scale })
            }
            SequenceSpec::MixedHypergeometric { alpha, beta, d, xi_power } => {
                let alpha = parse_tuple(alpha)?;
                let beta = parse_tuple(beta)?;
                let lcm = alpha.denominator_lcm().lcm(&beta.denominator_lcm());
                if *d != lcm {
                    return Err(SeqError::ConductorMismatch { given: *d, lcm });
                }
                let field = CycloField::new(*d);
                let xi = field.zeta_pow(*xi_power as i64);
                (field.clone(), SourceKind::Mixed { alpha, beta, d: *d, xi })
            }
            SequenceSpec::LaurentCt { vars, terms } => {
                let d = terms.first().map(|t| t.coef.d).unwrap_or(1);
                let field = CycloField::new(d);
                let mut poly = LaurentPoly::new(*vars);
                for t in terms {
                    poly.add_term(&field, t.exp.clone(), t.coef.build(&field)?)?;
                }
                let powers = Mutex::new(vec![LaurentPoly::one(&field, *vars)]);
                (field, SourceKind::LaurentCt { poly, powers })
            }
            SequenceSpec::MatrixTraceCt { size, entries } => {
                if entries.len() != *size {
                    return Err(SeqError::NonSquareMatrix {
                        rows: entries.len(),
                        cols: *size,
                        row: 0,
                    });
                }
                let d = entries
                    .iter()
                    .flatten()
                    .flatten()
                    .next()
                    .map(|t| t.coef.d)
                    .unwrap_or(1);
                let vars = entries
                    .iter()
                    .flatten()
                    .flatten()
                    .next()
                    .map(|t| t.exp.len())
                    .unwrap_or(1);
                let field = CycloField::new(d);
                let mut mat: LaurentMatrix = Vec::with_capacity(*size);
                for (i, row) in entries.iter().enumerate() {
                    if row.len() != *size {
                        return Err(SeqError::NonSquareMatrix {
                            rows: *size,
                            cols: row.len(),
                            row: i,
                        });
                    }
                    let mut out_row = Vec::with_capacity(*size);
                    for cell in row {
                        let mut p = LaurentPoly::new(vars);
                        for t in cell {
                            p.add_term(&field, t.exp.clone(), t.coef.build(&field)?)?;
                        }
                        out_row.push(p);
                    }
                    mat.push(out_row);
                }
                let powers = Mutex::new(vec![matrix_identity(&field, *size, vars)]);
                (field, SourceKind::MatrixTraceCt { mat, powers })
            }
            SequenceSpec::Orbits { counts } => {
                (CycloField::rationals(), SourceKind::Orbits { counts: counts.clone() })
            }
            SequenceSpec::Fix { counts } => {
                (CycloField::rationals(), SourceKind::Fix { counts: counts.clone() })
            }
            SequenceSpec::Explicit { offset, terms } => {
                let d = terms.first().map(|t| t.d).unwrap_or(1);
                let field = CycloField::new(d);
                let terms = terms
                    .iter()
                    .map(|t| t.build(&field))
                    .collect::<Result<Vec<_>, _>>()?;
                (field, SourceKind::Explicit { offset: *offset, terms })
            }
        };
        Ok(SequenceSource { field, kind, cache: Mutex::new(HashMap::new()) })
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    /// Largest index for which data exists, for sources backed by finite
    /// lists; `None` when terms are defined for all indices.
    pub fn max_index(&self) -> Option<i64> {
        match &self.kind {
            SourceKind::Orbits { counts } | SourceKind::Fix { counts } => {
                Some(counts.len() as i64)
            }
            SourceKind::Rescaled { base, .. } | SourceKind::EisensteinScaled { base, .. } => {
                base.max_index()
            }
            _ => None,
        }
    }

    /// True when the source carries data at negative indices.
    pub fn is_bilateral(&self) -> bool {
        match &self.kind {
            SourceKind::Explicit { offset, .. } => *offset < 0,
            SourceKind::Rescaled { base, .. } | SourceKind::EisensteinScaled { base, .. } => {
                base.is_bilateral()
            }
            _ => false,
        }
    }

    /// The term `a_n`. Deterministic and side-effect free; cached internally.
    pub fn term(&self, n: i64) -> Result<CycloElem, SeqError> {
        if let Some(v) = self.cache.lock().unwrap().get(&n) {
            return Ok(v.clone());
        }
        let v = self.compute(n)?;
        self.cache.lock().unwrap().insert(n, v.clone());
        Ok(v)
    }

    fn compute(&self, n: i64) -> Result<CycloElem, SeqError> {
        let f = &self.field;
        match &self.kind {
            SourceKind::Hypergeometric { alpha, beta, scale } => {
                if n < 0 {
                    return Ok(f.zero_elem());
                }
                let q = pochhammer_ratio(alpha, beta, n as u64);
                let scaled = rational_pow(scale, n as u64) * q;
                Ok(f.embed_rational(scaled))
            }
            SourceKind::Mixed { alpha, beta, d, xi } => {
                if n < 0 {
                    return Ok(f.zero_elem());
                }
                mixed_coeff(alpha, beta, *d, xi, f, n as u64)
            }
            SourceKind::LaurentCt { poly, powers } => {
                if n < 0 {
                    return Ok(f.zero_elem());
                }
                let mut powers = powers.lock().unwrap();
                while powers.len() <= n as usize {
                    let next = powers.last().unwrap().mul(f, poly);
                    powers.push(next);
                }
                Ok(powers[n as usize].constant_term(f))
            }
            SourceKind::MatrixTraceCt { mat, powers } => {
                if n < 0 {
                    return Ok(f.zero_elem());
                }
                let mut powers = powers.lock().unwrap();
                while powers.len() <= n as usize {
                    let next = matrix_mul(f, powers.last().unwrap(), mat);
                    powers.push(next);
                }
                Ok(matrix_trace_constant(f, &powers[n as usize]))
            }
            SourceKind::Orbits { counts } => {
                if n <= 0 {
                    return Ok(f.zero_elem());
                }
                let fix = fix_from_orbits(counts, n as u64)?;
                Ok(f.embed_rational(Rational::from_integer(fix.into())))
            }
            SourceKind::Fix { counts } => {
                if n <= 0 {
                    return Ok(f.zero_elem());
                }
                let idx = n as usize;
                if idx > counts.len() {
                    return Err(SeqError::OutOfRange { n, max: counts.len() as i64 });
                }
                Ok(f.embed_rational(Rational::from_integer(counts[idx - 1].into())))
            }
            SourceKind::Explicit { offset, terms } => {
                let idx = n - offset;
                if idx < 0 || idx as usize >= terms.len() {
                    return Ok(f.zero_elem());
                }
                Ok(terms[idx as usize].clone())
            }
            SourceKind::Rescaled { base, factor } => {
                Ok(f.scalar_mul(factor, &base.term(n)?))
            }
            SourceKind::EisensteinScaled { base, lambda } => {
                if n < 1 {
                    return Ok(f.zero_elem());
                }
                let mut scale = BigInt::one();
                for _ in 0..n {
                    scale *= lambda;
                }
                Ok(f.scalar_mul(&Rational::from_integer(scale), &base.term(n)?))
            }
        }
    }

    /// Wrap a base source with a constant factor; used by the Puiseux
    /// reduction in the congruence module.
    pub fn rescaled(base: Arc<SequenceSource>, factor: Rational) -> SequenceSource {
        let field = base.field.clone();
        SequenceSource {
            field,
            kind: SourceKind::Rescaled { base, factor },
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// Wrap a base source as `n -> lambda^n a_n` for `n >= 1`, zero otherwise;
    /// the coefficient sequence of the stripped, Eisenstein-rescaled eta.
    pub fn eisenstein_scaled(base: Arc<SequenceSource>, lambda: BigInt) -> SequenceSource {
        let field = base.field.clone();
        SequenceSource {
            field,
            kind: SourceKind::EisensteinScaled { base, lambda },
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// Build an explicit source directly from elements (tests and internal
    /// plumbing).
    pub fn explicit(field: CycloField, offset: i64, terms: Vec<CycloElem>) -> SequenceSource {
        SequenceSource {
            field,
            kind: SourceKind::Explicit { offset, terms },
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// Access to explicit bilateral data, when this is an explicit source.
    pub fn explicit_data(&self) -> Option<(i64, &[CycloElem])> {
        match &self.kind {
            SourceKind::Explicit { offset, terms } => Some((*offset, terms)),
            _ => None,
        }
    }

    /// Hypergeometric parameter tuples, when applicable (CLI classification
    /// and the r != s warning).
    pub fn hypergeometric_params(&self) -> Option<(&ParamTuple, &ParamTuple)> {
        match &self.kind {
            SourceKind::Hypergeometric { alpha, beta, .. }
            | SourceKind::Mixed { alpha, beta, .. } => Some((alpha, beta)),
            _ => None,
        }
    }

    /// Primes that can never be scanned meaningfully for this source:
    /// divisors of the hypergeometric scale denominator/numerator are not
    /// included here; only structural data (nothing for most kinds).
    pub fn fix_counts(&self) -> Option<Vec<u64>> {
        match &self.kind {
            SourceKind::Fix { counts } => Some(counts.clone()),
            SourceKind::Orbits { counts } => (1..=counts.len() as u64)
                .map(|n| fix_from_orbits(counts, n))
                .collect::<Result<Vec<_>, _>>()
                .ok(),
            _ => None,
        }
    }
}

fn rational_pow(q: &Rational, n: u64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..n {
        acc *= q;
    }
    acc
}
