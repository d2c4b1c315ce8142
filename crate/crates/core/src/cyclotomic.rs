//! Exact arithmetic in the cyclotomic field `Q(zeta_d)`.
//!
//! Elements are stored in power-basis coordinates modulo the d-th cyclotomic
//! polynomial. The power basis is an integral basis of `Q(zeta_d)`, so
//! p-integrality is a coordinate-wise valuation test and reduction modulo p
//! lands in `(Z/p)[T]/(Phi_d mod p)`, which for p not dividing d is the
//! product of the residue fields above p. The Frobenius element is the
//! explicit automorphism `zeta -> zeta^p`.

use crate::arith::{format_rational, padic_val, parse_rational, Rational, Valuation};
use crate::series::Ring;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::Arc;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CycloError {
    #[error("prime {p} is ramified in Q(zeta_{d})")]
    RamifiedPrime { p: u64, d: u64 },
    #[error("element is not {p}-integral")]
    NonIntegral { p: u64 },
    #[error("division by zero in Q(zeta_{d})")]
    DivisionByZero { d: u64 },
    #[error("element of Q(zeta_{found}) used in Q(zeta_{expected})")]
    FieldMismatch { expected: u64, found: u64 },
    #[error("malformed element: {0}")]
    Malformed(String),
}

#[derive(Debug)]
struct FieldInner {
    d: u64,
    phi: usize,
    /// Coefficients of Phi_d, low to high, monic of degree phi.
    minpoly: Vec<BigInt>,
    /// x^k mod Phi_d for k in 0..d, each of length phi.
    zeta_pows: Vec<Vec<Rational>>,
}

/// The cyclotomic field `Q(zeta_d)`; cheap to clone, shared by its elements'
/// operations.
#[derive(Debug, Clone)]
pub struct CycloField(Arc<FieldInner>);

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.0.d == other.0.d
    }
}
impl Eq for CycloField {}

/// Element of `Q(zeta_d)` as `sum coords[i] * zeta^i`, `0 <= i < phi(d)`.
/// The representation is canonical: equal elements have equal coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloElem {
    coords: Vec<Rational>,
}

impl CycloElem {
    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }
}

/// Exact division of integer polynomials, asserting zero remainder.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false), "divisor must be monic");
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len().saturating_sub(dd)];
    while rem.len() > dd {
        let lead = rem.last().unwrap().clone();
        let shift = rem.len() - 1 - dd;
        if !lead.is_zero() {
            quot[shift] = lead.clone();
            for (i, c) in den.iter().enumerate() {
                let v = &rem[shift + i] - &lead * c;
                rem[shift + i] = v;
            }
        }
        rem.pop();
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    quot
}

/// The d-th cyclotomic polynomial, by iterated exact division of x^d - 1 by
/// the Phi_e with e | d, e < d.
pub fn cyclotomic_polynomial(d: u64) -> Vec<BigInt> {
    assert!(d >= 1);
    // x^d - 1
    let mut num = vec![BigInt::zero(); d as usize + 1];
    num[0] = -BigInt::one();
    num[d as usize] = BigInt::one();
    let mut result = num;
    for e in 1..d {
        if d.is_multiple_of(e) {
            let phi_e = cyclotomic_polynomial(e);
            result = int_poly_div_exact(&result, &phi_e);
        }
    }
    result
}

fn euler_phi(d: u64) -> u64 {
    let mut n = d;
    let mut result = d;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

impl CycloField {
    pub fn new(d: u64) -> CycloField {
        assert!(d >= 1, "conductor must be positive");
        let minpoly = cyclotomic_polynomial(d);
        let phi = minpoly.len() - 1;
        debug_assert_eq!(phi as u64, euler_phi(d));
        // Build x^k mod Phi_d iteratively: multiply by x, fold the overflow
        // back in using the monic minimal polynomial.
        let mut zeta_pows: Vec<Vec<Rational>> = Vec::with_capacity(d as usize);
        let mut cur = vec![Rational::zero(); phi];
        cur[0] = Rational::one();
        for _ in 0..d {
            zeta_pows.push(cur.clone());
            let lead = cur[phi - 1].clone();
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = Rational::zero();
            if !lead.is_zero() {
                for i in 0..phi {
                    let m = Rational::from_integer(minpoly[i].clone());
                    cur[i] -= &lead * m;
                }
            }
        }
        CycloField(Arc::new(FieldInner { d, phi, minpoly, zeta_pows }))
    }

    pub fn rationals() -> CycloField {
        CycloField::new(1)
    }

    pub fn conductor(&self) -> u64 {
        self.0.d
    }

    pub fn degree(&self) -> usize {
        self.0.phi
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.0.minpoly
    }

    pub fn embed_rational(&self, q: Rational) -> CycloElem {
        let mut coords = vec![Rational::zero(); self.0.phi];
        coords[0] = q;
        CycloElem { coords }
    }

    pub fn zero_elem(&self) -> CycloElem {
        self.embed_rational(Rational::zero())
    }

    pub fn one_elem(&self) -> CycloElem {
        self.embed_rational(Rational::one())
    }

    /// `zeta^k`, reduced canonically; `k` is taken modulo `d`.
    pub fn zeta_pow(&self, k: i64) -> CycloElem {
        let d = self.0.d as i64;
        let k = k.rem_euclid(d) as usize;
        CycloElem { coords: self.0.zeta_pows[k].clone() }
    }

    pub fn add(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        CycloElem { coords }
    }

    pub fn sub(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect();
        CycloElem { coords }
    }

    pub fn neg(&self, a: &CycloElem) -> CycloElem {
        CycloElem { coords: a.coords.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        let phi = self.0.phi;
        let d = self.0.d as usize;
        let mut coords = vec![Rational::zero(); phi];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let prod = x * y;
                // zeta^d = 1, so exponents wrap modulo d before reduction.
                let pow = &self.0.zeta_pows[(i + j) % d];
                for (k, c) in pow.iter().enumerate() {
                    if !c.is_zero() {
                        coords[k] += &prod * c;
                    }
                }
            }
        }
        CycloElem { coords }
    }

    pub fn scalar_mul(&self, q: &Rational, a: &CycloElem) -> CycloElem {
        CycloElem { coords: a.coords.iter().map(|x| x * q).collect() }
    }

    pub fn is_zero(&self, a: &CycloElem) -> bool {
        a.coords.iter().all(|c| c.is_zero())
    }

    /// Multiplicative inverse via the extended Euclidean algorithm on the
    /// coordinate polynomial and Phi_d over `Q`.
    pub fn inv(&self, a: &CycloElem) -> Result<CycloElem, CycloError> {
        if self.is_zero(a) {
            return Err(CycloError::DivisionByZero { d: self.0.d });
        }
        let modp: Vec<Rational> = self
            .0
            .minpoly
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        // Invariant: r0 = u0*a (mod Phi_d), r1 = u1*a (mod Phi_d).
        let mut r0 = modp;
        let mut r1 = trim(a.coords.clone());
        let mut u0: Vec<Rational> = vec![];
        let mut u1: Vec<Rational> = vec![Rational::one()];
        while !r1.is_empty() {
            let (q, r) = rat_poly_divrem(&r0, &r1);
            let u = rat_poly_sub(&u0, &rat_poly_mul(&q, &u1));
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = u;
        }
        // r0 is a nonzero constant: Phi_d is irreducible over Q.
        assert_eq!(r0.len(), 1, "cyclotomic polynomial must be irreducible");
        let c = r0[0].recip();
        let mut coords = vec![Rational::zero(); self.0.phi];
        for (i, v) in u0.iter().enumerate() {
            coords[i] = v * &c;
        }
        Ok(CycloElem { coords })
    }

    /// The Frobenius automorphism `zeta -> zeta^p` for p unramified.
    pub fn frobenius(&self, a: &CycloElem, p: u64) -> Result<CycloElem, CycloError> {
        let d = self.0.d;
        if d.is_multiple_of(p) {
            return Err(CycloError::RamifiedPrime { p, d });
        }
        let mut coords = vec![Rational::zero(); self.0.phi];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let pow = &self.0.zeta_pows[((i as u64 * p) % d) as usize];
            for (k, c) in pow.iter().enumerate() {
                if !c.is_zero() {
                    coords[k] += x * c;
                }
            }
        }
        Ok(CycloElem { coords })
    }

    /// Minimum p-adic valuation over coordinates. Since the power basis is an
    /// integral basis, `a` lies in `p^s` times the localization at every
    /// prime above p iff this is at least `s`.
    pub fn val_min(&self, a: &CycloElem, p: u64) -> Valuation {
        a.coords
            .iter()
            .map(|c| padic_val(c, p))
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    /// The residue ring `(Z/p)[T]/(Phi_d mod p)`.
    pub fn residue_ring(&self, p: u64) -> ResidueRing {
        let modulus = self
            .0
            .minpoly
            .iter()
            .map(|c| {
                let r = c % BigInt::from(p);
                let r = if r.is_negative() { r + BigInt::from(p) } else { r };
                r.to_u64().unwrap()
            })
            .collect();
        ResidueRing { p, d: self.0.d, modulus: Arc::new(modulus) }
    }

    /// Coordinate-wise reduction modulo p, for a p-integral element.
    pub fn residue_project(&self, a: &CycloElem, p: u64) -> Result<ResidueElem, CycloError> {
        let ring = self.residue_ring(p);
        let mut coeffs = Vec::with_capacity(self.0.phi);
        for c in &a.coords {
            if !padic_val(c, p).is_at_least(0) {
                return Err(CycloError::NonIntegral { p });
            }
            coeffs.push(reduce_rational_mod(c, p));
        }
        Ok(ResidueElem { coeffs, p: ring.p })
    }

    /// `Some(q)` iff the element is the rational `q`.
    pub fn as_rational(&self, a: &CycloElem) -> Option<Rational> {
        if a.coords[1..].iter().all(|c| c.is_zero()) {
            Some(a.coords[0].clone())
        } else {
            None
        }
    }

    pub fn from_coords(&self, coords: Vec<Rational>) -> Result<CycloElem, CycloError> {
        if coords.len() != self.0.phi {
            return Err(CycloError::Malformed(format!(
                "expected {} coordinates, got {}",
                self.0.phi,
                coords.len()
            )));
        }
        Ok(CycloElem { coords })
    }

    pub fn elem_to_json(&self, a: &CycloElem) -> serde_json::Value {
        serde_json::json!({
            "d": self.0.d,
            "coords": a.coords.iter().map(format_rational).collect::<Vec<_>>(),
        })
    }

    pub fn elem_from_json(&self, v: &serde_json::Value) -> Result<CycloElem, CycloError> {
        let d = v
            .get("d")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| CycloError::Malformed("missing conductor".into()))?;
        if d != self.0.d {
            return Err(CycloError::FieldMismatch { expected: self.0.d, found: d });
        }
        let coords = v
            .get("coords")
            .and_then(|x| x.as_array())
            .ok_or_else(|| CycloError::Malformed("missing coords".into()))?
            .iter()
            .map(|c| {
                c.as_str()
                    .ok_or_else(|| CycloError::Malformed("coordinate must be a string".into()))
                    .and_then(|s| {
                        parse_rational(s).map_err(|e| CycloError::Malformed(e.to_string()))
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.from_coords(coords)
    }
}

impl Ring for CycloField {
    type Elem = CycloElem;

    fn zero(&self) -> CycloElem {
        self.zero_elem()
    }
    fn one(&self) -> CycloElem {
        self.one_elem()
    }
    fn add(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        CycloField::add(self, a, b)
    }
    fn neg(&self, a: &CycloElem) -> CycloElem {
        CycloField::neg(self, a)
    }
    fn mul(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        CycloField::mul(self, a, b)
    }
    fn embed_int(&self, n: i64) -> CycloElem {
        self.embed_rational(Rational::from_integer(n.into()))
    }
    fn is_zero(&self, a: &CycloElem) -> bool {
        CycloField::is_zero(self, a)
    }
}

fn reduce_rational_mod(q: &Rational, p: u64) -> u64 {
    let p_big = BigInt::from(p);
    let num = ((q.numer() % &p_big) + &p_big) % &p_big;
    let den = ((q.denom() % &p_big) + &p_big) % &p_big;
    let num = num.to_u64().unwrap();
    let den = den.to_u64().unwrap();
    debug_assert!(den != 0);
    num * mod_inv(den, p) % p
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat: p is prime in every caller.
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut base = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        e >>= 1;
        base = base * base % m as u128;
    }
    acc as u64
}

// ---- dense rational polynomial helpers for the extended gcd ----

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn rat_poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn rat_poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn rat_poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    if rem.len() <= db {
        return (vec![], trim(rem));
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    while rem.len() > db {
        let c = rem.last().unwrap() / lead;
        let shift = rem.len() - 1 - db;
        if !c.is_zero() {
            quot[shift] = c.clone();
            for (i, bc) in b.iter().enumerate() {
                let v = &rem[shift + i] - &c * bc;
                rem[shift + i] = v;
            }
        }
        rem.pop();
    }
    (trim(quot), trim(rem))
}

// ---- residue ring ----

/// `(Z/p)[T]/(Phi_d mod p)`; for p not dividing d this is the product of the
/// residue fields above p, so vanishing here means vanishing modulo every
/// prime above p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueRing {
    p: u64,
    d: u64,
    /// Phi_d mod p, monic, low to high.
    modulus: Arc<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueElem {
    /// Length phi(d), coefficients in [0, p).
    coeffs: Vec<u64>,
    p: u64,
}

impl ResidueElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

impl ResidueRing {
    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&self, mut poly: Vec<u64>) -> Vec<u64> {
        let phi = self.degree();
        let p = self.p as u128;
        while poly.len() > phi {
            let lead = *poly.last().unwrap();
            let shift = poly.len() - 1 - phi;
            if lead != 0 {
                for (i, &m) in self.modulus.iter().enumerate() {
                    let sub = lead as u128 * m as u128 % p;
                    poly[shift + i] =
                        ((poly[shift + i] as u128 + p - sub) % p) as u64;
                }
            }
            poly.pop();
        }
        poly.resize(phi, 0);
        poly
    }
}

impl Ring for ResidueRing {
    type Elem = ResidueElem;

    fn zero(&self) -> ResidueElem {
        ResidueElem { coeffs: vec![0; self.degree()], p: self.p }
    }

    fn one(&self) -> ResidueElem {
        let mut e = self.zero();
        e.coeffs[0] = 1 % self.p;
        e
    }

    fn add(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        ResidueElem { coeffs, p: self.p }
    }

    fn neg(&self, a: &ResidueElem) -> ResidueElem {
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        ResidueElem { coeffs, p: self.p }
    }

    fn mul(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        let phi = self.degree();
        if phi == 0 {
            return self.zero();
        }
        let p = self.p as u128;
        let mut prod = vec![0u64; 2 * phi - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u128 + x as u128 * y as u128) % p) as u64;
            }
        }
        ResidueElem { coeffs: self.reduce(prod), p: self.p }
    }

    fn embed_int(&self, n: i64) -> ResidueElem {
        let mut e = self.zero();
        if self.degree() > 0 {
            e.coeffs[0] = n.rem_euclid(self.p as i64) as u64;
        }
        e
    }

    fn is_zero(&self, a: &ResidueElem) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }
}
