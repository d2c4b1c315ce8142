//! Truncated power series over an explicit coefficient ring.
//!
//! A series of precision `N` is known modulo `x^N`: it stores exactly `N`
//! coefficients. Binary operations truncate to the minimum precision of their
//! operands, so precision is monotone-decreasing through a computation and a
//! result is never claimed beyond what its inputs support.

use crate::arith::{padic_val, Rational, Valuation};
use num_traits::{One, Zero};
use std::fmt::Debug;

/// Coefficient-ring context. Elements do not carry their ring; every
/// operation goes through the context, which makes mod-p residue rings and
/// cyclotomic fields (whose elements need shared data) uniform with `Q`.
pub trait Ring: Clone + PartialEq {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Image of a rational integer in the ring.
    fn embed_int(&self, n: i64) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
}

/// The rationals as a coefficient ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RationalRing;

impl Ring for RationalRing {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn embed_int(&self, n: i64) -> Rational {
        Rational::from_integer(n.into())
    }
}

/// Power series known modulo `x^precision`, coefficients in low-to-high order.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncSeries<R: Ring> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> TruncSeries<R> {
    pub fn from_coeffs(ring: R, mut coeffs: Vec<R::Elem>, precision: usize) -> Self {
        coeffs.truncate(precision);
        while coeffs.len() < precision {
            coeffs.push(ring.zero());
        }
        TruncSeries { ring, coeffs }
    }

    pub fn zero(ring: R, precision: usize) -> Self {
        let coeffs = vec![ring.zero(); precision];
        TruncSeries { ring, coeffs }
    }

    pub fn one(ring: R, precision: usize) -> Self {
        let mut s = Self::zero(ring, precision);
        if precision > 0 {
            s.coeffs[0] = s.ring.one();
        }
        s
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> &R::Elem {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let n = precision.min(self.coeffs.len());
        TruncSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs[..n].to_vec(),
        }
    }

    /// Smallest exponent with a nonzero coefficient, if any below the precision.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !self.ring.is_zero(c))
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.first_nonzero().is_none()
    }

    fn common_precision(&self, other: &Self) -> usize {
        assert!(self.ring == other.ring, "series over different rings");
        self.coeffs.len().min(other.coeffs.len())
    }

    /// Compare only the common prefix; the returned precision flags how far
    /// the comparison actually reached.
    pub fn prefix_eq(&self, other: &Self) -> (bool, usize) {
        let n = self.common_precision(other);
        (self.coeffs[..n] == other.coeffs[..n], n)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.common_precision(other);
        let coeffs = (0..n)
            .map(|i| self.ring.add(&self.coeffs[i], &other.coeffs[i]))
            .collect();
        TruncSeries {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.ring.neg(c)).collect();
        TruncSeries {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.common_precision(other);
        let mut coeffs = vec![self.ring.zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if self.ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                let prod = self.ring.mul(a, b);
                coeffs[i + j] = self.ring.add(&coeffs[i + j], &prod);
            }
        }
        TruncSeries {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    pub fn scalar_mul(&self, c: &R::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.ring.mul(c, a)).collect();
        TruncSeries {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    /// Formal derivative; precision drops by one.
    pub fn derive(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.ring.mul(&self.ring.embed_int(i as i64), c))
            .collect();
        TruncSeries {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    /// `k`-fold derivative.
    pub fn derive_n(&self, k: usize) -> Self {
        let mut s = self.clone();
        for _ in 0..k {
            s = s.derive();
        }
        s
    }

    /// Power by repeated squaring; precision is preserved.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.ring.clone(), self.precision());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl TruncSeries<RationalRing> {
    /// `exp(s)` via the recurrence `g' = s'·g`, `g(0) = 1`.
    ///
    /// Panics if the constant term is nonzero.
    pub fn exp(&self) -> Self {
        let n = self.precision();
        if n == 0 {
            return Self::zero(RationalRing, 0);
        }
        assert!(
            self.coeffs[0].is_zero(),
            "series_exp requires constant term 0"
        );
        let mut g = vec![Rational::zero(); n];
        g[0] = Rational::one();
        for m in 1..n {
            // m·g_m = sum_{k=1}^{m} k·s_k·g_{m-k}
            let mut acc = Rational::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    acc += Rational::from_integer(k.into()) * &self.coeffs[k] * &g[m - k];
                }
            }
            g[m] = acc / Rational::from_integer(m.into());
        }
        Self::from_coeffs(RationalRing, g, n)
    }

    /// `log(f)` for `f` with constant term 1; inverse of [`Self::exp`] at the
    /// working precision.
    pub fn log(&self) -> Self {
        let n = self.precision();
        if n == 0 {
            return Self::zero(RationalRing, 0);
        }
        assert!(
            self.coeffs[0].is_one(),
            "series_log requires constant term 1"
        );
        let mut s = vec![Rational::zero(); n];
        for m in 1..n {
            // m·f_m = sum_{k=1}^{m} k·s_k·f_{m-k}, solved for s_m
            let mut acc = Rational::from_integer(m.into()) * &self.coeffs[m];
            for (k, s_k) in s.iter().enumerate().take(m).skip(1) {
                acc -= Rational::from_integer(k.into()) * s_k * &self.coeffs[m - k];
            }
            s[m] = acc / Rational::from_integer(m.into());
        }
        Self::from_coeffs(RationalRing, s, n)
    }

    /// Minimum p-adic valuation over all known coefficients.
    pub fn min_valuation(&self, p: u64) -> Valuation {
        self.coeffs
            .iter()
            .map(|c| padic_val(c, p))
            .min()
            .unwrap_or(Valuation::Infinite)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn qs(coeffs: &[(i64, i64)], prec: usize) -> TruncSeries<RationalRing> {
        TruncSeries::from_coeffs(
            RationalRing,
            coeffs.iter().map(|&(n, d)| rat(n, d)).collect(),
            prec,
        )
    }

    #[test]
    fn derive_drops_precision() {
        let s = qs(&[(1, 1), (1, 1), (1, 1)], 3);
        let d = s.derive();
        assert_eq!(d.precision(), 2);
        assert_eq!(d, qs(&[(1, 1), (2, 1)], 2));
    }

    #[test]
    fn mul_truncates() {
        let a = qs(&[(1, 1), (1, 1)], 4);
        let b = qs(&[(1, 1), (-1, 1)], 4);
        assert_eq!(a.mul(&b), qs(&[(1, 1), (0, 1), (-1, 1)], 4));
    }

    #[test]
    fn pow_truncates() {
        let a = qs(&[(1, 1), (1, 1)], 2);
        assert_eq!(a.pow(3), qs(&[(1, 1), (3, 1)], 2));
    }

    #[test]
    fn exp_of_zero_is_one() {
        let z = TruncSeries::zero(RationalRing, 5);
        assert_eq!(z.exp(), TruncSeries::one(RationalRing, 5));
    }

    #[test]
    fn exp_of_minus_log_one_minus_x() {
        // exp(sum x^n/n) = 1/(1-x)
        let s = TruncSeries::from_coeffs(
            RationalRing,
            (0..5).map(|n| if n == 0 { rat(0, 1) } else { rat(1, n) }).collect(),
            5,
        );
        let g = s.exp();
        assert_eq!(g, qs(&[(1, 1); 5], 5));
    }

    #[test]
    fn log_of_one_plus_x() {
        let f = qs(&[(1, 1), (1, 1), (0, 1), (0, 1)], 4);
        assert_eq!(f.log(), qs(&[(0, 1), (1, 1), (-1, 2), (1, 3)], 4));
    }

    #[test]
    fn prefix_comparison_flags_common_precision() {
        let a = qs(&[(0, 1), (0, 1), (7, 1)], 3);
        let b = TruncSeries::zero(RationalRing, 2);
        let (eq, prec) = a.prefix_eq(&b);
        assert!(eq);
        assert_eq!(prec, 2);
        let (eq, prec) = a.prefix_eq(&TruncSeries::zero(RationalRing, 3));
        assert!(!eq);
        assert_eq!(prec, 3);
    }
}
