//! Randomized invariants: arithmetic laws, series identities, Frobenius
//! structure, and congruence-preservation properties.

use gauss_cartier::arith::{padic_val, primes_in, rat, Rational, Valuation};
use gauss_cartier::congruence::{cartier_check, gauss_check};
use gauss_cartier::cyclotomic::CycloField;
use gauss_cartier::dynzeta::{fix_counts_from_orbits, orbit_invert};
use gauss_cartier::hypergeom::conjugate_family;
use gauss_cartier::sequences::{
    laurent_ct, pochhammer_ratio, LaurentPoly, ParamTuple, SequenceSource,
};
use gauss_cartier::series::{Ring, RationalRing, TruncSeries};
use num_traits::{One, Zero};
use proptest::prelude::*;
use std::sync::Arc;

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (-200i64..200, 1i64..60)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| rat(n, d))
}

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(primes_in(2, 50))
}

fn rational_series(len: usize) -> impl Strategy<Value = TruncSeries<RationalRing>> {
    prop::collection::vec((-20i64..20, 1i64..8).prop_map(|(n, d)| rat(n, d)), len..=len)
        .prop_map(move |v| TruncSeries::from_coeffs(RationalRing, v, len))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn padic_valuation_is_additive(a in nonzero_rational(), b in nonzero_rational(), p in small_prime()) {
        let (Valuation::Finite(va), Valuation::Finite(vb)) = (padic_val(&a, p), padic_val(&b, p))
        else { unreachable!("nonzero inputs") };
        prop_assert_eq!(padic_val(&(a * b), p), Valuation::Finite(va + vb));
    }

    #[test]
    fn exp_log_roundtrip(f in rational_series(15)) {
        // 1 + x*f has constant term 1, the domain of log
        let mut coeffs = vec![Rational::one()];
        coeffs.extend(f.coeffs().iter().take(14).cloned());
        let g = TruncSeries::from_coeffs(RationalRing, coeffs, 15);
        prop_assert_eq!(g.log().exp(), g);
    }

    #[test]
    fn log_exp_roundtrip(f in rational_series(15)) {
        // x*f has zero constant term, the domain of exp
        let mut coeffs = vec![Rational::zero()];
        coeffs.extend(f.coeffs().iter().take(14).cloned());
        let s = TruncSeries::from_coeffs(RationalRing, coeffs, 15);
        prop_assert_eq!(s.exp().log(), s);
    }

    #[test]
    fn derivative_satisfies_leibniz(f in rational_series(12), g in rational_series(12)) {
        let lhs = f.mul(&g).derive();
        let rhs = f.derive().mul(&g.truncate(11)).add(&f.truncate(11).mul(&g.derive()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn frobenius_order_divides_phi(
        d in prop::sample::select(vec![1u64, 3, 4, 8, 12]),
        p in small_prime(),
        k in 0i64..24,
        q in nonzero_rational(),
    ) {
        prop_assume!(d % p != 0);
        let f = CycloField::new(d);
        let a = f.scalar_mul(&q, &f.zeta_pow(k));
        let mut b = a.clone();
        for _ in 0..f.degree() {
            b = f.frobenius(&b, p).unwrap();
            if b == a {
                break;
            }
        }
        prop_assert_eq!(b, a, "tau_p has order dividing phi(d)");
    }

    #[test]
    fn frobenius_is_pth_power_on_residues(
        d in prop::sample::select(vec![1u64, 3, 4, 8, 12]),
        p in small_prime(),
        coords in prop::collection::vec(-10i64..10, 4),
    ) {
        prop_assume!(d % p != 0);
        let f = CycloField::new(d);
        let a = f.from_coords(
            coords.iter().take(f.degree()).map(|&c| rat(c, 1)).collect()
        ).unwrap();
        let ring = f.residue_ring(p);
        let tau = f.residue_project(&f.frobenius(&a, p).unwrap(), p).unwrap();
        let r = f.residue_project(&a, p).unwrap();
        let mut pw = ring.one();
        for _ in 0..p {
            pw = ring.mul(&pw, &r);
        }
        prop_assert_eq!(tau, pw);
    }

    #[test]
    fn power_sums_satisfy_gauss_and_cartier(
        roots in prop::collection::vec(-9i64..9, 1..4),
        p in small_prime(),
    ) {
        // a_n = sum_i c_i^n is a trace sequence: Gauss holds at every prime,
        // and Gauss implies Cartier.
        let f = CycloField::rationals();
        let terms: Vec<_> = (0..=60)
            .map(|n: u32| {
                let s: num_bigint::BigInt =
                    roots.iter().map(|&c| num_bigint::BigInt::from(c).pow(n)).sum();
                f.embed_rational(Rational::from_integer(s))
            })
            .collect();
        let seq = SequenceSource::explicit(f, 0, terms);
        let g = gauss_check(&seq, p, 60);
        let c = cartier_check(&seq, p, 60);
        prop_assert_eq!(g.status, gauss_cartier::congruence::PrimeStatus::HoldsToBound);
        prop_assert_eq!(c.status, gauss_cartier::congruence::PrimeStatus::HoldsToBound);
    }

    #[test]
    fn gauss_requirement_matches_vp_of_np(n in 1i64..500, p in small_prime()) {
        // mod np O means valuation >= 1 + v_p(n), i.e. v_p(np)
        let np = rat(n, 1) * rat(p as i64, 1);
        let (Valuation::Finite(v_n), Valuation::Finite(v_np)) =
            (padic_val(&rat(n, 1), p), padic_val(&np, p))
        else { unreachable!("nonzero") };
        prop_assert_eq!(v_np, v_n + 1);
    }

    #[test]
    fn integer_rescale_preserves_gauss(
        roots in prop::collection::vec(-6i64..6, 1..3),
        factor in 1i64..30,
        p in small_prime(),
    ) {
        let f = CycloField::rationals();
        let terms: Vec<_> = (0..=60)
            .map(|n: u32| {
                let s: num_bigint::BigInt =
                    roots.iter().map(|&c| num_bigint::BigInt::from(c).pow(n)).sum();
                f.embed_rational(Rational::from_integer(s))
            })
            .collect();
        let base = Arc::new(SequenceSource::explicit(f, 0, terms));
        let scaled = SequenceSource::rescaled(base, rat(factor, 1));
        prop_assert_eq!(
            gauss_check(&scaled, p, 60).status,
            gauss_cartier::congruence::PrimeStatus::HoldsToBound
        );
    }

    #[test]
    fn pochhammer_forward_recurrence(
        a_num in 1i64..12, a_den in 1i64..12,
        b_num in 1i64..12, b_den in 1i64..12,
        n in 0u64..15,
    ) {
        prop_assume!(a_num <= a_den && b_num <= b_den);
        let alpha = ParamTuple::new(vec![rat(a_num, a_den)]).unwrap();
        let beta = ParamTuple::new(vec![rat(b_num, b_den)]).unwrap();
        let nq = rat(n as i64, 1);
        let lhs = pochhammer_ratio(&alpha, &beta, n + 1);
        let rhs = pochhammer_ratio(&alpha, &beta, n)
            * (rat(a_num, a_den) + &nq) / (rat(b_num, b_den) + nq);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn laurent_ct_respects_power_splitting(
        coefs in prop::collection::vec(-5i64..5, 3),
        m in 0u64..5, n in 0u64..5,
    ) {
        // ct(L^(m+n)) computed directly equals the constant term of the
        // product of the separately computed powers.
        let f = CycloField::rationals();
        let mut l = LaurentPoly::new(1);
        for (i, &c) in coefs.iter().enumerate() {
            l.add_term(&f, vec![i as i64 - 1], f.embed_rational(rat(c, 1))).unwrap();
        }
        let direct = laurent_ct(&f, &l, m + n);
        let mut pm = LaurentPoly::one(&f, 1);
        for _ in 0..m { pm = pm.mul(&f, &l); }
        let mut pn = LaurentPoly::one(&f, 1);
        for _ in 0..n { pn = pn.mul(&f, &l); }
        prop_assert_eq!(direct, pm.mul(&f, &pn).constant_term(&f));
    }

    #[test]
    fn orbit_fix_roundtrip(orbits in prop::collection::vec(0u64..20, 1..12)) {
        let fix = fix_counts_from_orbits(&orbits);
        let back = orbit_invert(&fix);
        for (e, &o) in back.iter().zip(&orbits) {
            prop_assert_eq!(e.count.clone(), rat(o as i64, 1));
            prop_assert!(e.nonnegative);
        }
    }

    #[test]
    fn realizable_fix_sequences_satisfy_gauss(
        orbits in prop::collection::vec(0u64..8, 10..14),
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
    ) {
        // Dold: fix counts of a genuine map satisfy a_{np} = a_n mod np over Z.
        let fix = fix_counts_from_orbits(&orbits);
        let f = CycloField::rationals();
        let mut terms = vec![f.zero_elem()];
        terms.extend(fix.iter().map(|&c| f.embed_rational(rat(c, 1))));
        let seq = SequenceSource::explicit(f, 0, terms);
        let rec = gauss_check(&seq, p, orbits.len() as i64);
        prop_assert_eq!(rec.status, gauss_cartier::congruence::PrimeStatus::HoldsToBound);
    }

    #[test]
    fn conjugate_family_is_an_involution_closed_set(
        k_seed in 1u64..12,
    ) {
        // rescaling by any member index permutes the family
        let alpha = ParamTuple::new(vec![rat(1, 4), rat(11, 12)]).unwrap();
        let beta = ParamTuple::new(vec![rat(1, 2), rat(1, 1)]).unwrap();
        let fam = conjugate_family(&alpha, &beta);
        let (k, _, _) = fam[k_seed as usize % fam.len()].clone();
        let rescaled: Vec<_> = fam
            .iter()
            .map(|(_, a, b)| (a.scaled_bracket(k as i64), b.scaled_bracket(k as i64)))
            .collect();
        for (a, b) in &rescaled {
            prop_assert!(fam.iter().any(|(_, fa, fb)| fa == a && fb == b));
        }
    }
}

#[test]
fn mixed_family_coefficients_are_integral_at_unramified_primes() {
    // The mixed sequence for the quartic example family has
    // p-integral coefficients for p coprime to 12, up to n = 40.
    let spec = gauss_cartier::sequences::SequenceSpec::MixedHypergeometric {
        alpha: vec!["1/4".into(), "11/12".into()],
        beta: vec!["1/2".into(), "1".into()],
        d: 12,
        xi_power: 1,
    };
    let seq = SequenceSource::from_spec(&spec).unwrap();
    let field = seq.field().clone();
    for n in 0..=40 {
        let t = seq.term(n).unwrap();
        for p in [5u64, 7, 11, 13, 17] {
            assert!(
                field.val_min(&t, p).is_at_least(0),
                "n = {n}, p = {p}"
            );
        }
    }
}
