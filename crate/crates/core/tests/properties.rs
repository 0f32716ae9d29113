use num_bigint::BigInt;
use proptest::prelude::*;

use stickelberger::gauss::resolvent;
use stickelberger::group_ring::GroupRingElt;
use stickelberger::residue::{is_prime_u64, mod_pow, IndexTable};
use stickelberger::stickelberger::ideal_valuations;
use stickelberger::{BiCycloInt, CycloInt, RationalCyclo, Valuation};

const PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

fn elt(p: u64, bound: i64) -> impl Strategy<Value = CycloInt> {
    prop::collection::vec(-bound..=bound, (p - 1) as usize).prop_map(move |c| CycloInt::from_i64s(p, &c).unwrap())
}

fn prime_and_elts(bound: i64) -> impl Strategy<Value = (CycloInt, CycloInt, CycloInt)> {
    prop::sample::select(PRIMES.to_vec()).prop_flat_map(move |p| (elt(p, bound), elt(p, bound), elt(p, bound)))
}

fn nonzero_pair(bound: i64) -> impl Strategy<Value = (CycloInt, CycloInt)> {
    prime_and_elts(bound)
        .prop_map(|(x, y, _)| (x, y))
        .prop_filter("nonzero", |(x, y)| !x.is_zero() && !y.is_zero())
}

fn lambda_multiple(p: u64) -> impl Strategy<Value = CycloInt> {
    (elt(p, 50), 0u64..8).prop_map(move |(x, k)| x * CycloInt::lambda(p).pow(k))
}

proptest! {
    #[test]
    fn cyclo_ring_laws((x, y, z) in prime_and_elts(1000)) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x - &y) + &y, x.clone());
        prop_assert_eq!(&x * &CycloInt::one(x.prime()), x);
    }

    #[test]
    fn reduction_of_long_polynomials(p in prop::sample::select(PRIMES.to_vec()),
                                     poly in prop::collection::vec(-20i64..=20, 0..40)) {
        // zeta^p = 1 and 1 + zeta + ... + zeta^(p-1) = 0
        let direct = CycloInt::from_i64s(p, &poly).unwrap();
        let summed = poly.iter().enumerate().fold(CycloInt::zero(p), |acc, (k, &c)| {
            acc + CycloInt::zeta_pow(p, k as i64).scale(&BigInt::from(c))
        });
        prop_assert_eq!(direct, summed);
    }

    #[test]
    fn norm_is_multiplicative((x, y, _) in prime_and_elts(100)) {
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
    }

    #[test]
    fn galois_is_a_ring_automorphism((x, y, _) in prime_and_elts(100), t in 1i64..100) {
        let p = x.prime() as i64;
        prop_assume!(t % p != 0);
        let s = |e: &CycloInt| e.galois_subst(t).unwrap();
        prop_assert_eq!(s(&(&x * &y)), &s(&x) * &s(&y));
        prop_assert_eq!(s(&(&x + &y)), &s(&x) + &s(&y));
        prop_assert_eq!(s(&x).norm(), x.norm());
        prop_assert_eq!(s(&x).v_pi(), x.v_pi());
        prop_assert_eq!(x.conjugate().conjugate(), x);
    }

    #[test]
    fn valuation_laws((x, y) in nonzero_pair(500)) {
        prop_assert_eq!((&x * &y).v_pi(), x.v_pi() + y.v_pi());
        prop_assert!((&x + &y).v_pi() >= x.v_pi().min(y.v_pi()));
        prop_assert_eq!(x.v_pi(), x.v_pi_via_norm());
    }

    #[test]
    fn valuation_of_lambda_multiples(x in prop::sample::select(PRIMES.to_vec()).prop_flat_map(|p| elt(p, 30)),
                                     k in 0u64..12) {
        prop_assume!(!x.is_zero());
        let p = x.prime();
        let y = &x * &CycloInt::lambda(p).pow(k);
        prop_assert_eq!(y.v_pi(), x.v_pi() + Valuation::Finite(k as u32));
        prop_assert_eq!(y.v_pi(), y.v_pi_via_norm());
        prop_assert_eq!(CycloInt::from_int(p, p).v_pi(), Valuation::Finite((p - 1) as u32));
    }

    #[test]
    fn pi_adic_expansion_round_trip(x in prop::sample::select(PRIMES.to_vec()).prop_flat_map(lambda_multiple),
                                    k in 1usize..20) {
        let p = x.prime();
        let digits = x.pi_adic_expansion(k);
        prop_assert!(digits.iter().all(|&d| d < p));
        let rebuilt = digits.iter().enumerate().fold(CycloInt::zero(p), |acc, (i, &d)| {
            acc + CycloInt::lambda(p).pow(i as u64).scale(&BigInt::from(d))
        });
        prop_assert!((&x - &rebuilt).v_pi().at_least(k as u32));
    }

    #[test]
    fn serde_round_trip((x, _, _) in prime_and_elts(1_000_000)) {
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<CycloInt>(&json).unwrap(), x);
    }

    #[test]
    fn rational_inverse(x in elt(5, 20)) {
        prop_assume!(!x.is_zero());
        let r = RationalCyclo::from_cyclo(x);
        if let Ok(inv) = r.inverse() {
            prop_assert_eq!(r.checked_mul(&inv).unwrap(), RationalCyclo::one(5));
        }
    }
}

fn group_ring_elt(p: u64, v: u64) -> impl Strategy<Value = GroupRingElt> {
    prop::collection::vec(-50i64..=50, (p - 1) as usize).prop_map(move |c| GroupRingElt::from_i64s(p, v, &c).unwrap())
}

fn small_exponent(p: u64, v: u64) -> impl Strategy<Value = GroupRingElt> {
    prop::collection::vec(0i64..=2, (p - 1) as usize).prop_map(move |c| GroupRingElt::from_i64s(p, v, &c).unwrap())
}

proptest! {
    #[test]
    fn group_ring_laws(a in group_ring_elt(7, 3), b in group_ring_elt(7, 3), c in group_ring_elt(7, 3)) {
        prop_assert_eq!(a.checked_mul(&b).unwrap(), b.checked_mul(&a).unwrap());
        prop_assert_eq!(
            a.checked_mul(&b).unwrap().checked_mul(&c).unwrap(),
            a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.checked_mul(&b.checked_add(&c).unwrap()).unwrap(),
            a.checked_mul(&b).unwrap().checked_add(&a.checked_mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.checked_mul(&b).unwrap().degree(), a.degree() * b.degree());
    }

    #[test]
    fn exponent_action_is_compatible(x in elt(5, 6), e in small_exponent(5, 2), f in small_exponent(5, 2)) {
        prop_assume!(!x.is_zero());
        let sum = e.checked_add(&f).unwrap().apply_exponent(&x).unwrap();
        let split = e.apply_exponent(&x).unwrap().checked_mul(&f.apply_exponent(&x).unwrap()).unwrap();
        prop_assert_eq!(sum, split);
        let composed = e.checked_mul(&f).unwrap().apply_exponent(&x).unwrap();
        let nested = e.apply_exponent_rational(&f.apply_exponent(&x).unwrap()).unwrap();
        prop_assert_eq!(composed, nested);
        let norm_side = RationalCyclo::from_cyclo(CycloInt::from_int(5, x.norm().pow(2)));
        let all = GroupRingElt::from_i64s(5, 2, &[2, 2, 2, 2]).unwrap();
        prop_assert_eq!(all.apply_exponent(&x).unwrap(), norm_side);
    }

    #[test]
    fn bicyclo_ring_laws(a in 0i64..20, b in 0i64..20, c in 0i64..20, d in 0i64..20,
                         x in elt(5, 30), y in elt(5, 30)) {
        let q = 11;
        let m1 = BiCycloInt::monomial(5, q, a, b);
        let m2 = BiCycloInt::monomial(5, q, c, d);
        prop_assert_eq!(&m1 * &m2, BiCycloInt::monomial(5, q, a + c, b + d));
        let u = &BiCycloInt::from_cyclo(x, q).unwrap() * &m1;
        let w = &BiCycloInt::from_cyclo(y, q).unwrap() * &m2;
        prop_assert_eq!(&u * &w, &w * &u);
        prop_assert_eq!(&(&u + &w) * &m1, &(&u * &m1) + &(&w * &m1));
        prop_assert_eq!(u.conjugate().conjugate(), u.clone());
        prop_assert_eq!((&u * &w).v_pi(), u.v_pi() + w.v_pi());
    }

    #[test]
    fn ideal_valuations_are_additive(x in elt(5, 40), y in elt(5, 40), k in 0u32..3) {
        prop_assume!(!x.is_zero() && !y.is_zero());
        let x = x * CycloInt::from_int(5, 11).pow(k as u64);
        let vx = ideal_valuations(&x, 11, 12).unwrap();
        let vy = ideal_valuations(&y, 11, 12).unwrap();
        let vxy = ideal_valuations(&(&x * &y), 11, 12).unwrap();
        for (c, v) in &vxy.entries {
            prop_assert_eq!(*v, vx.entries[c] + vy.entries[c]);
        }
    }
}

#[test]
fn index_tables_are_bijections() {
    for q in (3..500).filter(|&q| is_prime_u64(q)) {
        let table = IndexTable::for_prime(q).unwrap();
        let u = table.root();
        let mut seen = vec![false; q as usize];
        for i in 1..q {
            let e = table.ind(i as i64);
            assert!((1..q).contains(&e) && !seen[e as usize], "q = {q}: index {e}");
            seen[e as usize] = true;
            assert_eq!(mod_pow(u, e, q), i, "q = {q}");
        }
    }
}

#[test]
fn resolvent_identities() {
    for (p, q) in [(3u64, 7u64), (5, 11), (7, 29), (11, 23)] {
        let v = stickelberger::residue::smallest_primitive_root(p).unwrap() as i64;
        let qq = BiCycloInt::from_cyclo(CycloInt::from_int(p, q), q).unwrap();
        for a in 1..p as i64 {
            let r = resolvent(p, q, a).unwrap();
            assert_eq!(r.conjugate(), resolvent(p, q, -a).unwrap());
            assert_eq!(&r * &resolvent(p, q, -a).unwrap(), qq);
            assert_eq!(r.galois_subst_p(v).unwrap(), resolvent(p, q, v * a).unwrap());
        }
    }
}
