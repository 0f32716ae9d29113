//! The ideal factorization of `g(q)^p` in `Z[zeta_p]`, checked prime by
//! prime when `q = 1 (mod p)` and through norms in general.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gauss::{gauss_sum_pth_power, residue_field_modulus, PairParams};
use crate::residue::{hensel_lift_phi_roots, mod_pow};
use crate::CycloInt;

/// Number of times the Hensel precision is doubled before giving up.
pub const MAX_PRECISION_DOUBLINGS: u32 = 3;

/// The default Hensel precision `p + 5`.
pub fn default_precision(p: u64) -> u32 {
    p as u32 + 5
}

/// Valuations of one element at the `p - 1` degree-one primes `(q, zeta - c)`,
/// keyed by the root `c` modulo `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealValuationVector {
    pub p: u64,
    pub q: u64,
    /// Precision the valuations were finally read at.
    pub precision: u32,
    pub entries: BTreeMap<u64, u32>,
}

impl IdealValuationVector {
    pub fn total(&self) -> u64 {
        self.entries.values().map(|&v| v as u64).sum()
    }

    /// The valuations, ascending.
    pub fn multiset(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.entries.values().copied().collect();
        v.sort_unstable();
        v
    }
}

fn q_adic_valuation(mut n: BigInt, q: &BigInt) -> u32 {
    let mut k = 0;
    while !n.is_zero() {
        let (quot, rem) = n.div_rem(q);
        if !rem.is_zero() {
            break;
        }
        n = quot;
        k += 1;
    }
    k
}

/// `v_(q, zeta - c)(x)` for every root `c` of `Phi_p` mod `q`, read from
/// `x(c~) mod q^M` for Hensel lifts `c~`. A value reaching `M` is
/// indistinguishable from saturation, so `M` is doubled (at most
/// [`MAX_PRECISION_DOUBLINGS`] times) before a precision error is raised.
pub fn ideal_valuations(x: &CycloInt, q: u64, precision: u32) -> Result<IdealValuationVector> {
    let p = x.prime();
    if q % p != 1 {
        return invalid(format!("q = {q} is not 1 modulo p = {p}"));
    }
    if x.is_zero() {
        return invalid("valuations of zero are infinite");
    }
    let qb = BigInt::from(q);
    let mut m = precision;
    for _ in 0..=MAX_PRECISION_DOUBLINGS {
        let roots = hensel_lift_phi_roots(p, q, m)?;
        let modulus = qb.pow(m);
        let mut entries = BTreeMap::new();
        let mut saturated = false;
        for root in roots {
            let value = x.eval_mod(&BigInt::from(root.lift), &modulus);
            if value.is_zero() {
                saturated = true;
                break;
            }
            entries.insert(root.seed, q_adic_valuation(value, &qb));
        }
        if !saturated {
            return Ok(IdealValuationVector { p, q, precision: m, entries });
        }
        m *= 2;
    }
    Err(Error::Precision(format!(
        "valuation of {x} above {q} still saturates at precision {}",
        m / 2
    )))
}

/// Outcome of the prime-by-prime check when `q = 1 (mod p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StickelbergerReport {
    pub p: u64,
    pub q: u64,
    pub f: u64,
    pub valuations: BTreeMap<u64, u32>,
    pub norm_ok: bool,
    pub multiset_ok: bool,
    pub correspondence_ok: bool,
}

impl StickelbergerReport {
    pub fn passed(&self) -> bool {
        self.norm_ok && self.multiset_ok && self.correspondence_ok
    }
}

/// The root `r^t mod q` of the prime `varpi_t^-1(q_0)`, where
/// `q_0 = (q, zeta - r)` is the prime fixed by [`residue_field_modulus`].
///
/// `x` lies in `varpi_s(q_0)` iff `varpi_s^-1(x)` vanishes at `r`, iff `x`
/// vanishes at `r^(s^-1)`; so `varpi_t^-1(q_0) = (q, zeta - r^t)`.
pub fn root_of_conjugate_prime(p: u64, q: u64, t: u64) -> Result<u64> {
    let h = residue_field_modulus(p, q)?;
    if h.len() != 2 {
        return invalid(format!("primes above {q} in Q(zeta_{p}) are not of degree one"));
    }
    let r = (q - h[0]) % q;
    Ok(mod_pow(r, t, q))
}

/// Checks `g^p Z[zeta_p] = prod_t varpi_t^-1(q_0)^t`: the valuations of `g^p`
/// form the multiset `{1, ..., p-1}`, the prime `varpi_t^-1(q_0)` carries
/// exactly `t`, and `|N(g^p)| = q^(p(p-1)/2)`.
pub fn verify_stickelberger_deg1(p: u64, q: u64) -> Result<StickelbergerReport> {
    verify_stickelberger_deg1_at(p, q, default_precision(p))
}

/// As [`verify_stickelberger_deg1`], starting from Hensel precision `precision`.
pub fn verify_stickelberger_deg1_at(p: u64, q: u64, precision: u32) -> Result<StickelbergerReport> {
    let params = PairParams::new(p, q)?;
    if params.f != 1 {
        return invalid(format!("q = {q} is not 1 modulo p = {p}"));
    }
    let g_p = gauss_sum_pth_power(p, q)?;
    let vals = ideal_valuations(&g_p, q, precision)?;
    let multiset_ok = vals.multiset() == (1..p as u32).collect::<Vec<_>>();
    let correspondence_ok = (1..p).try_fold(true, |ok, t| {
        let c = root_of_conjugate_prime(p, q, t)?;
        Ok::<_, Error>(ok && vals.entries.get(&c) == Some(&(t as u32)))
    })?;
    let norm_ok = g_p.norm().abs() == BigInt::from(q).pow((p * (p - 1) / 2) as u32);
    Ok(StickelbergerReport {
        p,
        q,
        f: 1,
        valuations: vals.entries,
        norm_ok,
        multiset_ok,
        correspondence_ok,
    })
}

/// Norm-level check valid for every residue degree `f`:
/// `g^p conj(g^p) = q^(f p)` and `|N(g^p)| = q^(f p (p-1)/2)`.
pub fn verify_stickelberger_norm(p: u64, q: u64) -> Result<bool> {
    let params = PairParams::new(p, q)?;
    let g_p = gauss_sum_pth_power(p, q)?;
    let qb = BigInt::from(q);
    let f = params.f as u32;
    let conj_ok = (&g_p * &g_p.conjugate()).as_integer() == Some(&qb.pow(f * p as u32));
    let norm_ok = g_p.norm().abs() == qb.pow(f * (p * (p - 1) / 2) as u32);
    Ok(conj_ok && norm_ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::phi_roots_mod_q;

    #[test]
    fn trivial_valuations() {
        let q7 = ideal_valuations(&CycloInt::from_int(3, 7), 7, 4).unwrap();
        assert!(q7.entries.values().all(|&v| v == 1));
        let one = ideal_valuations(&CycloInt::one(5), 11, 6).unwrap();
        assert_eq!(one.entries.len(), 4);
        assert!(one.entries.values().all(|&v| v == 0));
    }

    #[test]
    fn membership_matches_brute_force() {
        // zeta - c lies in (q, zeta - c') iff c = c'
        for (p, q) in [(3u64, 7u64), (5, 11), (7, 29)] {
            let roots = phi_roots_mod_q(p, q).unwrap();
            for &c in &roots {
                let x = CycloInt::zeta(p) - CycloInt::from_int(p, c);
                let vals = ideal_valuations(&x, q, 4).unwrap();
                for &c2 in &roots {
                    assert_eq!(vals.entries[&c2] > 0, c == c2, "({p}, {q}) {c} {c2}");
                }
            }
        }
    }

    #[test]
    fn galois_equivariance() {
        let (p, q) = (5u64, 11u64);
        let x = CycloInt::from_i64s(p, &[3, -1, 4, 1]).unwrap() * CycloInt::from_int(p, 11);
        let y = CycloInt::zeta(p) - CycloInt::from_int(p, 3);
        let z = &x * &y;
        let base = ideal_valuations(&z, q, 8).unwrap();
        for s in 1..p {
            let moved = ideal_valuations(&z.galois_subst(s as i64).unwrap(), q, 8).unwrap();
            // varpi_s(z) vanishes at c iff z vanishes at c^s
            for (&c, &v) in &moved.entries {
                assert_eq!(base.entries[&mod_pow(c, s, q)], v);
            }
        }
    }

    #[test]
    fn saturation_triggers_relift() {
        let x = CycloInt::from_int(3, BigInt::from(7).pow(10));
        let vals = ideal_valuations(&x, 7, 4).unwrap();
        assert!(vals.precision > 10);
        assert!(vals.entries.values().all(|&v| v == 10));
        let huge = CycloInt::from_int(3, BigInt::from(7).pow(100));
        assert!(matches!(ideal_valuations(&huge, 7, 4), Err(Error::Precision(_))));
    }

    #[test]
    fn small_pairs_verify() {
        let r = verify_stickelberger_deg1(3, 7).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(verify_stickelberger_deg1(5, 11).unwrap().passed());
        let g_p = gauss_sum_pth_power(3, 7).unwrap();
        assert_eq!(ideal_valuations(&g_p, 7, 8).unwrap().multiset(), vec![1, 2]);
        for (p, q) in [(3, 5), (5, 7), (3, 7)] {
            assert!(verify_stickelberger_norm(p, q).unwrap(), "({p}, {q})");
        }
    }
}
