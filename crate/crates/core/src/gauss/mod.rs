//! Gauss sums as character sums and as Jacobi resolvents, the Jacobi
//! cyclotomic function `psi_{a,b}` and the invariant `rho`.

pub mod field;

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cyclo::kernel::Torus;
use crate::error::{invalid, Error, Result};
use crate::residue::{
    is_prime_u64, mod_inverse, mod_pow, multiplicative_order, smallest_primitive_root, IndexTable,
};
use crate::{BiCycloInt, CycloInt, Valuation};
pub use field::{FiniteField, FiniteFieldElem};

/// Largest residue field enumerated by the character-sum construction.
pub const MAX_FIELD_SIZE: u64 = 10_000_000;

fn require_pair(p: u64, q: u64) -> Result<()> {
    for (name, m) in [("p", p), ("q", q)] {
        if m < 3 || !is_prime_u64(m) {
            return invalid(format!("{name} = {m} is not an odd prime"));
        }
    }
    if p == q {
        return invalid(format!("p and q must differ, both are {p}"));
    }
    Ok(())
}

fn require_split(p: u64, q: u64) -> Result<()> {
    require_pair(p, q)?;
    if q % p != 1 {
        return invalid(format!("q = {q} is not 1 modulo p = {p}"));
    }
    Ok(())
}

/// The fixed data of a pair: residue degree `f` and the smallest primitive
/// roots `u` mod `q` and `v` mod `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairParams {
    pub p: u64,
    pub q: u64,
    pub f: u64,
    pub u: u64,
    pub v: u64,
}

impl PairParams {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        require_pair(p, q)?;
        Ok(PairParams {
            p,
            q,
            f: multiplicative_order(q % p, p).expect("q is a unit mod p"),
            u: smallest_primitive_root(q)?,
            v: smallest_primitive_root(p)?,
        })
    }
}

/// The modulus `h | Phi_p (mod q)` defining the residue field used by
/// [`gauss_sum_charsum`].
///
/// For `f = 1` this is `x - r` with `r = w^k`, `w = u^((q-1)/p)` and
/// `k = -v^-1 mod p`; this is the prime for which the character sum equals
/// [`gauss_sum_resolvent`] on the nose. For `f > 1` it is the smallest
/// irreducible factor, comparing coefficient vectors from the constant term.
pub fn residue_field_modulus(p: u64, q: u64) -> Result<Vec<u64>> {
    let params = PairParams::new(p, q)?;
    if params.f == 1 {
        let w = mod_pow(params.u, (q - 1) / p, q);
        let v_inv = mod_inverse(params.v as i64, p).expect("v is a unit");
        let r = mod_pow(w, (p - v_inv) % p, q);
        return Ok(vec![(q - r) % q, 1]);
    }
    let factors = field::berlekamp_factor(&field::cyclotomic_mod(p, q), q)?;
    factors
        .into_iter()
        .find(|h| h.len() as u64 == params.f + 1)
        .ok_or_else(|| Error::Internal(format!("no degree-{} factor of Phi_{p} mod {q}", params.f)))
}

/// Coefficients of the character sum before reduction in `zeta_q`: entry `t`
/// is the `Z[zeta_p]`-coefficient of `zeta_q^t`, for `t` in `0..q`.
pub fn gauss_sum_charsum_terms(p: u64, q: u64) -> Result<Vec<CycloInt>> {
    let h = residue_field_modulus(p, q)?;
    let torus = charsum_torus(p, q, h)?;
    Ok((0..q as usize)
        .map(|t| {
            let mut row = Torus::zero(p as usize, 1);
            for i in 0..p as usize {
                row.data[i] = torus.data[i + p as usize * t].clone();
            }
            CycloInt::from_torus(p, row)
        })
        .collect())
}

fn charsum_torus(p: u64, q: u64, h: Vec<u64>) -> Result<Torus> {
    let field = FiniteField::new(p, q, h)?;
    let m = field
        .size()
        .filter(|&m| m <= MAX_FIELD_SIZE)
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "residue field F_{q}^{} exceeds the enumeration limit {MAX_FIELD_SIZE}",
                field.degree()
            ))
        })?;
    let x = field.generator_of_roots();
    let powers: Vec<FiniteFieldElem> = (0..p).map(|c| field.pow(&x, c)).collect();
    let exponent = (m - 1) / p;
    let mut acc = Torus::zero(p as usize, q as usize);
    for alpha in field.nonzero_elements() {
        let image = field.pow(&alpha, exponent);
        let c = powers.iter().position(|w| *w == image).ok_or_else(|| {
            Error::Internal(format!("{:?}^((m-1)/p) is not a power of x", alpha.rep()))
        })? as u64;
        let tr = field.trace_linear(&alpha);
        acc.add_at(((p - c) % p) as usize, tr as usize, 1);
    }
    Ok(acc)
}

/// `g(q) = sum_{a != 0} chi(a) zeta_q^Tr(a)` over the residue field
/// `F_q[x]/h`, where `chi(a) = zeta_p^-c` for `a^((m-1)/p) = x^c`.
pub fn gauss_sum_charsum(p: u64, q: u64) -> Result<BiCycloInt> {
    let h = residue_field_modulus(p, q)?;
    gauss_sum_charsum_with(p, q, h)
}

/// As [`gauss_sum_charsum`] with an explicit field modulus `h`.
pub fn gauss_sum_charsum_with(p: u64, q: u64, h: Vec<u64>) -> Result<BiCycloInt> {
    require_pair(p, q)?;
    Ok(BiCycloInt::from_torus(p, q, charsum_torus(p, q, h)?))
}

/// The Jacobi resolvent `<zeta_p^a, zeta_q> = sum_{x in F_q^*} zeta_p^(a ind_u(x)) zeta_q^x`,
/// equivalently `sum_{i=0}^{q-2} zeta_p^(a i) zeta_q^(u^i)`.
pub fn resolvent(p: u64, q: u64, a: i64) -> Result<BiCycloInt> {
    require_split(p, q)?;
    let u = smallest_primitive_root(q)?;
    let mut t = Torus::zero(p as usize, q as usize);
    let mut x = 1u64;
    for i in 0..q as i64 - 1 {
        t.add_at((a * i).rem_euclid(p as i64) as usize, x as usize, 1);
        x = x * u % q;
    }
    Ok(BiCycloInt::from_torus(p, q, t))
}

/// `g(q) = sum_{i=0}^{q-2} zeta_p^(-v i) zeta_q^(u^-i)`, which is `resolvent(v)`.
pub fn gauss_sum_resolvent(p: u64, q: u64) -> Result<BiCycloInt> {
    require_split(p, q)?;
    let u = smallest_primitive_root(q)?;
    let v = smallest_primitive_root(p)?;
    let u_inv = mod_inverse(u as i64, q).expect("u is a unit");
    let mut t = Torus::zero(p as usize, q as usize);
    let mut x = 1u64;
    for i in 0..q - 1 {
        let e = (p - (v * i) % p) % p;
        t.add_at(e as usize, x as usize, 1);
        x = x * u_inv % q;
    }
    Ok(BiCycloInt::from_torus(p, q, t))
}

fn require_psi_args(p: u64, q: u64, a: i64, b: i64) -> Result<()> {
    require_split(p, q)?;
    let pi = p as i64;
    if a.rem_euclid(pi) == 0 || b.rem_euclid(pi) == 0 || (a + b).rem_euclid(pi) == 0 {
        return invalid(format!("a = {a}, b = {b}: a, b and a + b must be prime to p = {p}"));
    }
    Ok(())
}

/// The exponents `a ind_u(i) - (a + b) ind_u(i + 1) mod p` for `i` in `1..q-1`.
pub fn psi_exponents(p: u64, q: u64, a: i64, b: i64) -> Result<Vec<u64>> {
    require_psi_args(p, q, a, b)?;
    let table = IndexTable::for_prime(q)?;
    let pi = p as i64;
    Ok((1..q as i64 - 1)
        .map(|i| {
            let e = a * table.ind(i) as i64 - (a + b) * table.ind(i + 1) as i64;
            e.rem_euclid(pi) as u64
        })
        .collect())
}

/// `psi_{a,b} = sum_{i=1}^{q-2} zeta_p^(a ind_u(i) - (a+b) ind_u(i+1))`.
pub fn psi(p: u64, q: u64, a: i64, b: i64) -> Result<CycloInt> {
    let mut t = Torus::zero(p as usize, 1);
    for e in psi_exponents(p, q, a, b)? {
        t.add_at(e as usize, 0, 1);
    }
    Ok(CycloInt::from_torus(p, t))
}

/// Whether `resolvent(a) resolvent(b) = psi_{a,b} resolvent(a + b)` exactly.
pub fn psi_identity_check(p: u64, q: u64, a: i64, b: i64) -> Result<bool> {
    let psi = BiCycloInt::from_cyclo(psi(p, q, a, b)?, q)?;
    let lhs = resolvent(p, q, a)?.checked_mul(&resolvent(p, q, b)?)?;
    let rhs = psi.checked_mul(&resolvent(p, q, a + b)?)?;
    Ok(lhs == rhs)
}

/// The Gauss sum for the pair: the resolvent when `q = 1 (mod p)`, the
/// character sum otherwise.
pub fn gauss_sum(p: u64, q: u64) -> Result<BiCycloInt> {
    require_pair(p, q)?;
    if q % p == 1 {
        gauss_sum_resolvent(p, q)
    } else {
        gauss_sum_charsum(p, q)
    }
}

/// `g(q)^p`, which lies in `Z[zeta_p]`.
pub fn gauss_sum_pth_power(p: u64, q: u64) -> Result<CycloInt> {
    gauss_sum(p, q)?
        .pow(p)
        .as_cyclo()
        .cloned()
        .ok_or_else(|| Error::Internal(format!("g^{p} for q = {q} is not in Z[zeta_{p}]")))
}

/// `g(q)^p` rebuilt from Jacobi sums, `q * prod_{k=1}^{p-2} psi_{v, k v}`,
/// without forming any element of `Z[zeta_p, zeta_q]`.
pub fn gauss_sum_pth_power_via_jacobi(p: u64, q: u64) -> Result<CycloInt> {
    require_split(p, q)?;
    let v = smallest_primitive_root(p)? as i64;
    let mut acc = CycloInt::from_int(p, q);
    for k in 1..p as i64 - 1 {
        acc = acc.checked_mul(&psi(p, q, v, k * v)?)?;
    }
    Ok(acc)
}

/// `rho`, or saturation when the difference it measures vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rho {
    Value(i64),
    Saturated,
}

impl Rho {
    pub fn value(self) -> Option<i64> {
        match self {
            Rho::Value(r) => Some(r),
            Rho::Saturated => None,
        }
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rho::Value(r) => write!(f, "{r}"),
            Rho::Saturated => f.write_str("saturated"),
        }
    }
}

impl Serialize for Rho {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Rho::Value(r) => s.serialize_i64(*r),
            Rho::Saturated => s.serialize_str("saturated"),
        }
    }
}

impl<'de> Deserialize<'de> for Rho {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(r) => Ok(Rho::Value(r)),
            Raw::Text(t) if t == "saturated" => Ok(Rho::Saturated),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad rho {t:?}"))),
        }
    }
}

/// `rho = v_pi(sigma(G) Gbar^v - sigma(Gbar) G^v) - (p - 1)` with `G = g^p`.
pub fn rho_from_pth_power(g_p: &CycloInt, v: u64) -> Rho {
    let p = g_p.prime();
    let bar = g_p.conjugate();
    let num = g_p.galois_apply(1) * bar.pow(v);
    let den = bar.galois_apply(1) * g_p.pow(v);
    match (num - den).v_pi() {
        Valuation::Finite(k) => Rho::Value(k as i64 - (p as i64 - 1)),
        Valuation::Infinite => Rho::Saturated,
    }
}

pub fn rho(p: u64, q: u64) -> Result<Rho> {
    require_split(p, q)?;
    if p < 5 {
        return invalid("rho is only defined for p >= 5");
    }
    let v = smallest_primitive_root(p)?;
    Ok(rho_from_pth_power(&gauss_sum_pth_power(p, q)?, v))
}

/// How `pi` behaves in the extension generated by `g(q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Splitting {
    Inert,
    Split,
}

impl fmt::Display for Splitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Splitting::Inert => "Inert",
            Splitting::Split => "Split",
        })
    }
}

/// Classifies from `v_pi(g^p + 1)`: exactly `p` is inert, more is split.
pub fn splitting_from_valuation(p: u64, v: Valuation) -> Result<Splitting> {
    if v == Valuation::Finite(p as u32) {
        Ok(Splitting::Inert)
    } else if v.at_least(p as u32 + 1) {
        Ok(Splitting::Split)
    } else {
        Err(Error::Internal(format!("v_pi(g^p + 1) = {v} is below p = {p}")))
    }
}

pub fn splitting_type(p: u64, q: u64) -> Result<Splitting> {
    require_split(p, q)?;
    let g_p = gauss_sum_pth_power(p, q)?;
    splitting_from_valuation(p, (g_p + CycloInt::one(p)).v_pi())
}

/// A Gauss sum with the quantities derived from it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolventReport {
    pub p: u64,
    pub q: u64,
    pub f: u64,
    pub u: u64,
    pub v: u64,
    pub g: BiCycloInt,
    pub g_p: CycloInt,
    pub v_gp_plus_1: Valuation,
}

impl ResolventReport {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        let params = PairParams::new(p, q)?;
        let g = gauss_sum(p, q)?;
        let g_p = g
            .pow(p)
            .as_cyclo()
            .cloned()
            .ok_or_else(|| Error::Internal(format!("g^{p} for q = {q} is not in Z[zeta_{p}]")))?;
        let v_gp_plus_1 = (&g_p + &CycloInt::one(p)).v_pi();
        Ok(ResolventReport { p, q, f: params.f, u: params.u, v: params.v, g, g_p, v_gp_plus_1 })
    }

    /// `g * conj(g) = q^f`.
    pub fn norm_identity_holds(&self) -> bool {
        let prod = &self.g * &self.g.conjugate();
        prod.as_cyclo()
            .and_then(CycloInt::as_integer)
            .is_some_and(|n| *n == BigInt::from(self.q).pow(self.f as u32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolvent_matches_character_sum_small() {
        for (p, q) in [(3, 7), (3, 13), (5, 11), (7, 29)] {
            assert_eq!(gauss_sum_charsum(p, q).unwrap(), gauss_sum_resolvent(p, q).unwrap());
        }
    }

    #[test]
    fn resolvent_family_conventions() {
        let v = smallest_primitive_root(7).unwrap() as i64;
        assert_eq!(resolvent(7, 29, v).unwrap(), gauss_sum_resolvent(7, 29).unwrap());
        // conj R(a) = R(-a), and R(a) R(-a) = q
        let r = resolvent(3, 7, 1).unwrap();
        assert_eq!(r.conjugate(), resolvent(3, 7, -1).unwrap());
        let prod = &r * &resolvent(3, 7, -1).unwrap();
        assert_eq!(prod, BiCycloInt::from_cyclo(CycloInt::from_int(3, 7), 7).unwrap());
        // sigma R(a) = R(v a)
        assert_eq!(r.galois_apply(1), resolvent(3, 7, 2).unwrap());
    }

    #[test]
    fn psi_hand_value() {
        let got = psi(3, 7, 1, -2).unwrap();
        assert_eq!(got, CycloInt::from_i64s(3, &[2, 0]).unwrap() + CycloInt::zeta_pow(3, 2).scale(&3.into()));
        assert_eq!(psi_exponents(3, 7, 1, -2).unwrap(), vec![2, 0, 2, 0, 2]);
        assert_eq!((got + CycloInt::one(3)).v_pi(), Valuation::Finite(2));
    }

    #[test]
    fn psi_identity_examples() {
        assert!(psi_identity_check(3, 7, 1, 1).unwrap());
        assert!(psi_identity_check(5, 11, 1, -2).unwrap());
        assert!(psi_identity_check(5, 11, 1, 2).unwrap());
        assert!(psi(5, 11, 1, -1).is_err());
    }

    #[test]
    fn pth_power_two_ways() {
        for (p, q) in [(3, 7), (5, 11), (5, 31), (7, 29)] {
            assert_eq!(
                gauss_sum_pth_power(p, q).unwrap(),
                gauss_sum_pth_power_via_jacobi(p, q).unwrap()
            );
        }
    }

    #[test]
    fn rho_and_splitting_examples() {
        assert_eq!(rho(5, 11).unwrap(), Rho::Value(3));
        assert!(rho(3, 7).is_err());
        assert_eq!(splitting_type(5, 11).unwrap(), Splitting::Inert);
        assert_eq!(splitting_type(5, 31).unwrap(), Splitting::Split);
        assert_eq!(splitting_type(3, 61).unwrap(), Splitting::Split);
    }

    #[test]
    fn non_split_gauss_sums_lie_in_the_smaller_ring() {
        for (p, q) in [(3, 5), (5, 3), (5, 7), (7, 3)] {
            let report = ResolventReport::new(p, q).unwrap();
            assert!(report.g.as_cyclo().is_some(), "({p}, {q})");
            assert!(report.norm_identity_holds());
        }
    }

    #[test]
    fn report_json_round_trip() {
        let r = ResolventReport::new(3, 7).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        let back: ResolventReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string(&Rho::Saturated).unwrap(), "\"saturated\"");
    }
}
