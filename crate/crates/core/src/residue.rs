//! Residue-class utilities: primitive roots, index tables, primality and
//! Hensel lifting of the roots of the cyclotomic polynomial `Phi_p` modulo
//! prime powers.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};

/// `base^exp mod m` by repeated squaring.
pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut base = (base % m) as u128;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: i64, m: u64) -> Option<u64> {
    let m_i = m as i128;
    let a = (a as i128).rem_euclid(m_i);
    let (mut r0, mut r1) = (m_i, a);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m_i) as u64)
}

/// Distinct prime factors of `n`, ascending, by trial division.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Multiplicative order of `a` modulo `m` (`a` must be a unit).
pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if m < 2 || a.gcd(&m) != 1 {
        return None;
    }
    // phi(m) for the prime moduli used here; fall back to a scan otherwise.
    if is_prime_u64(m) {
        let mut order = m - 1;
        for f in distinct_prime_factors(m - 1) {
            while order % f == 0 && mod_pow(a, order / f, m) == 1 {
                order /= f;
            }
        }
        return Some(order);
    }
    let mut x = a % m;
    for k in 1..=m {
        if x == 1 {
            return Some(k);
        }
        x = ((x as u128 * a as u128) % m as u128) as u64;
    }
    None
}

fn require_odd_prime(m: u64, what: &str) -> Result<()> {
    if m < 3 || m % 2 == 0 || !is_prime_u64(m) {
        return invalid(format!("{what} = {m} is not an odd prime"));
    }
    Ok(())
}

/// Least `g` in `2..m` generating `(Z/m)^*`.
pub fn smallest_primitive_root(m: u64) -> Result<u64> {
    require_odd_prime(m, "modulus")?;
    let factors = distinct_prime_factors(m - 1);
    (2..m)
        .find(|&g| factors.iter().all(|&f| mod_pow(g, (m - 1) / f, m) != 1))
        .ok_or_else(|| Error::Internal(format!("no primitive root found modulo {m}")))
}

/// Index (discrete logarithm) table to a fixed primitive root.
///
/// `ind[i - 1]` holds `ind_u(i)` normalized to `1..=q-1`, so `ind_u(1) = q - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexTable {
    q: u64,
    u: u64,
    ind: Vec<u64>,
}

impl IndexTable {
    pub fn new(q: u64, u: u64) -> Result<Self> {
        require_odd_prime(q, "q")?;
        if multiplicative_order(u % q, q) != Some(q - 1) {
            return invalid(format!("{u} is not a primitive root modulo {q}"));
        }
        let mut ind = vec![0u64; (q - 1) as usize];
        let mut x = 1u64;
        for s in 1..q {
            x = x * u % q;
            ind[(x - 1) as usize] = s;
        }
        Ok(IndexTable { q, u, ind })
    }

    /// Table for the smallest primitive root of `q`.
    pub fn for_prime(q: u64) -> Result<Self> {
        let u = smallest_primitive_root(q)?;
        Self::new(q, u)
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn root(&self) -> u64 {
        self.u
    }

    /// `ind_u(i)` for `i` coprime to `q`; `i` is reduced modulo `q` first.
    pub fn ind(&self, i: i64) -> u64 {
        let r = i.rem_euclid(self.q as i64) as u64;
        assert!(r != 0, "index of a multiple of q is undefined");
        self.ind[(r - 1) as usize]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.ind
    }
}

/// Builds the index table of `q` relative to `u`.
pub fn build_index_table(q: u64, u: u64) -> Result<IndexTable> {
    IndexTable::new(q, u)
}

/// Returns whether `p^((q-1)/p) = 1 (mod q)`.
pub fn fermat_condition(p: u64, q: u64) -> Result<bool> {
    require_odd_prime(p, "p")?;
    require_odd_prime(q, "q")?;
    if q % p != 1 {
        return invalid(format!("q = {q} is not 1 modulo p = {p}"));
    }
    Ok(mod_pow(p, (q - 1) / p, q) == 1)
}

/// A root of `Phi_p` modulo `q^precision`, lifted from a simple root mod `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HenselRoot {
    pub q: u64,
    pub precision: u32,
    /// The root modulo `q` the lift started from.
    pub seed: u64,
    /// `0 <= lift < q^precision` with `Phi_p(lift) = 0 (mod q^precision)`.
    pub lift: BigUint,
}

impl HenselRoot {
    pub fn modulus(&self) -> BigUint {
        BigUint::from(self.q).pow(self.precision)
    }
}

/// The `p - 1` roots of `Phi_p` modulo `q`, ascending. Requires `q = 1 (mod p)`.
pub fn phi_roots_mod_q(p: u64, q: u64) -> Result<Vec<u64>> {
    require_odd_prime(p, "p")?;
    require_odd_prime(q, "q")?;
    if q % p != 1 {
        return invalid(format!("q = {q} is not 1 modulo p = {p}"));
    }
    let u = smallest_primitive_root(q)?;
    let w = mod_pow(u, (q - 1) / p, q);
    let mut roots: Vec<u64> = (1..p).map(|t| mod_pow(w, t, q)).collect();
    roots.sort_unstable();
    Ok(roots)
}

fn phi_and_derivative(p: u64, c: &BigInt, modulus: &BigInt) -> (BigInt, BigInt) {
    // Horner on 1 + x + ... + x^{p-1} and its derivative.
    let mut f = BigInt::zero();
    let mut df = BigInt::zero();
    for _ in 0..p {
        df = (&df * c + &f).mod_floor(modulus);
        f = (&f * c + 1u32).mod_floor(modulus);
    }
    (f, df)
}

fn inverse_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Lifts every root of `Phi_p` modulo `q` to a root modulo `q^precision`
/// by Newton iteration.
pub fn hensel_lift_phi_roots(p: u64, q: u64, precision: u32) -> Result<Vec<HenselRoot>> {
    if precision == 0 {
        return invalid("Hensel precision must be at least 1");
    }
    let seeds = phi_roots_mod_q(p, q)?;
    let modulus = BigInt::from(q).pow(precision);
    let steps = 64 - u64::from(precision).leading_zeros() + 1;
    seeds
        .into_iter()
        .map(|seed| {
            let mut c = BigInt::from(seed);
            for _ in 0..steps {
                let (f, df) = phi_and_derivative(p, &c, &modulus);
                if f.is_zero() {
                    break;
                }
                let inv = inverse_mod(&df, &modulus).ok_or_else(|| {
                    Error::Internal(format!("Newton step not invertible at root {seed} mod {q}"))
                })?;
                c = (&c - f * inv).mod_floor(&modulus);
            }
            let (f, _) = phi_and_derivative(p, &c, &modulus);
            if !f.is_zero() {
                return Err(Error::Internal(format!("Hensel lift of {seed} did not converge")));
            }
            Ok(HenselRoot {
                q,
                precision,
                seed,
                lift: c.to_biguint().expect("reduced residue is non-negative"),
            })
        })
        .collect()
}

const MR_BASES_64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &b in &MR_BASES_64 {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES_64 {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Primality for arbitrary non-negative integers: exact below `2^64`,
/// Baillie-PSW above.
pub fn is_prime(n: &BigUint) -> bool {
    match n.to_u64() {
        Some(small) => is_prime_u64(small),
        None => bpsw(&BigInt::from_biguint(Sign::Plus, n.clone())),
    }
}

fn jacobi_symbol(a: &BigInt, n: &BigInt) -> i32 {
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1;
    let three = BigInt::from(3);
    let four = BigInt::from(4);
    let eight = BigInt::from(8);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == BigInt::from(5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

fn strong_probable_prime_base2(n: &BigInt) -> bool {
    let n_minus_1: BigInt = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = BigInt::from(2).modpow(&d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x).mod_floor(n);
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

fn half_mod(x: BigInt, n: &BigInt) -> BigInt {
    let x = if x.is_odd() { x + n } else { x };
    let half: BigInt = x >> 1;
    half.mod_floor(n)
}

fn strong_lucas_probable_prime(n: &BigInt) -> bool {
    // Selfridge parameters: first D in 5, -7, 9, -11, ... with (D/n) = -1.
    let mut d_abs = 5i64;
    let mut sign = 1i64;
    let d = loop {
        let d = BigInt::from(sign * d_abs);
        match jacobi_symbol(&d, n) {
            -1 => break d,
            0 if d.abs() != *n => return false,
            _ => {}
        }
        d_abs += 2;
        sign = -sign;
        if d_abs == 21 && is_perfect_square(n) {
            return false;
        }
    };
    let p = BigInt::one();
    let q: BigInt = (BigInt::one() - &d) / 4;
    let n_plus_1: BigInt = n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let k = &n_plus_1 >> s;

    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = q.mod_floor(n);
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        u = (&u * &v).mod_floor(n);
        v = (&v * &v - &qk - &qk).mod_floor(n);
        qk = (&qk * &qk).mod_floor(n);
        if k.bit(i) {
            let u_next = half_mod(&p * &u + &v, n);
            let v_next = half_mod(&d * &u + &p * &v, n);
            u = u_next;
            v = v_next;
            qk = (&qk * &q).mod_floor(n);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - &qk - &qk).mod_floor(n);
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk).mod_floor(n);
    }
    false
}

fn is_perfect_square(n: &BigInt) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

/// Baillie-PSW: strong base-2 test followed by a strong Lucas test.
pub(crate) fn bpsw(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    for small in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if (n % small).is_zero() {
            return *n == BigInt::from(small);
        }
    }
    strong_probable_prime_base2(n) && strong_lucas_probable_prime(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order_brute(g: u64, m: u64) -> u64 {
        let mut x = g % m;
        let mut k = 1;
        while x != 1 {
            x = x * g % m;
            k += 1;
        }
        k
    }

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(smallest_primitive_root(5).unwrap(), 2);
        assert_eq!(smallest_primitive_root(7).unwrap(), 3);
        assert_eq!(smallest_primitive_root(11).unwrap(), 2);
    }

    #[test]
    fn primitive_root_matches_brute_force() {
        for m in (3..500u64).filter(|&m| trial_division(m)) {
            let brute = (2..m).find(|&g| order_brute(g, m) == m - 1).unwrap();
            assert_eq!(smallest_primitive_root(m).unwrap(), brute, "m = {m}");
        }
    }

    #[test]
    fn primitive_root_rejects_bad_moduli() {
        assert!(matches!(smallest_primitive_root(9), Err(Error::InvalidArgument(_))));
        assert!(matches!(smallest_primitive_root(2), Err(Error::InvalidArgument(_))));
        assert!(matches!(smallest_primitive_root(1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn index_table_examples() {
        let t = build_index_table(7, 3).unwrap();
        assert_eq!(t.ind(2), 2);
        assert_eq!(t.ind(1), 6);
        let t = build_index_table(11, 2).unwrap();
        assert_eq!(t.ind(5), 4);
        assert!(matches!(build_index_table(7, 2), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn index_tables_are_bijective_below_500() {
        for q in (3..500u64).filter(|&m| trial_division(m)) {
            let t = IndexTable::for_prime(q).unwrap();
            let mut seen = vec![false; q as usize];
            for i in 1..q {
                let s = t.ind(i as i64);
                assert!((1..q).contains(&s));
                assert!(!seen[s as usize]);
                seen[s as usize] = true;
                assert_eq!(mod_pow(t.root(), s, q), i);
            }
        }
    }

    #[test]
    fn fermat_condition_examples() {
        assert!(!fermat_condition(5, 11).unwrap());
        assert!(fermat_condition(5, 31).unwrap());
        assert!(fermat_condition(3, 61).unwrap());
        assert!(matches!(fermat_condition(5, 13), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn fermat_condition_matches_naive_power() {
        for p in [3u64, 5, 7, 11, 13] {
            for q in (3..2000u64).filter(|&q| trial_division(q) && q % p == 1) {
                let mut naive = 1u64;
                for _ in 0..(q - 1) / p {
                    naive = naive * p % q;
                }
                assert_eq!(fermat_condition(p, q).unwrap(), naive == 1);
            }
        }
    }

    #[test]
    fn hensel_examples() {
        let roots = hensel_lift_phi_roots(3, 7, 1).unwrap();
        let seeds: Vec<u64> = roots.iter().map(|r| r.seed).collect();
        assert_eq!(seeds, vec![2, 4]);
        let roots = hensel_lift_phi_roots(3, 7, 2).unwrap();
        assert_eq!(roots[0].lift, BigUint::from(30u32));
    }

    #[test]
    fn hensel_roots_are_roots() {
        for (p, q) in [(3u64, 7u64), (5, 11), (5, 31), (7, 29), (11, 23), (13, 53)] {
            for m in [1u32, 2, 5, p as u32 + 5, 40] {
                let roots = hensel_lift_phi_roots(p, q, m).unwrap();
                assert_eq!(roots.len() as u64, p - 1);
                let modulus = BigInt::from(q).pow(m);
                for r in &roots {
                    let c = BigInt::from(r.lift.clone());
                    let (f, _) = phi_and_derivative(p, &c, &modulus);
                    assert!(f.is_zero());
                    assert_eq!(&r.lift % q, BigUint::from(r.seed));
                    assert_eq!(mod_pow(r.seed, p, q), 1);
                }
            }
        }
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(&BigUint::from(61u32)));
        assert!(!is_prime(&BigUint::from(1u32)));
        assert!(!is_prime(&BigUint::from(0u32)));
        assert!(is_prime(&BigUint::from((1u64 << 61) - 1)));
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..50_000u64 {
            assert_eq!(is_prime_u64(n), trial_division(n), "n = {n}");
        }
        // strong pseudoprimes to several small bases
        for n in [3_215_031_751u64, 2_152_302_898_747, 3_474_749_660_383, 341_550_071_728_321] {
            assert!(!is_prime_u64(n));
        }
    }

    #[test]
    fn bpsw_matches_trial_division_small() {
        for n in 0..20_000u64 {
            assert_eq!(bpsw(&BigInt::from(n)), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn bpsw_large_values() {
        let two = BigUint::from(2u32);
        let m89 = two.pow(89u32) - 1u32;
        let m127 = two.pow(127u32) - 1u32;
        assert!(is_prime(&m89));
        assert!(is_prime(&m127));
        assert!(!is_prime(&(&m89 * &m127)));
        assert!(!is_prime(&(two.pow(128u32) + 1u32)));
        // product of two primes above 2^32
        let a = BigUint::from(4_294_967_311u64);
        let b = BigUint::from(4_294_967_357u64);
        assert!(is_prime(&a) && is_prime(&b));
        assert!(!is_prime(&(&a * &b)));
        assert!(!is_prime(&(&a * &a)));
    }
}
