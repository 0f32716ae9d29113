use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::kernel::Torus;
use super::{check_modulus, format_poly, Valuation};
use crate::error::{invalid, Result};
use crate::residue::smallest_primitive_root;

/// An element of `Z[zeta_p]` in the power basis `1, zeta, ..., zeta^(p-2)`.
///
/// The representation is canonical, so structural equality is ring equality.
/// The same type serves `Z[zeta_q]` for any odd prime `q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloInt {
    p: u64,
    coeffs: Vec<BigInt>,
}

impl CycloInt {
    /// Builds an element from exactly `p - 1` power-basis coordinates.
    pub fn new(p: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        check_modulus(p)?;
        if coeffs.len() as u64 != p - 1 {
            return invalid(format!(
                "expected {} coefficients for p = {p}, got {}",
                p - 1,
                coeffs.len()
            ));
        }
        Ok(CycloInt { p, coeffs })
    }

    /// Reduces an arbitrary polynomial in `zeta` (any length) to canonical form.
    pub fn from_poly(p: u64, poly: &[BigInt]) -> Result<Self> {
        check_modulus(p)?;
        let mut t = Torus::zero(p as usize, 1);
        for (k, c) in poly.iter().enumerate() {
            t.add_at(k, 0, c.clone());
        }
        Ok(Self::from_torus(p, t))
    }

    /// Convenience for small literal coefficients.
    pub fn from_i64s(p: u64, poly: &[i64]) -> Result<Self> {
        let big: Vec<BigInt> = poly.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_poly(p, &big)
    }

    pub(crate) fn from_torus(p: u64, t: Torus) -> Self {
        debug_assert_eq!((t.n1, t.n2), (p as usize, 1));
        let coeffs = t.reduce().pop().expect("one row");
        CycloInt { p, coeffs }
    }

    pub(crate) fn to_torus(&self) -> Torus {
        let mut t = Torus::zero(self.p as usize, 1);
        for (k, c) in self.coeffs.iter().enumerate() {
            t.data[k] = c.clone();
        }
        t
    }

    fn assert_modulus(p: u64) {
        check_modulus(p).unwrap_or_else(|e| panic!("{e}"));
    }

    /// # Panics
    /// If `p` is not an odd prime.
    pub fn zero(p: u64) -> Self {
        Self::assert_modulus(p);
        CycloInt { p, coeffs: vec![BigInt::zero(); (p - 1) as usize] }
    }

    pub fn one(p: u64) -> Self {
        Self::from_int(p, 1)
    }

    pub fn from_int(p: u64, n: impl Into<BigInt>) -> Self {
        let mut x = Self::zero(p);
        x.coeffs[0] = n.into();
        x
    }

    /// `zeta^k` for any integer `k`.
    pub fn zeta_pow(p: u64, k: i64) -> Self {
        Self::assert_modulus(p);
        let mut t = Torus::zero(p as usize, 1);
        t.add_at(k.rem_euclid(p as i64) as usize, 0, 1);
        Self::from_torus(p, t)
    }

    pub fn zeta(p: u64) -> Self {
        Self::zeta_pow(p, 1)
    }

    /// `lambda = zeta - 1`, the generator of the prime above `p`.
    pub fn lambda(p: u64) -> Self {
        Self::zeta(p) - Self::one(p)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if it lies in `Z`.
    pub fn as_integer(&self) -> Option<&BigInt> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return invalid(format!("mismatched cyclotomic moduli {} and {}", self.p, other.p));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycloInt { p: self.p, coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycloInt { p: self.p, coeffs })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(Self::from_torus(self.p, self.to_torus().mul(&other.to_torus())))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CycloInt { p: self.p, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn pow(&self, e: u64) -> Self {
        Self::from_torus(self.p, self.to_torus().pow(e))
    }

    /// Image under `zeta -> 1`, i.e. the coefficient sum. Reducing it mod `p`
    /// gives the residue class mod `lambda`.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Evaluates the coefficient polynomial at `c` modulo `m`.
    pub fn eval_mod(&self, c: &BigInt, m: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for coef in self.coeffs.iter().rev() {
            acc = (acc * c + coef).mod_floor(m);
        }
        acc
    }

    /// `gcd` of the coefficients (zero for the zero element).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Exact division by a rational integer, `None` if it does not divide.
    pub fn exact_div_int(&self, d: &BigInt) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            coeffs.push(q);
        }
        Some(CycloInt { p: self.p, coeffs })
    }

    /// The automorphism `zeta -> zeta^t`.
    pub fn galois_subst(&self, t: i64) -> Result<Self> {
        let p = self.p as i64;
        let t = t.rem_euclid(p);
        if t == 0 {
            return invalid(format!("substitution exponent is divisible by p = {p}"));
        }
        let mut out = Torus::zero(self.p as usize, 1);
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.add_at(((k as i64 * t) % p) as usize, 0, c.clone());
            }
        }
        Ok(Self::from_torus(self.p, out))
    }

    /// `sigma^k` where `sigma: zeta -> zeta^v` for the smallest primitive root `v`.
    pub fn galois_apply(&self, k: i64) -> Self {
        let v = smallest_primitive_root(self.p).expect("modulus validated at construction");
        let e = k.rem_euclid((self.p - 1) as i64) as u64;
        let t = crate::residue::mod_pow(v, e, self.p);
        self.galois_subst(t as i64).expect("a power of a primitive root is a unit")
    }

    /// Complex conjugation `zeta -> zeta^-1`.
    pub fn conjugate(&self) -> Self {
        self.galois_subst(-1).expect("-1 is a unit")
    }

    /// `N(x)`: the product of all `p - 1` Galois conjugates.
    pub fn norm(&self) -> BigInt {
        let mut acc = self.clone();
        for t in 2..self.p as i64 {
            acc = &acc * &self.galois_subst(t).expect("t < p");
        }
        acc.as_integer()
            .cloned()
            .expect("a norm is a rational integer")
    }

    /// `p / lambda = prod_{t=2}^{p-1} (zeta^t - 1)`.
    fn p_over_lambda(p: u64) -> Self {
        let one = Self::one(p);
        let mut acc = one.clone();
        for t in 2..p as i64 {
            acc = &acc * &(Self::zeta_pow(p, t) - one.clone());
        }
        acc
    }

    fn divide_by_lambda_with(&self, p_over_lambda: &Self) -> Option<Self> {
        let p = BigInt::from(self.p);
        if !self.eval_at_one().mod_floor(&p).is_zero() {
            return None;
        }
        let lifted = self * p_over_lambda;
        Some(lifted.exact_div_int(&p).expect("lambda divides x, so p divides x * (p/lambda)"))
    }

    /// Exact division by `lambda`, `None` when `lambda` does not divide.
    pub fn div_lambda(&self) -> Option<Self> {
        self.divide_by_lambda_with(&Self::p_over_lambda(self.p))
    }

    /// `pi`-adic valuation by repeated exact division by `lambda`.
    pub fn v_pi(&self) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinite;
        }
        let inv = Self::p_over_lambda(self.p);
        let mut x = self.clone();
        let mut v = 0u32;
        while let Some(next) = x.divide_by_lambda_with(&inv) {
            x = next;
            v += 1;
        }
        Valuation::Finite(v)
    }

    /// `pi`-adic valuation read off the norm: `pi` is the only prime above
    /// `p` and has residue degree one, so `v_pi(x) = v_p(N(x))`.
    pub fn v_pi_via_norm(&self) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinite;
        }
        let mut n = self.norm().abs();
        let p = BigInt::from(self.p);
        let mut v = 0u32;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            n = q;
            v += 1;
        }
        Valuation::Finite(v)
    }

    /// The first `k` digits `d_i` in `0..p` with `x = sum d_i lambda^i (mod pi^k)`.
    pub fn pi_adic_expansion(&self, k: usize) -> Vec<u64> {
        let inv = Self::p_over_lambda(self.p);
        let p = BigInt::from(self.p);
        let mut x = self.clone();
        let mut digits = Vec::with_capacity(k);
        for _ in 0..k {
            let d = x.eval_at_one().mod_floor(&p);
            x.coeffs[0] -= &d;
            digits.push(d.to_u64().expect("digit below p"));
            x = x.divide_by_lambda_with(&inv).expect("digit removal leaves a multiple of lambda");
        }
        digits
    }

    /// The `a` in `1..p` with `x = a (mod pi^2)`, if `x` is semi-primary.
    pub fn is_semi_primary(&self) -> Option<u64> {
        let p = BigInt::from(self.p);
        let a = self.eval_at_one().mod_floor(&p);
        if a.is_zero() {
            return None;
        }
        let diff = self - &Self::from_int(self.p, a.clone());
        if diff.v_pi().at_least(2) {
            a.to_u64()
        } else {
            None
        }
    }
}

impl fmt::Debug for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloInt[p={}]({})", self.p, format_poly(&self.coeffs, "z"))
    }
}

/// Polynomial in `z` (standing for `zeta`).
impl fmt::Display for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(&self.coeffs, "z"))
    }
}

impl Serialize for CycloInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for CycloInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let p = coeffs.len() as u64 + 1;
        CycloInt::new(p, coeffs).map_err(de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a CycloInt> for &'a CycloInt {
            type Output = CycloInt;
            fn $method(self, rhs: &'a CycloInt) -> CycloInt {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<CycloInt> for CycloInt {
            type Output = CycloInt;
            fn $method(self, rhs: CycloInt) -> CycloInt {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a CycloInt> for CycloInt {
            type Output = CycloInt;
            fn $method(self, rhs: &'a CycloInt) -> CycloInt {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for CycloInt {
    type Output = CycloInt;
    fn neg(self) -> CycloInt {
        CycloInt { p: self.p, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Neg for &CycloInt {
    type Output = CycloInt;
    fn neg(self) -> CycloInt {
        -self.clone()
    }
}
