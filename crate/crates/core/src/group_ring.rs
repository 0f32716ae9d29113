//! The integral group ring of `Gal(Q(zeta_p)/Q)`, written in powers of a
//! generator `sigma: zeta -> zeta^v`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::cyclo::{check_modulus, format_poly};
use crate::error::{invalid, Error, Result};
use crate::residue::{mod_inverse, mod_pow, multiplicative_order, smallest_primitive_root};
use crate::{CycloInt, RationalCyclo};

/// `sum a_i sigma^i` with `sigma^(p-1) = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElt {
    p: u64,
    v: u64,
    coeffs: Vec<BigInt>,
}

impl GroupRingElt {
    /// `v` must be a primitive root mod `p`; it fixes what `sigma` means.
    pub fn new(p: u64, v: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        check_modulus(p)?;
        if multiplicative_order(v % p, p) != Some(p - 1) {
            return invalid(format!("{v} is not a primitive root mod {p}"));
        }
        if coeffs.len() as u64 != p - 1 {
            return invalid(format!("expected {} coefficients, got {}", p - 1, coeffs.len()));
        }
        Ok(GroupRingElt { p, v: v % p, coeffs })
    }

    pub fn from_i64s(p: u64, v: u64, coeffs: &[i64]) -> Result<Self> {
        Self::new(p, v, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(p: u64, v: u64) -> Result<Self> {
        Self::new(p, v, vec![BigInt::zero(); p.saturating_sub(1) as usize])
    }

    /// `c * sigma^k`.
    pub fn monomial(p: u64, v: u64, k: i64, c: impl Into<BigInt>) -> Result<Self> {
        let mut e = Self::zero(p, v)?;
        let n = (p - 1) as i64;
        e.coeffs[k.rem_euclid(n) as usize] = c.into();
        Ok(e)
    }

    pub fn one(p: u64, v: u64) -> Result<Self> {
        Self::monomial(p, v, 0, 1)
    }

    /// The rational integer `c` as a group-ring element.
    pub fn constant(p: u64, v: u64, c: impl Into<BigInt>) -> Result<Self> {
        Self::monomial(p, v, 0, c)
    }

    /// `sigma - c`.
    pub fn sigma_minus(p: u64, v: u64, c: impl Into<BigInt>) -> Result<Self> {
        let mut e = Self::monomial(p, v, 1, 1)?;
        e.coeffs[0] -= c.into();
        Ok(e)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.v
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Sum of the coefficients (the augmentation).
    pub fn degree(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if (self.p, self.v) != (other.p, other.v) {
            return invalid(format!(
                "mismatched group rings (p={}, v={}) and (p={}, v={})",
                self.p, self.v, other.p, other.v
            ));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(GroupRingElt { p: self.p, v: self.v, coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(GroupRingElt { p: self.p, v: self.v, coeffs })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let n = self.coeffs.len();
        let mut coeffs = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[(i + j) % n] += a * b;
                }
            }
        }
        Ok(GroupRingElt { p: self.p, v: self.v, coeffs })
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * k).collect();
        GroupRingElt { p: self.p, v: self.v, coeffs }
    }

    /// Exact division of every coefficient by `d`.
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
        Some(GroupRingElt { p: self.p, v: self.v, coeffs })
    }

    /// `x^e = prod_i sigma^i(x)^(a_i)`.
    ///
    /// Negative coefficients need `x^-1`, available only when it can be
    /// written with an integer denominator prime to `p`; otherwise the result
    /// is [`Error::UnsupportedOperand`].
    pub fn apply_exponent(&self, x: &CycloInt) -> Result<RationalCyclo> {
        self.apply_exponent_rational(&RationalCyclo::from_cyclo(x.clone()))
    }

    pub fn apply_exponent_rational(&self, x: &RationalCyclo) -> Result<RationalCyclo> {
        if x.prime() != self.p {
            return invalid(format!("element over p = {} acted on by p = {}", x.prime(), self.p));
        }
        if x.is_zero() {
            return Err(Error::UnsupportedOperand("group-ring action on zero".into()));
        }
        let mut inverse: Option<RationalCyclo> = None;
        let mut acc = RationalCyclo::one(self.p);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let k = a.abs().to_u64().ok_or_else(|| {
                Error::UnsupportedOperand(format!("exponent {a} does not fit in 64 bits"))
            })?;
            let base = if a.is_negative() {
                if inverse.is_none() {
                    inverse = Some(x.inverse()?);
                }
                inverse.as_ref().expect("just filled")
            } else {
                x
            };
            let t = mod_pow(self.v, i as u64, self.p) as i64;
            let term = base.galois_subst(t)?.pow(k as i64)?;
            acc = acc.checked_mul(&term)?;
        }
        Ok(acc)
    }
}

/// The residue `v^-i mod p`, normalized to `1..p`.
fn inverse_power(p: u64, v: u64, i: i64) -> u64 {
    let inv = mod_inverse(v as i64, p).expect("a primitive root is a unit");
    mod_pow(inv, i.rem_euclid((p - 1) as i64) as u64, p)
}

/// `P(sigma) = sum_i v_(-i) sigma^i` with `v_(-i) = v^-i mod p` in `1..p`.
pub fn stickelberger_p(p: u64, v: u64) -> Result<GroupRingElt> {
    GroupRingElt::zero(p, v)?;
    let coeffs = (0..p as i64 - 1).map(|i| BigInt::from(inverse_power(p, v, i))).collect();
    GroupRingElt::new(p, v, coeffs)
}

/// The integers `delta_i = (v_(-(i-1)) - v * v_(-i)) / p` for `i` in `0..p-1`.
pub fn delta_coefficients(p: u64, v: u64) -> Result<Vec<i64>> {
    GroupRingElt::zero(p, v)?;
    (0..p as i64 - 1)
        .map(|i| {
            let num = inverse_power(p, v, i - 1) as i64 - (v as i64) * inverse_power(p, v, i) as i64;
            if num % p as i64 != 0 {
                return Err(Error::Internal(format!("delta_{i} numerator {num} is not divisible by {p}")));
            }
            Ok(num / p as i64)
        })
        .collect()
}

/// `Q(sigma) = sum delta_i sigma^i`, checked against `P(sigma) (sigma - v) / p`.
pub fn stickelberger_q(p: u64, v: u64) -> Result<GroupRingElt> {
    let q = GroupRingElt::from_i64s(p, v, &delta_coefficients(p, v)?)?;
    let lhs = stickelberger_p(p, v)?.checked_mul(&GroupRingElt::sigma_minus(p, v, v)?)?;
    if lhs != q.scale(&BigInt::from(p)) {
        return Err(Error::Internal(format!(
            "P(sigma)(sigma - v) = {lhs} differs from p * Q = {}",
            q.scale(&BigInt::from(p))
        )));
    }
    Ok(q)
}

/// `sum_{i=0}^{(p-3)/2} sigma^i`.
pub fn half_orbit_sum(p: u64, v: u64) -> Result<GroupRingElt> {
    let mut e = GroupRingElt::zero(p, v)?;
    for c in e.coeffs.iter_mut().take(((p - 1) / 2) as usize) {
        *c = BigInt::from(1);
    }
    Ok(e)
}

/// `Q1(sigma) = (1 - sigma) sum_{i=0}^{(p-3)/2} delta_i sigma^i + (1 - v) sigma^((p-1)/2)`.
pub fn stickelberger_q1(p: u64, v: u64) -> Result<GroupRingElt> {
    let delta = delta_coefficients(p, v)?;
    let half = ((p - 1) / 2) as usize;
    let mut head = delta.clone();
    for d in head.iter_mut().skip(half) {
        *d = 0;
    }
    let head = GroupRingElt::from_i64s(p, v, &head)?;
    let one_minus_sigma = GroupRingElt::sigma_minus(p, v, 1)?.neg();
    let tail = GroupRingElt::monomial(p, v, half as i64, 1 - v as i64)?;
    one_minus_sigma.checked_mul(&head)?.checked_add(&tail)
}

/// `-p < delta_i <= 0` for every `i`, and `delta_(i+(p-1)/2) = 1 - v - delta_i`.
pub fn delta_bounds_check(p: u64, v: u64) -> Result<bool> {
    let delta = delta_coefficients(p, v)?;
    let p_i = p as i64;
    let half = ((p - 1) / 2) as usize;
    let bounded = delta.iter().all(|&d| -p_i < d && d <= 0);
    let reflected = (0..half).all(|i| delta[i + half] == 1 - v as i64 - delta[i]);
    Ok(bounded && reflected)
}

/// The same objects with the smallest primitive root as generator.
pub fn default_generator(p: u64) -> Result<u64> {
    smallest_primitive_root(p)
}

impl fmt::Debug for GroupRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupRingElt[p={}, v={}]({self})", self.p, self.v)
    }
}

/// Renders as `a0 + a1*s + a2*s^2 + ...`.
impl fmt::Display for GroupRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(&self.coeffs, "s"))
    }
}

impl Serialize for GroupRingElt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a GroupRingElt> for &'a GroupRingElt {
            type Output = GroupRingElt;
            fn $method(self, rhs: &'a GroupRingElt) -> GroupRingElt {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for GroupRingElt {
    type Output = GroupRingElt;
    fn neg(self) -> GroupRingElt {
        GroupRingElt { coeffs: self.coeffs.into_iter().map(|c| -c).collect(), ..self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: u64, v: u64, c: &[i64]) -> GroupRingElt {
        GroupRingElt::from_i64s(p, v, c).unwrap()
    }

    #[test]
    fn stickelberger_element_examples() {
        assert_eq!(stickelberger_p(3, 2).unwrap(), g(3, 2, &[1, 2]));
        assert_eq!(stickelberger_p(5, 2).unwrap(), g(5, 2, &[1, 3, 4, 2]));
        for p in [3u64, 5, 7, 11, 13, 101] {
            let v = default_generator(p).unwrap();
            assert_eq!(stickelberger_p(p, v).unwrap().degree(), BigInt::from(p * (p - 1) / 2));
        }
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(stickelberger_q(3, 2).unwrap(), g(3, 2, &[0, -1]));
        assert_eq!(stickelberger_q(5, 2).unwrap(), g(5, 2, &[0, -1, -1, 0]));
        assert_eq!(stickelberger_q1(5, 2).unwrap(), g(5, 2, &[0, -1, 0, 0]));
        assert_eq!(stickelberger_q1(3, 2).unwrap(), g(3, 2, &[0, -1]));
        let prod = &stickelberger_q1(5, 2).unwrap() * &g(5, 2, &[1, 1, 0, 0]);
        assert_eq!(prod, stickelberger_q(5, 2).unwrap());
    }

    #[test]
    fn delta_bounds_examples() {
        assert_eq!(delta_coefficients(5, 2).unwrap(), vec![0, -1, -1, 0]);
        assert_eq!(delta_coefficients(3, 2).unwrap(), vec![0, -1]);
        for (p, v) in [(5, 2), (3, 2), (7, 3)] {
            assert!(delta_bounds_check(p, v).unwrap());
        }
    }

    #[test]
    fn non_primitive_generator_rejected() {
        assert!(stickelberger_p(7, 2).is_err());
        assert!(stickelberger_p(9, 2).is_err());
    }

    #[test]
    fn rendering() {
        assert_eq!(stickelberger_p(5, 2).unwrap().to_string(), "1 + 3*s + 4*s^2 + 2*s^3");
        assert_eq!(stickelberger_q(5, 2).unwrap().to_string(), "-s - s^2");
        assert_eq!(
            serde_json::to_string(&stickelberger_q(5, 2).unwrap()).unwrap(),
            r#"["0","-1","-1","0"]"#
        );
    }

    #[test]
    fn action_examples() {
        let x = CycloInt::from_i64s(5, &[2, 1, 0, 0]).unwrap();
        let zero = GroupRingElt::zero(5, 2).unwrap();
        assert_eq!(zero.apply_exponent(&x).unwrap(), RationalCyclo::one(5));
        assert_eq!(GroupRingElt::one(5, 2).unwrap().apply_exponent(&x).unwrap(), x.clone().into());
        let a = CycloInt::from_int(5, 3);
        let pa = stickelberger_p(5, 2).unwrap().apply_exponent(&a).unwrap();
        assert_eq!(pa, CycloInt::from_int(5, BigInt::from(3).pow(10)).into());
        // sigma - 1 on x, then times x, gives sigma(x)
        let s1 = GroupRingElt::sigma_minus(5, 2, 1).unwrap().apply_exponent(&x).unwrap();
        let back = &s1 * &RationalCyclo::from(x.clone());
        assert_eq!(back, x.galois_apply(1).into());
    }

    #[test]
    fn action_rejects_inadmissible_inverse() {
        let lam = CycloInt::lambda(5);
        let e = GroupRingElt::constant(5, 2, -1).unwrap();
        assert!(matches!(e.apply_exponent(&lam), Err(Error::UnsupportedOperand(_))));
    }
}
