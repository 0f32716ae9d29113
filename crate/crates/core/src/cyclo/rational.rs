use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{CycloInt, Valuation};
use crate::error::{invalid, Error, Result};

/// `num / den` with `num` in `Z[zeta_p]` and `den` a positive integer prime
/// to `p`, kept in lowest terms against the content of `num`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRational", into = "RawRational")]
pub struct RationalCyclo {
    num: CycloInt,
    den: BigInt,
}

#[derive(Serialize, Deserialize)]
struct RawRational {
    num: CycloInt,
    den: String,
}

impl TryFrom<RawRational> for RationalCyclo {
    type Error = Error;
    fn try_from(raw: RawRational) -> Result<Self> {
        let den: BigInt = raw
            .den
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad denominator {:?}", raw.den)))?;
        RationalCyclo::new(raw.num, den)
    }
}

impl From<RationalCyclo> for RawRational {
    fn from(r: RationalCyclo) -> Self {
        RawRational { num: r.num, den: r.den.to_string() }
    }
}

impl RationalCyclo {
    pub fn new(num: CycloInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return invalid("zero denominator");
        }
        let p = BigInt::from(num.prime());
        if !den.gcd(&p).is_one() {
            return invalid(format!("denominator {den} is not prime to p = {p}"));
        }
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: CycloInt, den: BigInt) -> Self {
        let g = num.content().gcd(&den);
        if g.is_one() || g.is_zero() {
            return RationalCyclo { num, den };
        }
        let num = num.exact_div_int(&g).expect("g divides the content");
        RationalCyclo { num, den: den / g }
    }

    pub fn from_cyclo(num: CycloInt) -> Self {
        RationalCyclo { num, den: BigInt::one() }
    }

    pub fn one(p: u64) -> Self {
        Self::from_cyclo(CycloInt::one(p))
    }

    pub fn numerator(&self) -> &CycloInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn prime(&self) -> u64 {
        self.num.prime()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The value as an integral element, when the denominator is one.
    pub fn as_cyclo(&self) -> Option<&CycloInt> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let num = self.num.scale(&other.den).checked_add(&other.num.scale(&self.den))?;
        Ok(Self::normalized(num, &self.den * &other.den))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let num = self.num.scale(&other.den).checked_sub(&other.num.scale(&self.den))?;
        Ok(Self::normalized(num, &self.den * &other.den))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let num = self.num.checked_mul(&other.num)?;
        Ok(Self::normalized(num, &self.den * &other.den))
    }

    /// Multiplicative inverse. The numerator is inverted as `conj(x) / (x * conj(x))`
    /// when that product is rational, otherwise as the product of its other
    /// conjugates over its norm; either way the new denominator must be prime
    /// to `p`.
    pub fn inverse(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::UnsupportedOperand("inverse of zero".into()));
        }
        let bar = self.num.conjugate();
        let (cofactor, n) = match (&self.num * &bar).as_integer() {
            Some(n) => (bar.clone(), n.clone()),
            None => {
                let mut acc = CycloInt::one(self.prime());
                for t in 2..self.prime() as i64 {
                    acc = &acc * &self.num.galois_subst(t)?;
                }
                let n = (&acc * &self.num)
                    .as_integer()
                    .cloned()
                    .ok_or_else(|| Error::Internal("norm is not rational".into()))?;
                (acc, n)
            }
        };
        let p = BigInt::from(self.prime());
        if !n.gcd(&p).is_one() {
            return Err(Error::UnsupportedOperand(format!(
                "{} has no inverse with denominator prime to {p}",
                self.num
            )));
        }
        Self::new(cofactor.scale(&self.den), n)
    }

    /// Integer power; negative exponents go through [`Self::inverse`].
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let k = e.unsigned_abs();
        let num = base.num.pow(k);
        let den = num_traits::pow(base.den.clone(), k as usize);
        Ok(Self::normalized(num, den))
    }

    pub fn galois_subst(&self, t: i64) -> Result<Self> {
        Ok(RationalCyclo { num: self.num.galois_subst(t)?, den: self.den.clone() })
    }

    pub fn galois_apply(&self, k: i64) -> Self {
        RationalCyclo { num: self.num.galois_apply(k), den: self.den.clone() }
    }

    pub fn conjugate(&self) -> Self {
        RationalCyclo { num: self.num.conjugate(), den: self.den.clone() }
    }

    /// Equals the valuation of the numerator, the denominator being a unit at `pi`.
    pub fn v_pi(&self) -> Valuation {
        self.num.v_pi()
    }
}

impl fmt::Debug for RationalCyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalCyclo[p={}]({self})", self.prime())
    }
}

impl fmt::Display for RationalCyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / {}", self.num, self.den)
        }
    }
}

impl From<CycloInt> for RationalCyclo {
    fn from(x: CycloInt) -> Self {
        Self::from_cyclo(x)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a RationalCyclo> for &'a RationalCyclo {
            type Output = RationalCyclo;
            fn $method(self, rhs: &'a RationalCyclo) -> RationalCyclo {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn c(p: u64, v: &[i64]) -> CycloInt {
        CycloInt::from_i64s(p, v).unwrap()
    }

    #[test]
    fn normalization() {
        let r = RationalCyclo::new(c(5, &[4, 6, 0, 2]), BigInt::from(-6)).unwrap();
        assert_eq!(r.numerator(), &c(5, &[-2, -3, 0, -1]));
        assert_eq!(r.denominator(), &BigInt::from(3));
        assert!(RationalCyclo::new(c(5, &[1, 0, 0, 0]), BigInt::from(10)).is_err());
        assert!(RationalCyclo::new(c(5, &[1, 0, 0, 0]), BigInt::zero()).is_err());
    }

    #[test]
    fn inverse_of_a_gauss_like_element() {
        // 1 + 2 zeta_3 has x * conj(x) = 3, divisible by p: not admissible
        let x = RationalCyclo::from(c(3, &[1, 2]));
        assert!(matches!(x.inverse(), Err(Error::UnsupportedOperand(_))));
        // 2 + zeta_5 has norm 11
        let y = RationalCyclo::from(c(5, &[2, 1, 0, 0]));
        let prod = &y * &y.inverse().unwrap();
        assert_eq!(prod, RationalCyclo::one(5));
    }

    #[test]
    fn powers_and_valuation() {
        let y = RationalCyclo::from(c(7, &[-1, 1, 0, 0, 0, 0]));
        assert_eq!(y.pow(3).unwrap().v_pi(), Valuation::Finite(3));
        let w = RationalCyclo::from(c(7, &[3, 1, 0, 0, 0, 0]));
        let back = &w.pow(-2).unwrap() * &w.pow(2).unwrap();
        assert_eq!(back, RationalCyclo::one(7));
    }

    #[test]
    fn arithmetic_with_denominators() {
        let a = RationalCyclo::new(c(3, &[1, 0]), BigInt::from(2)).unwrap();
        let b = RationalCyclo::new(c(3, &[0, 1]), BigInt::from(4)).unwrap();
        let s = &a + &b;
        assert_eq!(s, RationalCyclo::new(c(3, &[2, 1]), BigInt::from(4)).unwrap());
        assert_eq!(&s - &b, a);
    }

    #[test]
    fn json_round_trip() {
        let a = RationalCyclo::new(c(5, &[1, -2, 0, 7]), BigInt::from(11)).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"num":["1","-2","0","7"],"den":"11"}"#);
        let back: RationalCyclo = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }
}
