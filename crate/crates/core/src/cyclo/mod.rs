//! Exact arithmetic in `Z[zeta_p]` and `Z[zeta_p, zeta_q]`.

mod bicyclo;
mod cyclo_int;
pub(crate) mod kernel;
mod rational;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

pub use bicyclo::BiCycloInt;
pub use cyclo_int::CycloInt;
pub use rational::RationalCyclo;

/// A `pi`-adic valuation: a natural number, or infinity for zero.
///
/// Serializes as a JSON number, or the string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_u32(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Valuation::Finite(v)),
            Raw::Text(t) if t == "inf" => Ok(Valuation::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad valuation {t:?}"))),
        }
    }
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn at_least(self, bound: u32) -> bool {
        self >= Valuation::Finite(bound)
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Renders `c_0 + c_1*var + c_2*var^2 + ...`, skipping zero terms.
pub(crate) fn format_poly(coeffs: &[BigInt], var: &str) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let unit = mag == BigInt::from(1);
        match k {
            0 => out.push_str(&mag.to_string()),
            _ => {
                if !unit {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                out.push_str(var);
                if k > 1 {
                    out.push('^');
                    out.push_str(&k.to_string());
                }
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub(crate) fn check_modulus(p: u64) -> crate::Result<()> {
    if p < 3 || p % 2 == 0 || !crate::residue::is_prime_u64(p) {
        return crate::error::invalid(format!("cyclotomic modulus {p} is not an odd prime"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_order_and_sum() {
        assert!(Valuation::Finite(100) < Valuation::Infinite);
        assert!(Valuation::Finite(2) < Valuation::Finite(3));
        assert_eq!(Valuation::Finite(2) + Valuation::Finite(3), Valuation::Finite(5));
        assert_eq!(Valuation::Finite(2) + Valuation::Infinite, Valuation::Infinite);
        assert!(Valuation::Infinite.at_least(u32::MAX));
    }

    #[test]
    fn valuation_json() {
        assert_eq!(serde_json::to_string(&Valuation::Finite(3)).unwrap(), "3");
        assert_eq!(serde_json::to_string(&Valuation::Infinite).unwrap(), "\"inf\"");
        let v: Valuation = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(v, Valuation::Infinite);
        let v: Valuation = serde_json::from_str("7").unwrap();
        assert_eq!(v, Valuation::Finite(7));
    }

    #[test]
    fn poly_rendering() {
        let c = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(format_poly(&c(&[2, 0, 3]), "z"), "2 + 3*z^2");
        assert_eq!(format_poly(&c(&[0, -1, 1]), "z"), "-z + z^2");
        assert_eq!(format_poly(&c(&[0, 0]), "z"), "0");
        assert_eq!(format_poly(&c(&[-1, -2]), "s"), "-1 - 2*s");
    }
}
