use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::kernel::Torus;
use super::{check_modulus, format_poly, CycloInt, Valuation};
use crate::error::{invalid, Result};

/// An element of `Z[zeta_p, zeta_q]`, stored as `q - 1` coordinates over
/// `Z[zeta_p]` in the basis `1, zeta_q, ..., zeta_q^(q-2)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BiCycloInt {
    p: u64,
    q: u64,
    rows: Vec<CycloInt>,
}

impl BiCycloInt {
    pub fn new(p: u64, q: u64, rows: Vec<CycloInt>) -> Result<Self> {
        check_modulus(p)?;
        check_modulus(q)?;
        if p == q {
            return invalid(format!("p and q must be distinct, both are {p}"));
        }
        if rows.len() as u64 != q - 1 {
            return invalid(format!("expected {} rows for q = {q}, got {}", q - 1, rows.len()));
        }
        if let Some(bad) = rows.iter().find(|r| r.prime() != p) {
            return invalid(format!("row over p = {} in a p = {p} element", bad.prime()));
        }
        Ok(BiCycloInt { p, q, rows })
    }

    /// # Panics
    /// If `p`, `q` are not distinct odd primes.
    pub fn zero(p: u64, q: u64) -> Self {
        let rows = (0..q - 1).map(|_| CycloInt::zero(p)).collect();
        Self::new(p, q, rows).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Embeds `x` of `Z[zeta_p]`.
    pub fn from_cyclo(x: CycloInt, q: u64) -> Result<Self> {
        let p = x.prime();
        let mut rows = vec![x];
        rows.extend((1..q.max(2) - 1).map(|_| CycloInt::zero(p)));
        Self::new(p, q, rows)
    }

    pub fn one(p: u64, q: u64) -> Self {
        Self::from_cyclo(CycloInt::one(p), q).unwrap_or_else(|e| panic!("{e}"))
    }

    /// `zeta_p^a * zeta_q^b`.
    pub fn monomial(p: u64, q: u64, a: i64, b: i64) -> Self {
        let mut t = Torus::zero(p as usize, q as usize);
        t.add_at(a.rem_euclid(p as i64) as usize, b.rem_euclid(q as i64) as usize, 1);
        Self::from_torus(p, q, t)
    }

    pub(crate) fn from_torus(p: u64, q: u64, t: Torus) -> Self {
        debug_assert_eq!((t.n1, t.n2), (p as usize, q as usize));
        let rows = t
            .reduce()
            .into_iter()
            .map(|coeffs| CycloInt::new(p, coeffs).expect("reduced row has p - 1 entries"))
            .collect();
        BiCycloInt { p, q, rows }
    }

    pub(crate) fn to_torus(&self) -> Torus {
        let mut t = Torus::zero(self.p as usize, self.q as usize);
        for (j, row) in self.rows.iter().enumerate() {
            for (i, c) in row.coeffs().iter().enumerate() {
                t.data[i + self.p as usize * j] = c.clone();
            }
        }
        t
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// The `Z[zeta_p]`-coordinate of `zeta_q^j`.
    pub fn coefficient(&self, j: usize) -> &CycloInt {
        &self.rows[j]
    }

    pub fn rows(&self) -> &[CycloInt] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(CycloInt::is_zero)
    }

    /// The element as a member of `Z[zeta_p]`, if every `zeta_q` coordinate
    /// beyond the constant one vanishes.
    pub fn as_cyclo(&self) -> Option<&CycloInt> {
        if self.rows[1..].iter().all(CycloInt::is_zero) {
            Some(&self.rows[0])
        } else {
            None
        }
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if (self.p, self.q) != (other.p, other.q) {
            return invalid(format!(
                "mismatched rings ({}, {}) and ({}, {})",
                self.p, self.q, other.p, other.q
            ));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a + b).collect();
        Ok(BiCycloInt { p: self.p, q: self.q, rows })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a - b).collect();
        Ok(BiCycloInt { p: self.p, q: self.q, rows })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(Self::from_torus(self.p, self.q, self.to_torus().mul(&other.to_torus())))
    }

    pub fn pow(&self, e: u64) -> Self {
        Self::from_torus(self.p, self.q, self.to_torus().pow(e))
    }

    /// `zeta_p -> zeta_p^t`, fixing `zeta_q`.
    pub fn galois_subst_p(&self, t: i64) -> Result<Self> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.galois_subst(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(BiCycloInt { p: self.p, q: self.q, rows })
    }

    /// `sigma^k` on `zeta_p` (smallest primitive root), fixing `zeta_q`.
    pub fn galois_apply(&self, k: i64) -> Self {
        let rows = self.rows.iter().map(|r| r.galois_apply(k)).collect();
        BiCycloInt { p: self.p, q: self.q, rows }
    }

    /// `zeta_q -> zeta_q^t`, fixing `zeta_p`.
    pub fn galois_subst_q(&self, t: i64) -> Result<Self> {
        let q = self.q as i64;
        let t = t.rem_euclid(q);
        if t == 0 {
            return invalid(format!("substitution exponent is divisible by q = {q}"));
        }
        let mut out = Torus::zero(self.p as usize, self.q as usize);
        for (j, row) in self.rows.iter().enumerate() {
            let jj = ((j as i64 * t) % q) as usize;
            for (i, c) in row.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.add_at(i, jj, c.clone());
                }
            }
        }
        Ok(Self::from_torus(self.p, self.q, out))
    }

    /// Complex conjugation: `zeta_p -> zeta_p^-1` and `zeta_q -> zeta_q^-1`.
    pub fn conjugate(&self) -> Self {
        self.galois_subst_p(-1)
            .and_then(|x| x.galois_subst_q(-1))
            .expect("-1 is a unit modulo both primes")
    }

    /// The reduction `zeta_p -> 1` modulo `lambda`, landing in `F_p[zeta_q]`.
    /// Coefficients are returned as residues mod `p` in `(-p/2, p/2]`.
    pub fn eval_zeta_p_to_one(&self) -> CycloInt {
        let p = BigInt::from(self.p);
        let half = &p / 2;
        let coeffs: Vec<BigInt> = self
            .rows
            .iter()
            .map(|r| {
                let c = r.eval_at_one().mod_floor(&p);
                if c > half {
                    c - &p
                } else {
                    c
                }
            })
            .collect();
        CycloInt::new(self.q, coeffs).expect("q - 1 coordinates")
    }

    /// Minimum `pi`-adic valuation over the `Z[zeta_p]` coordinates. Since
    /// `pi` is unramified in `Q(zeta_pq)`, this is the largest `k` with
    /// `lambda^k` dividing the element.
    pub fn v_pi(&self) -> Valuation {
        self.rows
            .iter()
            .map(CycloInt::v_pi)
            .min()
            .unwrap_or(Valuation::Infinite)
    }
}

impl fmt::Debug for BiCycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiCycloInt[p={}, q={}]({self})", self.p, self.q)
    }
}

/// Sum of `(poly in z)*w^j` terms, `z = zeta_p`, `w = zeta_q`.
impl fmt::Display for BiCycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (j, row) in self.rows.iter().enumerate() {
            if row.is_zero() {
                continue;
            }
            let inner = format_poly(row.coeffs(), "z");
            terms.push(match j {
                0 => format!("({inner})"),
                1 => format!("({inner})*w"),
                _ => format!("({inner})*w^{j}"),
            });
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl Serialize for BiCycloInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.rows.iter())
    }
}

impl<'de> Deserialize<'de> for BiCycloInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<CycloInt> = Vec::deserialize(d)?;
        let p = rows.first().map(CycloInt::prime).ok_or_else(|| de::Error::custom("no rows"))?;
        let q = rows.len() as u64 + 1;
        BiCycloInt::new(p, q, rows).map_err(de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a BiCycloInt> for &'a BiCycloInt {
            type Output = BiCycloInt;
            fn $method(self, rhs: &'a BiCycloInt) -> BiCycloInt {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<BiCycloInt> for BiCycloInt {
            type Output = BiCycloInt;
            fn $method(self, rhs: BiCycloInt) -> BiCycloInt {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for BiCycloInt {
    type Output = BiCycloInt;
    fn neg(self) -> BiCycloInt {
        BiCycloInt { p: self.p, q: self.q, rows: self.rows.into_iter().map(|r| -r).collect() }
    }
}
