//! Dense multiplication in the group ring `Z[C_n1 x C_n2]`.
//!
//! Elements are flattened row-major in the first factor: index `i + n1 * j`
//! holds the coefficient of `x^i y^j`. Products never reduce modulo a
//! cyclotomic polynomial here; callers project to the canonical basis when
//! they are done.
//!
//! Every output coefficient (and every partial sum) of `a * b` is bounded by
//! `|a|_1 * |b|_1`, so when that bound fits in `i128` the product is computed
//! with native integers and no overflow is possible.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Torus {
    pub n1: usize,
    pub n2: usize,
    pub data: Vec<BigInt>,
}

impl Torus {
    pub fn zero(n1: usize, n2: usize) -> Self {
        Torus { n1, n2, data: vec![BigInt::zero(); n1 * n2] }
    }

    pub fn one(n1: usize, n2: usize) -> Self {
        let mut t = Self::zero(n1, n2);
        t.data[0] = BigInt::from(1);
        t
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i + self.n1 * j
    }

    pub fn add_at(&mut self, i: usize, j: usize, c: impl Into<BigInt>) {
        let k = self.idx(i % self.n1, j % self.n2);
        self.data[k] += c.into();
    }

    fn l1(&self) -> BigInt {
        self.data.iter().map(|c| c.abs()).sum()
    }

    pub fn mul(&self, other: &Torus) -> Torus {
        assert_eq!((self.n1, self.n2), (other.n1, other.n2), "torus shape mismatch");
        let bound = self.l1() * other.l1();
        if bound < BigInt::from(i128::MAX) {
            self.mul_small(other)
        } else {
            self.mul_big(other)
        }
    }

    fn nonzero(&self) -> Vec<(usize, usize, &BigInt)> {
        let mut out = Vec::new();
        for j in 0..self.n2 {
            for i in 0..self.n1 {
                let c = &self.data[i + self.n1 * j];
                if !c.is_zero() {
                    out.push((i, j, c));
                }
            }
        }
        out
    }

    fn mul_small(&self, other: &Torus) -> Torus {
        let (n1, n2) = (self.n1, self.n2);
        let small = |t: &Torus| -> Vec<(usize, usize, i128)> {
            t.nonzero()
                .into_iter()
                .map(|(i, j, c)| (i, j, c.to_i128().expect("bounded by the L1 product")))
                .collect()
        };
        let a = small(self);
        let b = small(other);
        let mut acc = vec![0i128; n1 * n2];
        for &(i1, j1, x) in &a {
            for &(i2, j2, y) in &b {
                let mut i = i1 + i2;
                if i >= n1 {
                    i -= n1;
                }
                let mut j = j1 + j2;
                if j >= n2 {
                    j -= n2;
                }
                acc[i + n1 * j] += x * y;
            }
        }
        Torus { n1, n2, data: acc.into_iter().map(BigInt::from).collect() }
    }

    fn mul_big(&self, other: &Torus) -> Torus {
        let (n1, n2) = (self.n1, self.n2);
        let a = self.nonzero();
        let b = other.nonzero();
        let mut acc = vec![BigInt::zero(); n1 * n2];
        for &(i1, j1, x) in &a {
            for &(i2, j2, y) in &b {
                let k = (i1 + i2) % n1 + n1 * ((j1 + j2) % n2);
                acc[k] += x * y;
            }
        }
        Torus { n1, n2, data: acc }
    }

    pub fn pow(&self, mut e: u64) -> Torus {
        let mut base = self.clone();
        let mut acc = Torus::one(self.n1, self.n2);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Projects onto `Z[x]/Phi_n1 (x) Z[y]/Phi_n2` in the power basis of
    /// lengths `n1 - 1` and `n2 - 1` (a factor of size one is left alone).
    /// Returns rows indexed by the second factor.
    pub fn reduce(mut self) -> Vec<Vec<BigInt>> {
        let (n1, n2) = (self.n1, self.n2);
        if n1 > 1 {
            for j in 0..n2 {
                let top = std::mem::take(&mut self.data[n1 - 1 + n1 * j]);
                if !top.is_zero() {
                    for i in 0..n1 - 1 {
                        self.data[i + n1 * j] -= &top;
                    }
                }
            }
        }
        let rows = if n2 > 1 { n2 - 1 } else { 1 };
        let cols = if n1 > 1 { n1 - 1 } else { 1 };
        let mut out: Vec<Vec<BigInt>> = Vec::with_capacity(rows);
        let last: Vec<BigInt> = if n2 > 1 {
            (0..cols).map(|i| std::mem::take(&mut self.data[i + n1 * (n2 - 1)])).collect()
        } else {
            vec![BigInt::zero(); cols]
        };
        for j in 0..rows {
            let row: Vec<BigInt> = (0..cols)
                .map(|i| std::mem::take(&mut self.data[i + n1 * j]) - &last[i])
                .collect();
            out.push(row);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(a: &Torus, b: &Torus) -> Torus {
        let mut c = Torus::zero(a.n1, a.n2);
        for i1 in 0..a.n1 {
            for j1 in 0..a.n2 {
                for i2 in 0..a.n1 {
                    for j2 in 0..a.n2 {
                        let v = &a.data[a.idx(i1, j1)] * &b.data[b.idx(i2, j2)];
                        c.add_at(i1 + i2, j1 + j2, v);
                    }
                }
            }
        }
        c
    }

    #[test]
    fn small_and_big_paths_agree() {
        let mut a = Torus::zero(3, 5);
        let mut b = Torus::zero(3, 5);
        for k in 0..15 {
            a.data[k] = BigInt::from((k as i64 * 7919) % 23 - 11);
            b.data[k] = BigInt::from((k as i64 * 104_729) % 19 - 9);
        }
        assert_eq!(a.mul_small(&b), naive(&a, &b));
        assert_eq!(a.mul_big(&b), naive(&a, &b));
    }

    #[test]
    fn huge_coefficients_take_the_bigint_path() {
        let mut a = Torus::zero(5, 1);
        a.data[1] = BigInt::from(i128::MAX) * 3;
        a.data[4] = BigInt::from(-17);
        assert_eq!(a.mul(&a), naive(&a, &a));
    }

    #[test]
    fn reduce_one_dimensional() {
        // x^2 in Z[x]/(x^3 - 1) projects to -1 - x modulo Phi_3
        let mut t = Torus::zero(3, 1);
        t.data[2] = BigInt::from(1);
        let rows = t.reduce();
        assert_eq!(rows, vec![vec![BigInt::from(-1), BigInt::from(-1)]]);
    }
}
