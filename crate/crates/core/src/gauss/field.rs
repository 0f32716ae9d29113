//! Polynomials over `F_q` and the residue fields `F_q[x]/h` with `h | Phi_p`.

use crate::error::{invalid, Error, Result};
use crate::residue::{is_prime_u64, mod_inverse};

/// Dense polynomial over `F_q`, lowest degree first, no trailing zeros.
pub type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub fn poly_sub(a: &[u64], b: &[u64], q: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + q - y) % q
        })
        .collect();
    trim(out)
}

pub fn poly_mul(a: &[u64], b: &[u64], q: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, q)) % q;
        }
    }
    trim(out)
}

/// Remainder of `a` modulo the nonzero polynomial `m`.
pub fn poly_rem(a: &[u64], m: &[u64], q: u64) -> Poly {
    let m = trim(m.to_vec());
    assert!(!m.is_empty(), "division by the zero polynomial");
    let mut r = trim(a.to_vec());
    let lead_inv = mod_inverse(*m.last().expect("nonzero") as i64, q).expect("field element");
    while r.len() >= m.len() {
        let c = mulmod(*r.last().expect("nonempty"), lead_inv, q);
        let shift = r.len() - m.len();
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + q - mulmod(c, mi, q)) % q;
        }
        r = trim(r);
    }
    r
}

fn make_monic(a: Poly, q: u64) -> Poly {
    match a.last() {
        None => a,
        Some(&lead) => {
            let inv = mod_inverse(lead as i64, q).expect("field element");
            a.into_iter().map(|c| mulmod(c, inv, q)).collect()
        }
    }
}

/// Monic gcd.
pub fn poly_gcd(a: &[u64], b: &[u64], q: u64) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, q);
        a = b;
        b = r;
    }
    make_monic(a, q)
}

/// `base^e mod m`.
pub fn poly_pow_mod(base: &[u64], mut e: u64, m: &[u64], q: u64) -> Poly {
    let mut acc: Poly = poly_rem(&[1], m, q);
    let mut b = poly_rem(base, m, q);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, q), m, q);
        }
        e >>= 1;
        if e > 0 {
            b = poly_rem(&poly_mul(&b, &b, q), m, q);
        }
    }
    acc
}

/// Kernel of a matrix over `F_q` (given by rows), as a list of basis vectors.
fn kernel(mut rows: Vec<Vec<u64>>, q: u64) -> Vec<Vec<u64>> {
    let n = rows.first().map_or(0, Vec::len);
    let mut pivot_col_of_row = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = mod_inverse(rows[r][col] as i64, q).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = mulmod(*x, inv, q);
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[col] != 0 {
                let c = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + q - mulmod(c, y, q)) % q;
                }
            }
        }
        pivot_col_of_row.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivot_col_of_row.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; n];
            v[fc] = 1;
            for (ri, &pc) in pivot_col_of_row.iter().enumerate() {
                v[pc] = (q - rows[ri][fc]) % q;
            }
            v
        })
        .collect()
}

/// Monic irreducible factors of the squarefree monic polynomial `f` over
/// `F_q`, by Berlekamp's deterministic algorithm. Sorted ascending by
/// coefficient vector, constant term first.
pub fn berlekamp_factor(f: &[u64], q: u64) -> Result<Vec<Poly>> {
    let f = trim(f.to_vec());
    let n = f.len().saturating_sub(1);
    if n == 0 {
        return invalid("cannot factor a constant");
    }
    if f[n] != 1 {
        return invalid("polynomial to factor must be monic");
    }
    if n == 1 {
        return Ok(vec![f]);
    }
    let f_prime: Poly = trim((1..=n).map(|i| mulmod(f[i], i as u64 % q, q)).collect());
    if poly_gcd(&f, &f_prime, q).len() > 1 {
        return invalid("polynomial to factor is not squarefree");
    }
    // Column i of B - I holds the coefficients of x^(q i) - x^i mod f; a
    // polynomial g with g^q = g corresponds to a kernel vector.
    let xq = poly_pow_mod(&[0, 1], q, &f, q);
    let mut power: Poly = vec![1];
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let mut c = power.clone();
        c.resize(n, 0);
        c[i] = (c[i] + q - 1) % q;
        cols.push(c);
        power = poly_rem(&poly_mul(&power, &xq, q), &f, q);
    }
    let rows: Vec<Vec<u64>> = (0..n).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    let basis = kernel(rows, q);
    let count = basis.len();
    let mut factors = vec![f.clone()];
    for g in basis.iter().map(|v| trim(v.clone())).filter(|g| g.len() > 1) {
        if factors.len() == count {
            break;
        }
        let mut next = Vec::new();
        for h in factors {
            if h.len() <= 2 {
                next.push(h);
                continue;
            }
            let mut rest = h;
            for s in 0..q {
                if rest.len() <= 2 {
                    break;
                }
                let d = poly_gcd(&rest, &poly_sub(&g, &[s], q), q);
                if d.len() > 1 && d.len() < rest.len() {
                    let (quot, _) = poly_divrem(&rest, &d, q);
                    next.push(d);
                    rest = quot;
                }
            }
            next.push(rest);
        }
        factors = next;
    }
    if factors.len() != count {
        return Err(Error::Internal(format!(
            "Berlekamp split into {} factors, expected {count}",
            factors.len()
        )));
    }
    factors.sort();
    Ok(factors)
}

fn poly_divrem(a: &[u64], m: &[u64], q: u64) -> (Poly, Poly) {
    let m = trim(m.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < m.len() {
        return (Vec::new(), r);
    }
    let lead_inv = mod_inverse(*m.last().expect("nonzero") as i64, q).expect("field element");
    let mut quot = vec![0u64; r.len() - m.len() + 1];
    while r.len() >= m.len() {
        let c = mulmod(*r.last().expect("nonempty"), lead_inv, q);
        let shift = r.len() - m.len();
        quot[shift] = c;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + q - mulmod(c, mi, q)) % q;
        }
        r = trim(r);
    }
    (trim(quot), r)
}

/// `Phi_p` reduced modulo `q`.
pub fn cyclotomic_mod(p: u64, q: u64) -> Poly {
    trim(vec![1 % q; p as usize])
}

/// An element of [`FiniteField`], as a reduced polynomial in the class of `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteFieldElem {
    rep: Poly,
}

impl FiniteFieldElem {
    pub fn rep(&self) -> &[u64] {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_empty()
    }
}

/// `F_q[x]/h` for an irreducible factor `h` of `Phi_p` mod `q`.
#[derive(Clone, Debug)]
pub struct FiniteField {
    q: u64,
    h: Poly,
    trace_of_powers: Vec<u64>,
}

impl FiniteField {
    /// `h` must be monic, irreducible and divide `Phi_p` mod `q`; the last two
    /// are checked through `h | Phi_p` and the order of `x`.
    pub fn new(p: u64, q: u64, h: Poly) -> Result<Self> {
        if !is_prime_u64(q) || !is_prime_u64(p) || p == q {
            return invalid(format!("need distinct primes, got p = {p}, q = {q}"));
        }
        let h = trim(h);
        if h.len() < 2 || h.last() != Some(&1) {
            return invalid("field modulus must be monic of positive degree");
        }
        if !poly_rem(&cyclotomic_mod(p, q), &h, q).is_empty() {
            return invalid(format!("{h:?} does not divide Phi_{p} mod {q}"));
        }
        let mut field = FiniteField { q, h, trace_of_powers: Vec::new() };
        let f = field.degree();
        let order = crate::residue::multiplicative_order(q % p, p).expect("q is a unit mod p");
        if order as usize != f {
            return invalid(format!("factor degree {f} differs from the order {order} of q mod {p}"));
        }
        field.trace_of_powers = (0..f)
            .map(|k| {
                let mut xk = vec![0u64; k + 1];
                xk[k] = 1;
                let e = field.elem(xk);
                field.trace(&e)
            })
            .collect();
        Ok(field)
    }

    pub fn degree(&self) -> usize {
        self.h.len() - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.h
    }

    pub fn characteristic(&self) -> u64 {
        self.q
    }

    /// Number of elements, `q^f`, or `None` on overflow.
    pub fn size(&self) -> Option<u64> {
        self.q.checked_pow(self.degree() as u32)
    }

    pub fn elem(&self, rep: Poly) -> FiniteFieldElem {
        FiniteFieldElem { rep: poly_rem(&rep, &self.h, self.q) }
    }

    /// The class of `x`, of multiplicative order `p`.
    pub fn generator_of_roots(&self) -> FiniteFieldElem {
        self.elem(vec![0, 1])
    }

    pub fn mul(&self, a: &FiniteFieldElem, b: &FiniteFieldElem) -> FiniteFieldElem {
        FiniteFieldElem { rep: poly_rem(&poly_mul(&a.rep, &b.rep, self.q), &self.h, self.q) }
    }

    pub fn pow(&self, a: &FiniteFieldElem, e: u64) -> FiniteFieldElem {
        FiniteFieldElem { rep: poly_pow_mod(&a.rep, e, &self.h, self.q) }
    }

    /// `a^q`.
    pub fn frobenius(&self, a: &FiniteFieldElem) -> FiniteFieldElem {
        self.pow(a, self.q)
    }

    /// `Tr(a) = a + a^q + ... + a^(q^(f-1))`, as an integer in `0..q`.
    pub fn trace(&self, a: &FiniteFieldElem) -> u64 {
        let mut acc: Poly = Vec::new();
        let mut img = a.clone();
        for _ in 0..self.degree() {
            let n = acc.len().max(img.rep.len());
            acc = trim(
                (0..n)
                    .map(|i| {
                        (acc.get(i).copied().unwrap_or(0) + img.rep.get(i).copied().unwrap_or(0))
                            % self.q
                    })
                    .collect(),
            );
            img = self.frobenius(&img);
        }
        debug_assert!(acc.len() <= 1, "trace lies in the prime field");
        acc.first().copied().unwrap_or(0)
    }

    /// The trace through the precomputed `Tr(x^k)`, linear in the coordinates.
    pub fn trace_linear(&self, a: &FiniteFieldElem) -> u64 {
        a.rep
            .iter()
            .zip(&self.trace_of_powers)
            .fold(0u64, |acc, (&c, &t)| (acc + mulmod(c, t, self.q)) % self.q)
    }

    /// Every nonzero element, in lexicographic order of coordinates.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = FiniteFieldElem> + '_ {
        let f = self.degree();
        let q = self.q;
        let total = self.size().expect("field size checked by the caller");
        (1..total).map(move |mut n| {
            let mut rep = Vec::with_capacity(f);
            for _ in 0..f {
                rep.push(n % q);
                n /= q;
            }
            FiniteFieldElem { rep: trim(rep) }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_irreducible(f: &[u64], q: u64) -> bool {
        // no monic factor of degree 1..=deg/2
        let n = f.len() - 1;
        for d in 1..=n / 2 {
            let count = q.pow(d as u32);
            for k in 0..count {
                let mut g = Vec::with_capacity(d + 1);
                let mut m = k;
                for _ in 0..d {
                    g.push(m % q);
                    m /= q;
                }
                g.push(1);
                if poly_rem(f, &g, q).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn cyclotomic_factorizations() {
        for (p, q) in [(3u64, 5u64), (5, 3), (5, 7), (7, 3), (7, 5), (5, 11), (7, 2), (13, 3), (11, 23)] {
            let phi = cyclotomic_mod(p, q);
            let factors = berlekamp_factor(&phi, q).unwrap();
            let f = crate::residue::multiplicative_order(q % p, p).unwrap() as usize;
            assert_eq!(factors.len(), (p as usize - 1) / f, "({p}, {q})");
            let mut prod: Poly = vec![1];
            for h in &factors {
                assert_eq!(h.len() - 1, f);
                assert!(brute_irreducible(h, q), "({p}, {q}) {h:?}");
                prod = poly_mul(&prod, h, q);
            }
            assert_eq!(prod, phi);
        }
    }

    #[test]
    fn traces_agree_and_land_in_prime_field() {
        let h = berlekamp_factor(&cyclotomic_mod(5, 7), 7).unwrap().remove(0);
        let field = FiniteField::new(5, 7, h).unwrap();
        for a in field.nonzero_elements().step_by(37) {
            assert_eq!(field.trace(&a), field.trace_linear(&a));
        }
        let x = field.generator_of_roots();
        assert_eq!(field.pow(&x, 5), field.elem(vec![1]));
        assert_ne!(field.pow(&x, 1), field.elem(vec![1]));
    }

    #[test]
    fn wrong_modulus_is_rejected() {
        assert!(FiniteField::new(5, 7, vec![1, 1]).is_err());
        assert!(FiniteField::new(5, 11, vec![3, 1]).is_err());
        assert!(berlekamp_factor(&[1, 2, 1], 5).is_err());
    }
}
