//! Finite fields GF(p^k) with a deterministic modulus: the lexicographically
//! smallest monic irreducible polynomial of degree k over GF(p), coefficients
//! compared low-degree-first.
//!
//! Field elements are encoded as integers in [0, p^k): the digits of the code
//! in base p are the coefficients of the element in the polynomial basis
//! 1, x, ..., x^{k-1}.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Field element code; digits base p are polynomial-basis coefficients.
pub type FFElem = u64;

#[derive(Debug)]
struct FieldCore {
    p: u64,
    k: u32,
    order: u64,
    /// Monic modulus, low degree first, length k + 1.
    modulus: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct FiniteField {
    core: Arc<FieldCore>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.core.p == other.core.p && self.core.k == other.core.k
    }
}

impl Eq for FiniteField {}

impl std::hash::Hash for FiniteField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.core.p.hash(state);
        self.core.k.hash(state);
    }
}

impl PartialOrd for FiniteField {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FiniteField {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.core.p, self.core.k).cmp(&(other.core.p, other.core.k))
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.core.k == 1 {
            write!(f, "GF({})", self.core.p)
        } else {
            write!(f, "GF({}^{})", self.core.p, self.core.k)
        }
    }
}

impl FiniteField {
    /// GF(p^k) with the deterministic modulus.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::Precondition("field degree must be positive".into()));
        }
        let order = p
            .checked_pow(k)
            .ok_or_else(|| Error::Precondition("field order overflows".into()))?;
        let modulus = smallest_irreducible(p, k);
        Ok(FiniteField {
            core: Arc::new(FieldCore { p, k, order, modulus }),
        })
    }

    pub fn prime(p: u64) -> Result<Self> {
        FiniteField::new(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.core.p
    }

    pub fn degree(&self) -> u32 {
        self.core.k
    }

    pub fn order(&self) -> u64 {
        self.core.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.core.modulus
    }

    pub fn decode(&self, e: FFElem) -> Vec<u64> {
        let mut digits = vec![0; self.core.k as usize];
        let mut e = e;
        for d in digits.iter_mut() {
            *d = e % self.core.p;
            e /= self.core.p;
        }
        digits
    }

    pub fn encode(&self, digits: &[u64]) -> FFElem {
        let mut e = 0;
        for &d in digits.iter().rev() {
            e = e * self.core.p + d % self.core.p;
        }
        e
    }

    pub fn add(&self, a: FFElem, b: FFElem) -> FFElem {
        let p = self.core.p;
        if self.core.k == 1 {
            return (a + b) % p;
        }
        let (mut a, mut b, mut out, mut base) = (a, b, 0u64, 1u64);
        for _ in 0..self.core.k {
            out += (a % p + b % p) % p * base;
            a /= p;
            b /= p;
            base *= p;
        }
        out
    }

    pub fn neg(&self, a: FFElem) -> FFElem {
        let p = self.core.p;
        if self.core.k == 1 {
            return (p - a % p) % p;
        }
        let (mut a, mut out, mut base) = (a, 0u64, 1u64);
        for _ in 0..self.core.k {
            out += (p - a % p) % p * base;
            a /= p;
            base *= p;
        }
        out
    }

    pub fn sub(&self, a: FFElem, b: FFElem) -> FFElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FFElem, b: FFElem) -> FFElem {
        let p = self.core.p as u128;
        if self.core.k == 1 {
            return ((a as u128 * b as u128) % p) as u64;
        }
        let k = self.core.k as usize;
        let da = self.decode(a);
        let db = self.decode(b);
        let mut conv = vec![0u128; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                conv[i + j] = (conv[i + j] + x as u128 * y as u128) % p;
            }
        }
        // Reduce mod the monic modulus.
        for i in (k..conv.len()).rev() {
            let c = conv[i];
            if c == 0 {
                continue;
            }
            conv[i] = 0;
            let shift = i - k;
            for (j, &mj) in self.core.modulus.iter().enumerate().take(k) {
                if mj != 0 {
                    let idx = shift + j;
                    conv[idx] = (conv[idx] + p - c * mj as u128 % p) % p;
                }
            }
        }
        let digits: Vec<u64> = conv[..k].iter().map(|&c| c as u64).collect();
        self.encode(&digits)
    }

    pub fn pow(&self, mut a: FFElem, mut e: u64) -> FFElem {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FFElem) -> Result<FFElem> {
        if a == 0 {
            return Err(Error::Precondition("inverse of zero".into()));
        }
        Ok(self.pow(a, self.core.order - 2))
    }

    /// Multiplicative order of a nonzero element.
    pub fn elem_order(&self, a: FFElem) -> Result<u64> {
        if a == 0 {
            return Err(Error::Precondition("order of zero".into()));
        }
        let mut ord = self.core.order - 1;
        for (q, _) in factorize(self.core.order - 1) {
            while ord % q == 0 && self.pow(a, ord / q) == 1 {
                ord /= q;
            }
        }
        Ok(ord)
    }

    /// First element (by code) of maximal multiplicative order.
    pub fn primitive_element(&self) -> FFElem {
        let target = self.core.order - 1;
        (1..self.core.order)
            .find(|&a| self.elem_order(a) == Ok(target))
            .expect("finite field has a primitive element")
    }

    pub fn frobenius(&self, a: FFElem) -> FFElem {
        self.pow(a, self.core.p)
    }

    pub fn elements(&self) -> impl Iterator<Item = FFElem> {
        0..self.core.order
    }
}

/// Lexicographically smallest (low-degree-first coefficient tuple) monic
/// irreducible polynomial of degree k over GF(p).
fn smallest_irreducible(p: u64, k: u32) -> Vec<u64> {
    if k == 1 {
        // x itself: GF(p)[x]/(x) = GF(p).
        return vec![0, 1];
    }
    let k = k as usize;
    let mut coeffs = vec![0u64; k]; // low coefficients; leading 1 implicit
    loop {
        let mut f = coeffs.clone();
        f.push(1);
        if f[0] != 0 && poly_is_irreducible(p, &f) {
            return f;
        }
        // Odometer with c_0 most significant so the scan is lexicographic
        // in (c_0, c_1, ..., c_{k-1}).
        let mut i = k;
        loop {
            assert!(i > 0, "no irreducible polynomial found");
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

// --- dense polynomial arithmetic over GF(p), low degree first ---

fn poly_trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    let lead_inv = mod_inv(*m.last().unwrap(), p);
    while r.len() > dm {
        let c = *r.last().unwrap() % p;
        let deg = r.len() - 1;
        if c != 0 {
            let f = c as u128 * lead_inv as u128 % p as u128;
            for (j, &mj) in m.iter().enumerate() {
                let idx = deg - dm + j;
                let sub = f * mj as u128 % p as u128;
                r[idx] = ((r[idx] as u128 + p as u128 - sub) % p as u128) as u64;
            }
        }
        r.pop();
    }
    poly_trim(&mut r);
    r
}

fn poly_mulmod(p: u64, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    let mut conv = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            conv[i + j] = ((conv[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    poly_rem(p, &conv, m)
}

fn poly_powmod(p: u64, a: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
    let mut base = poly_rem(p, a, m);
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(p, &acc, &base, m);
        }
        base = poly_mulmod(p, &base, &base, m);
        e >>= 1;
    }
    acc
}

fn poly_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        let r = poly_rem(p, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p prime
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = (result as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        e >>= 1;
    }
    result
}

/// Irreducibility over GF(p): x^{p^k} = x mod f, and gcd(x^{p^{k/t}} - x, f)
/// is constant for every prime t | k.
fn poly_is_irreducible(p: u64, f: &[u64]) -> bool {
    let k = (f.len() - 1) as u32;
    let x = vec![0u64, 1];
    let xq = |e: u32| -> Vec<u64> {
        // x^{p^e} mod f by repeated p-th powering
        let mut acc = x.clone();
        for _ in 0..e {
            acc = poly_powmod(p, &acc, p, f);
        }
        acc
    };
    let top = xq(k);
    // x^{p^k} - x must vanish mod f
    let mut diff = vec![0u64; top.len().max(2)];
    for (i, &c) in top.iter().enumerate() {
        diff[i] = c;
    }
    diff[1] = (diff[1] + p - 1) % p;
    poly_trim(&mut diff);
    if !(diff.len() == 1 && diff[0] == 0) {
        return false;
    }
    for (t, _) in factorize(k as u64) {
        let sub = xq(k / t as u32);
        let mut diff = vec![0u64; sub.len().max(2)];
        for (i, &c) in sub.iter().enumerate() {
            diff[i] = c;
        }
        diff[1] = (diff[1] + p - 1) % p;
        poly_trim(&mut diff);
        let g = poly_gcd(p, f, &diff);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(3) && is_prime(17) && is_prime(1361));
        assert!(!is_prime(1) && !is_prime(12) && !is_prime(1089));
    }

    #[test]
    fn prime_field() {
        let f = FiniteField::prime(3).unwrap();
        assert_eq!(f.order(), 3);
        assert_eq!(f.add(2, 2), 1);
        assert_eq!(f.mul(2, 2), 1);
        assert_eq!(f.inv(2).unwrap(), 2);
    }

    #[test]
    fn gf9_has_order_8_generator() {
        let f = FiniteField::new(3, 2).unwrap();
        assert_eq!(f.order(), 9);
        let g = f.primitive_element();
        assert_eq!(f.elem_order(g).unwrap(), 8);
    }

    #[test]
    fn gf4_primitive_order_3() {
        let f = FiniteField::new(2, 2).unwrap();
        assert_eq!(f.order(), 4);
        let g = f.primitive_element();
        assert_eq!(f.elem_order(g).unwrap(), 3);
        // x^2 + x + 1 is the only irreducible quadratic over GF(2)
        assert_eq!(f.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn not_prime_rejected() {
        assert!(matches!(FiniteField::new(6, 1), Err(Error::NotPrime(6))));
    }

    #[test]
    fn deterministic_moduli() {
        // Over GF(3): x^2 + 1 is irreducible and lexicographically first.
        let f = FiniteField::new(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        // x^3 + 2x + 1 over GF(3) (checked by hand: no roots).
        let c = FiniteField::new(3, 3).unwrap();
        assert_eq!(c.modulus(), &[1, 2, 0, 1]);
    }

    #[test]
    fn fermat_little_everywhere() {
        for (p, k) in [(2, 3), (3, 2), (5, 2), (7, 1), (2, 6)] {
            let f = FiniteField::new(p, k).unwrap();
            let s = f.order();
            for a in 1..s {
                assert_eq!(f.pow(a, s - 1), 1, "x^(s-1) = 1 in GF({s})");
            }
            assert_eq!(f.elem_order(f.primitive_element()).unwrap(), s - 1);
        }
    }

    #[test]
    fn frobenius_fixes_prime_subfield() {
        let f = FiniteField::new(5, 2).unwrap();
        for a in 0..5 {
            assert_eq!(f.frobenius(a), a);
        }
        let g = f.primitive_element();
        assert_ne!(f.frobenius(g), g);
    }
}
