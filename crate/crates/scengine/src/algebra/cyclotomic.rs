//! Exact cyclotomic numbers: elements of Q(zeta_n) in the power basis of
//! Q[x]/Phi_n(x), with rational coefficients reduced modulo the n-th
//! cyclotomic polynomial.
//!
//! Values are stored at an explicit conductor; binary operations lift both
//! operands to the lcm conductor first, so equality is coefficient-vector
//! equality at a common conductor.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::Rat;
use crate::error::{Error, Result};

pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Coefficients of Phi_n, low degree first, monic. Computed by exact integer
/// division of x^n - 1 by the proper-divisor cyclotomic polynomials; cached.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d < n {
            let phi_d = cyclotomic_polynomial(d);
            num = int_poly_div_exact(&num, &phi_d);
        }
    }
    let result = Arc::new(num);
    cache.lock().unwrap().insert(n, result.clone());
    result
}

/// Exact division of integer polynomials (divisor monic), low degree first.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    let mut rem = num.to_vec();
    let mut quo = vec![BigInt::zero(); dn - dd + 1];
    for i in (dd..=dn).rev() {
        let c = std::mem::replace(&mut rem[i], BigInt::zero());
        if c.is_zero() {
            continue;
        }
        let shift = i - dd;
        for (j, dj) in den.iter().enumerate().take(dd) {
            rem[shift + j] -= &c * dj;
        }
        quo[shift] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quo
}

/// A cyclotomic number at an explicit conductor.
#[derive(Clone)]
pub struct Cyc {
    conductor: u64,
    coeffs: Vec<Rat>, // length phi(conductor)
}

impl Cyc {
    pub fn zero(conductor: u64) -> Self {
        Cyc {
            conductor,
            coeffs: vec![Rat::zero(); euler_phi(conductor) as usize],
        }
    }

    pub fn one(conductor: u64) -> Self {
        Cyc::from_rat_at(Rat::one(), conductor)
    }

    pub fn from_rat(r: Rat) -> Self {
        Cyc {
            conductor: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Cyc::from_rat(Rat::from_int(n))
    }

    pub fn from_rat_at(r: Rat, conductor: u64) -> Self {
        let mut c = Cyc::zero(conductor);
        // Phi_1 = x - 1, so the basis element is zeta^0 = 1 except at n = 1,
        // where reduction maps constants to themselves anyway.
        c.coeffs[0] = r;
        c
    }

    /// zeta_n^k, reduced.
    pub fn root(n: u64, k: u64) -> Self {
        let k = k % n.max(1);
        let phi = euler_phi(n) as usize;
        if (k as usize) < phi && n > 1 {
            let mut c = Cyc::zero(n);
            c.coeffs[k as usize] = Rat::one();
            return c;
        }
        let mut poly = vec![Rat::zero(); k as usize + 1];
        poly[k as usize] = Rat::one();
        Cyc::from_poly(n, poly)
    }

    /// Build from an arbitrary-degree polynomial in zeta_n, reducing mod Phi_n.
    pub fn from_poly(conductor: u64, mut poly: Vec<Rat>) -> Self {
        reduce_mod_cyclotomic(conductor, &mut poly);
        let phi = euler_phi(conductor) as usize;
        poly.resize(phi, Rat::zero());
        Cyc {
            conductor,
            coeffs: poly,
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    /// Rewrite at conductor m, where conductor | m.
    pub fn embed(&self, m: u64) -> Self {
        if m == self.conductor {
            return self.clone();
        }
        assert_eq!(m % self.conductor, 0, "embed target must be a multiple");
        let step = (m / self.conductor) as usize;
        let mut poly = vec![Rat::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[k * step] = c.clone();
            }
        }
        Cyc::from_poly(m, poly)
    }

    /// Try to rewrite at a divisor conductor m | conductor. Returns None when
    /// the value does not lie in Q(zeta_m).
    pub fn descend(&self, m: u64) -> Option<Self> {
        assert_eq!(self.conductor % m, 0, "descend target must divide");
        if m == self.conductor {
            return Some(self.clone());
        }
        // Columns: reductions of zeta_n^{(n/m) j} for j < phi(m).
        let phi_m = euler_phi(m) as usize;
        let phi_n = self.coeffs.len();
        let mut cols = Vec::with_capacity(phi_m);
        for j in 0..phi_m {
            let col = Cyc::root(self.conductor, (self.conductor / m) * j as u64);
            cols.push(col.coeffs);
        }
        // Solve the phi_n x phi_m system cols * x = coeffs exactly.
        solve_rational(&cols, &self.coeffs, phi_n).map(|x| Cyc {
            conductor: m,
            coeffs: x,
        })
    }

    /// Smallest conductor over the divisor lattice at which the value can be
    /// written.
    pub fn reduced(&self) -> Self {
        let mut cur = self.clone();
        loop {
            let mut progressed = false;
            for &d in divisors(cur.conductor).iter() {
                if d < cur.conductor {
                    if let Some(down) = cur.descend(d) {
                        cur = down;
                        progressed = true;
                        break;
                    }
                }
            }
            if !progressed {
                return cur;
            }
        }
    }

    pub fn as_rat(&self) -> Option<Rat> {
        if self.conductor == 1 {
            return Some(self.coeffs[0].clone());
        }
        self.descend(1).map(|c| c.coeffs[0].clone())
    }

    pub fn is_rational(&self) -> bool {
        self.as_rat().is_some()
    }

    fn lift_pair(&self, other: &Cyc) -> (Cyc, Cyc, u64) {
        let m = self.conductor.lcm(&other.conductor);
        (self.embed(m), other.embed(m), m)
    }

    pub fn add(&self, other: &Cyc) -> Cyc {
        let (a, b, m) = self.lift_pair(other);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x + y)
            .collect();
        Cyc {
            conductor: m,
            coeffs,
        }
    }

    pub fn sub(&self, other: &Cyc) -> Cyc {
        let (a, b, m) = self.lift_pair(other);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x - y)
            .collect();
        Cyc {
            conductor: m,
            coeffs,
        }
    }

    pub fn neg(&self) -> Cyc {
        Cyc {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Cyc) -> Cyc {
        let (a, b, m) = self.lift_pair(other);
        let mut poly = vec![Rat::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                poly[i + j] += &(x * y);
            }
        }
        Cyc::from_poly(m, poly)
    }

    pub fn scale(&self, r: &Rat) -> Cyc {
        Cyc {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Cyc {
        let mut base = self.clone();
        let mut acc = Cyc::one(self.conductor);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Galois map zeta |-> zeta^j; requires gcd(j, conductor) = 1.
    pub fn galois(&self, j: u64) -> Cyc {
        let n = self.conductor;
        if n <= 2 {
            return self.clone();
        }
        assert_eq!(n.gcd(&j), 1, "galois exponent must be coprime");
        let mut poly = vec![Rat::zero(); n as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let idx = ((k as u64 * j) % n) as usize;
                poly[idx] += c;
            }
        }
        Cyc::from_poly(n, poly)
    }

    /// Complex conjugation zeta |-> zeta^{-1}.
    pub fn conj(&self) -> Cyc {
        if self.conductor <= 2 {
            return self.clone();
        }
        self.galois(self.conductor - 1)
    }

    /// True when all power-basis coefficients are integers (algebraic-integer
    /// check used by the character-table integrality property).
    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(Rat::is_integer)
    }

    /// Total order at a common conductor (lexicographic on coefficients).
    pub fn value_cmp(&self, other: &Cyc) -> Ordering {
        let (a, b, _) = self.lift_pair(other);
        a.coeffs.cmp(&b.coeffs)
    }
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b, _) = self.lift_pair(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyc {}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rat::zero();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if k == 0 {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                if k == 1 {
                    write!(f, "z{}", self.conductor)?;
                } else {
                    write!(f, "z{}^{}", self.conductor, k)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct CycRepr {
    conductor: u64,
    coeffs: Vec<String>,
}

impl Serialize for Cyc {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CycRepr {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cyc {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = CycRepr::deserialize(deserializer)?;
        let phi = euler_phi(repr.conductor) as usize;
        if repr.coeffs.len() != phi {
            return Err(D::Error::custom(format!(
                "expected {} coefficients at conductor {}",
                phi, repr.conductor
            )));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| s.parse::<Rat>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(Cyc {
            conductor: repr.conductor,
            coeffs,
        })
    }
}

fn reduce_mod_cyclotomic(n: u64, poly: &mut Vec<Rat>) {
    let phi = euler_phi(n) as usize;
    if poly.len() <= phi {
        return;
    }
    // First fold exponents mod n (zeta^n = 1), then divide by Phi_n.
    if poly.len() > n as usize {
        let folded_len = (n as usize).max(phi);
        let mut folded = vec![Rat::zero(); n as usize];
        for (k, c) in poly.iter().enumerate() {
            if !c.is_zero() {
                folded[k % n as usize] += c;
            }
        }
        folded.resize(folded_len, Rat::zero());
        *poly = folded;
    }
    let modulus = cyclotomic_polynomial(n);
    let deg = phi;
    for i in (deg..poly.len()).rev() {
        let c = std::mem::replace(&mut poly[i], Rat::zero());
        if c.is_zero() {
            continue;
        }
        let shift = i - deg;
        for (j, mj) in modulus.iter().enumerate().take(deg) {
            if !mj.is_zero() {
                let term = &c * &Rat::from_bigint(mj.clone());
                poly[shift + j] -= &term;
            }
        }
    }
    poly.truncate(deg);
}

/// Solve `cols * x = rhs` exactly, where `cols` are column vectors of length
/// `rows`. Returns None when inconsistent.
fn solve_rational(cols: &[Vec<Rat>], rhs: &[Rat], rows: usize) -> Option<Vec<Rat>> {
    let ncols = cols.len();
    let mut m: Vec<Vec<Rat>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rat> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].recip().ok()?;
        for j in c..=ncols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=ncols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= &t;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    // Inconsistent if a zero row has nonzero rhs.
    for row in m.iter().skip(r) {
        if !row[ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); ncols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[i][ncols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64, k: u64) -> Cyc {
        Cyc::root(n, k)
    }

    #[test]
    fn phi_and_divisors() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(7), 6);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(272), 128);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn cyclotomic_polynomials() {
        // Phi_3 = x^2 + x + 1, Phi_4 = x^2 + 1, Phi_6 = x^2 - x + 1
        let p3 = cyclotomic_polynomial(3);
        assert_eq!(p3.as_slice(), &[1.into(), 1.into(), 1.into()]);
        let p4 = cyclotomic_polynomial(4);
        assert_eq!(p4.as_slice(), &[1.into(), 0.into(), 1.into()]);
        let p6 = cyclotomic_polynomial(6);
        assert_eq!(p6.as_slice(), &[1.into(), (-1).into(), 1.into()]);
    }

    #[test]
    fn basic_identities() {
        // zeta_3 + zeta_3^2 = -1
        assert_eq!(z(3, 1).add(&z(3, 2)), Cyc::from_int(-1));
        // zeta_4 * zeta_4 = -1
        assert_eq!(z(4, 1).mul(&z(4, 1)), Cyc::from_int(-1));
    }

    fn table4_a(i: usize) -> Cyc {
        // A1, A2, A3 over zeta_7 in the power basis 1..zeta^5.
        let rows: [[i64; 6]; 3] = [
            [1, 0, 3, 1, 1, 3],
            [0, 0, -1, 2, 2, -1],
            [-2, 0, -2, -3, -3, -2],
        ];
        Cyc {
            conductor: 7,
            coeffs: rows[i].iter().map(|&c| Rat::from_int(c)).collect(),
        }
    }

    #[test]
    fn supercharacter_value_sum() {
        let s = table4_a(0).add(&table4_a(1)).add(&table4_a(2));
        assert_eq!(s, Cyc::from_int(-1));
    }

    #[test]
    fn conjugation() {
        assert_eq!(z(3, 1).conj(), z(3, 2));
        assert_eq!(Cyc::from_rat("5/3".parse().unwrap()).conj().as_rat().unwrap().to_string(), "5/3");
        for i in 0..3 {
            assert_eq!(table4_a(i).conj(), table4_a(i));
        }
    }

    #[test]
    fn conj_is_involutive_and_multiplicative() {
        let a = z(12, 5).add(&z(12, 2).scale(&"7/2".parse().unwrap()));
        let b = z(12, 7).sub(&Cyc::from_int(3));
        assert_eq!(a.conj().conj(), a);
        assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
    }

    #[test]
    fn root_sums_vanish() {
        for n in 2..=12u64 {
            let mut s = Cyc::zero(n);
            for k in 0..n {
                s = s.add(&z(n, k));
            }
            assert!(s.is_zero(), "root sum at n = {n}");
        }
    }

    #[test]
    fn embed_descend_roundtrip() {
        let a = z(6, 1).add(&Cyc::from_int(2));
        let up = a.embed(36);
        assert_eq!(up.descend(6).unwrap(), a);
        // zeta_4 does not lie in Q(zeta_2)
        assert!(z(4, 1).descend(2).is_none());
        assert!(z(4, 1).descend(1).is_none());
    }

    #[test]
    fn degenerate_conductors() {
        // Phi_1 = x - 1 and Phi_2 = x + 1 both collapse to rationals.
        assert_eq!(Cyc::root(1, 0), Cyc::from_int(1));
        assert_eq!(Cyc::root(2, 1), Cyc::from_int(-1));
        let a = Cyc::from_rat_at("1/2".parse().unwrap(), 2);
        assert_eq!(a.add(&a), Cyc::from_int(1));
    }

    #[test]
    fn cross_conductor_equality() {
        assert_eq!(z(6, 3), Cyc::from_int(-1));
        assert_eq!(z(4, 2), Cyc::from_int(-1));
        assert_ne!(z(5, 1), z(7, 1));
    }

    #[test]
    fn reduced_finds_minimal_conductor() {
        let a = z(12, 3); // zeta_12^3 = zeta_4 = i
        let r = a.reduced();
        assert_eq!(r.conductor(), 4);
        assert_eq!(r, z(4, 1));
    }
}
