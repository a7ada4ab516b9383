//! Finite fields F_q with q = p^d <= 2^16.
//!
//! Elements are stored as canonical indices: the element with polynomial-basis
//! digits (a_0, ..., a_{d-1}) over F_p has index sum a_i p^i. For d = 1 the
//! index is just the residue mod p. A [`Field`] is a cheap-clone handle;
//! equality compares (p, d, modulus), so two independently built handles for
//! the same field interoperate.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

const MAX_EXT_DEGREE: usize = 16;

/// An element of a finite field, as its canonical index in 0..q.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq(pub u32);

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq({})", self.0)
    }
}

#[derive(Debug)]
struct Repr {
    p: u32,
    d: u32,
    q: u32,
    /// Monic modulus digits (length d+1, last digit 1); empty when d == 1.
    modulus: Vec<u32>,
}

/// A finite field F_q, q = p^d.
#[derive(Clone)]
pub struct Field(Arc<Repr>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.d == other.0.d && self.0.modulus == other.0.modulus
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.d == 1 {
            write!(f, "F{}", self.0.p)
        } else {
            write!(f, "F{}^{} (mod {:?})", self.0.p, self.0.d, self.0.modulus)
        }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u32;
    while (k as u64) * (k as u64) <= n as u64 {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Remainder of digit-polynomial `a` modulo monic digit-polynomial `m`, all over F_p.
fn digit_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for i in 0..=dm {
                let sub = (lead as u64 * m[i] as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        while r.len() > dm && *r.last().unwrap() == 0 {
            r.pop();
        }
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

/// Whether the monic digit-polynomial `m` over F_p is irreducible, by trial
/// division against every monic polynomial of degree 1..=deg(m)/2.
fn digit_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for div_deg in 1..=deg / 2 {
        // Enumerate monic divisors by their non-leading digits as a base-p counter.
        let count = (p as u64).pow(div_deg as u32);
        for code in 0..count {
            let mut g = Vec::with_capacity(div_deg + 1);
            let mut c = code;
            for _ in 0..div_deg {
                g.push((c % p as u64) as u32);
                c /= p as u64;
            }
            g.push(1);
            if digit_rem(m, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p > MAX_ORDER {
            return Err(Error::InvalidField(format!("order {p} exceeds {MAX_ORDER}")));
        }
        Ok(Field(Arc::new(Repr { p, d: 1, q: p, modulus: Vec::new() })))
    }

    /// The extension F_{p^d} presented by a monic irreducible `modulus` over
    /// F_p, given as digits (constant first, leading digit 1, length d+1).
    pub fn extension(p: u32, modulus: &[u32]) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if modulus.len() < 3 {
            return Err(Error::InvalidField(
                "extension modulus must have degree at least 2".into(),
            ));
        }
        let d = modulus.len() - 1;
        if d > MAX_EXT_DEGREE {
            return Err(Error::InvalidField(format!("extension degree {d} too large")));
        }
        if modulus.last() != Some(&1) {
            return Err(Error::InvalidField("extension modulus must be monic".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus digits must be reduced mod p".into()));
        }
        let q = (p as u64).checked_pow(d as u32).filter(|&q| q <= MAX_ORDER as u64);
        let Some(q) = q else {
            return Err(Error::InvalidField(format!("order p^{d} exceeds {MAX_ORDER}")));
        };
        if !digit_irreducible(modulus, p) {
            return Err(Error::InvalidField("extension modulus is reducible".into()));
        }
        Ok(Field(Arc::new(Repr { p, d: d as u32, q: q as u32, modulus: modulus.to_vec() })))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.0.d
    }

    /// The field order q = p^d.
    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Digits of the extension modulus (empty for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> Fq {
        Fq(0)
    }

    pub fn one(&self) -> Fq {
        Fq(1)
    }

    /// The element with canonical index `idx`.
    pub fn elem(&self, idx: u32) -> Result<Fq> {
        if idx < self.0.q {
            Ok(Fq(idx))
        } else {
            Err(Error::Invalid(format!("element index {idx} out of range for order {}", self.0.q)))
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn is_zero(&self, a: Fq) -> bool {
        a.0 == 0
    }

    fn digits(&self, a: Fq) -> [u32; MAX_EXT_DEGREE] {
        let mut out = [0u32; MAX_EXT_DEGREE];
        let mut v = a.0;
        let p = self.0.p;
        let mut i = 0;
        while v > 0 {
            out[i] = v % p;
            v /= p;
            i += 1;
        }
        out
    }

    fn element_from_digits(&self, digits: &[u32]) -> Fq {
        let p = self.0.p;
        let mut v = 0u32;
        for &c in digits.iter().rev() {
            v = v * p + c;
        }
        Fq(v)
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let r = &self.0;
        if r.d == 1 {
            return Fq((a.0 + b.0) % r.p);
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut out = [0u32; MAX_EXT_DEGREE];
        for i in 0..r.d as usize {
            out[i] = (da[i] + db[i]) % r.p;
        }
        self.element_from_digits(&out[..r.d as usize])
    }

    pub fn neg(&self, a: Fq) -> Fq {
        let r = &self.0;
        if r.d == 1 {
            return Fq((r.p - a.0) % r.p);
        }
        let da = self.digits(a);
        let mut out = [0u32; MAX_EXT_DEGREE];
        for i in 0..r.d as usize {
            out[i] = (r.p - da[i]) % r.p;
        }
        self.element_from_digits(&out[..r.d as usize])
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        let r = &self.0;
        if r.d == 1 {
            return Fq(((a.0 as u64 * b.0 as u64) % r.p as u64) as u32);
        }
        let d = r.d as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = [0u64; 2 * MAX_EXT_DEGREE];
        for i in 0..d {
            if da[i] == 0 {
                continue;
            }
            for j in 0..d {
                prod[i + j] += da[i] as u64 * db[j] as u64;
            }
        }
        let p = r.p as u64;
        // Reduce modulo the monic modulus from the top down.
        for k in (d..2 * d - 1).rev() {
            let lead = prod[k] % p;
            if lead != 0 {
                for (i, &m) in r.modulus.iter().enumerate().take(d) {
                    // prod[k-d+i] -= lead * m[i]  (mod p), kept nonnegative
                    let sub = lead * m as u64 % p;
                    prod[k - d + i] = (prod[k - d + i] % p + p - sub) % p;
                }
            }
            prod[k] = 0;
        }
        let mut out = [0u32; MAX_EXT_DEGREE];
        for i in 0..d {
            out[i] = (prod[i] % p) as u32;
        }
        self.element_from_digits(&out[..d])
    }

    pub fn pow(&self, a: Fq, mut e: u64) -> Fq {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; zero has none.
    pub fn inv(&self, a: Fq) -> Result<Fq> {
        if a.0 == 0 {
            return Err(Error::Invalid("inverse of zero field element".into()));
        }
        Ok(self.pow(a, self.0.q as u64 - 2))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// All field elements in canonical index order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.0.q).map(Fq)
    }

    /// Check that two handles denote the same field.
    pub fn expect_same(&self, other: &Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }
}
