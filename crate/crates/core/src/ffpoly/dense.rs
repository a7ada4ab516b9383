//! Dense univariate polynomials over F_q, coefficient of T^i at index i.
//!
//! The zero polynomial has an empty coefficient vector; otherwise the leading
//! coefficient is nonzero. All binary operations require both operands to
//! carry the same field and report a mismatch otherwise.

use std::fmt;

use super::field::{Field, Fq};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct DensePoly {
    field: Field,
    coeffs: Vec<Fq>,
}

impl fmt::Debug for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.0 == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c.0)?,
                1 if c.0 == 1 => write!(f, "T")?,
                1 => write!(f, "{}*T", c.0)?,
                _ if c.0 == 1 => write!(f, "T^{i}")?,
                _ => write!(f, "{}*T^{i}", c.0)?,
            }
        }
        Ok(())
    }
}

impl DensePoly {
    /// Build from low-to-high coefficients, trimming leading zeros.
    pub fn new(field: &Field, coeffs: Vec<Fq>) -> DensePoly {
        let mut p = DensePoly { field: field.clone(), coeffs };
        p.normalize();
        p
    }

    /// Build from integers reduced into the prime subfield.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> DensePoly {
        let coeffs = coeffs.iter().map(|&c| field.from_int(c)).collect();
        DensePoly::new(field, coeffs)
    }

    pub fn zero(field: &Field) -> DensePoly {
        DensePoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> DensePoly {
        DensePoly { field: field.clone(), coeffs: vec![field.one()] }
    }

    /// The monomial c*T^n.
    pub fn monomial(field: &Field, c: Fq, n: usize) -> DensePoly {
        if field.is_zero(c) {
            return DensePoly::zero(field);
        }
        let mut coeffs = vec![field.zero(); n + 1];
        coeffs[n] = c;
        DensePoly { field: field.clone(), coeffs }
    }

    /// T^n - 1, the exponent-congruence modulus at window n.
    pub fn t_pow_minus_one(field: &Field, n: u64) -> DensePoly {
        let mut coeffs = vec![field.zero(); n as usize + 1];
        coeffs[0] = field.neg(field.one());
        coeffs[n as usize] = field.one();
        DensePoly::new(field, coeffs)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.0 == 0) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq(0))
    }

    pub fn leading_coeff(&self) -> Option<Fq> {
        self.coeffs.last().copied()
    }

    pub fn eval(&self, x: Fq) -> Fq {
        let f = &self.field;
        let mut acc = f.zero();
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    pub fn add(&self, other: &DensePoly) -> Result<DensePoly> {
        self.field.expect_same(&other.field)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(f.add(self.coeff(i), other.coeff(i)));
        }
        Ok(DensePoly::new(f, coeffs))
    }

    pub fn sub(&self, other: &DensePoly) -> Result<DensePoly> {
        self.field.expect_same(&other.field)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(f.sub(self.coeff(i), other.coeff(i)));
        }
        Ok(DensePoly::new(f, coeffs))
    }

    pub fn neg(&self) -> DensePoly {
        let f = &self.field;
        DensePoly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: Fq) -> DensePoly {
        let f = &self.field;
        DensePoly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &DensePoly) -> Result<DensePoly> {
        self.field.expect_same(&other.field)?;
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Ok(DensePoly::zero(f));
        }
        let mut coeffs = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.0 == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b.0 == 0 {
                    continue;
                }
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        Ok(DensePoly::new(f, coeffs))
    }

    /// Multiply by T^n.
    pub fn shift(&self, n: usize) -> DensePoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); n];
        coeffs.extend_from_slice(&self.coeffs);
        DensePoly { field: self.field.clone(), coeffs }
    }

    /// Euclidean division: self = q*div + r with deg r < deg div.
    pub fn divrem(&self, div: &DensePoly) -> Result<(DensePoly, DensePoly)> {
        self.field.expect_same(&div.field)?;
        let f = &self.field;
        if div.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        if self.coeffs.len() < div.coeffs.len() {
            return Ok((DensePoly::zero(f), self.clone()));
        }
        let dd = div.coeffs.len() - 1;
        let lead_inv = f.inv(div.coeffs[dd])?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![f.zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k];
            if c.0 == 0 {
                continue;
            }
            let qc = f.mul(c, lead_inv);
            quot[k - dd] = qc;
            for (i, &m) in div.coeffs.iter().enumerate() {
                rem[k - dd + i] = f.sub(rem[k - dd + i], f.mul(qc, m));
            }
        }
        rem.truncate(dd);
        Ok((DensePoly::new(f, quot), DensePoly::new(f, rem)))
    }

    /// Whether `self` divides `other` exactly in F_q[T].
    pub fn divides(&self, other: &DensePoly) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        Ok(other.divrem(self)?.1.is_zero())
    }

    /// Monic greatest common divisor; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &DensePoly) -> Result<DensePoly> {
        self.field.expect_same(&other.field)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divrem(&b)?.1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scale to leading coefficient 1; zero stays zero.
    pub fn monic(&self) -> Result<DensePoly> {
        match self.leading_coeff() {
            None => Ok(self.clone()),
            Some(l) => Ok(self.scale(self.field.inv(l)?)),
        }
    }

    pub fn pow(&self, mut e: u64) -> Result<DensePoly> {
        let mut base = self.clone();
        let mut acc = DensePoly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> DensePoly {
        let f = &self.field;
        if self.coeffs.len() <= 1 {
            return DensePoly::zero(f);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect();
        DensePoly::new(f, coeffs)
    }

    /// Remainder of self^e modulo `m`.
    pub fn pow_mod(&self, mut e: u128, m: &DensePoly) -> Result<DensePoly> {
        let mut base = self.divrem(m)?.1;
        let mut acc = DensePoly::one(&self.field).divrem(m)?.1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?.divrem(m)?.1;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?.divrem(m)?.1;
            }
        }
        Ok(acc)
    }
}

/// The window polynomial (T^{ab} - 1)/(T^a - 1) = 1 + T^a + ... + T^{a(b-1)}.
///
/// Defined for any a, b >= 1; the geometric-sum identity needs no
/// coprimality. Callers relying on the partition guarantee must restrict b
/// themselves; the polynomial is the same object either way.
pub fn gab_poly(field: &Field, a: u64, b: u64) -> Result<DensePoly> {
    if a == 0 || b == 0 {
        return Err(Error::Invalid("window parameters must be positive".into()));
    }
    let len = a
        .checked_mul(b - 1)
        .and_then(|n| n.checked_add(1))
        .filter(|&n| n <= 1 << 24)
        .ok_or(Error::Overflow("window polynomial degree"))?;
    let mut coeffs = vec![field.zero(); len as usize];
    for i in 0..b {
        coeffs[(a * i) as usize] = field.one();
    }
    Ok(DensePoly::new(field, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn divrem_example() {
        // T^3 = T * (T^2 + 1) + 2T over F_3.
        let f = f3();
        let p = DensePoly::from_ints(&f, &[0, 0, 0, 1]);
        let d = DensePoly::from_ints(&f, &[1, 0, 1]);
        let (q, r) = p.divrem(&d).unwrap();
        assert_eq!(q, DensePoly::from_ints(&f, &[0, 1]));
        assert_eq!(r, DensePoly::from_ints(&f, &[0, 2]));
        // Re-multiplication closes the loop.
        assert_eq!(q.mul(&d).unwrap().add(&r).unwrap(), p);
    }

    #[test]
    fn gcd_of_common_factor() {
        let f = f3();
        let a = DensePoly::from_ints(&f, &[1, 1]); // T + 1
        let b = DensePoly::from_ints(&f, &[2, 1]); // T + 2
        let c = DensePoly::from_ints(&f, &[1, 0, 1]); // T^2 + 1, irreducible over F_3
        let left = a.mul(&c).unwrap();
        let right = b.mul(&c).unwrap();
        assert_eq!(left.gcd(&right).unwrap(), c.monic().unwrap());
        let coprime = a.gcd(&b).unwrap();
        assert_eq!(coprime, DensePoly::one(&f));
    }

    #[test]
    fn gab_small_windows() {
        let f2 = Field::prime(2).unwrap();
        // (T^6 - 1)/(T^2 - 1) = T^4 + T^2 + 1 over F_2.
        assert_eq!(gab_poly(&f2, 2, 3).unwrap(), DensePoly::from_ints(&f2, &[1, 0, 1, 0, 1]));
        let f = f3();
        // (T^4 - 1)/(T^2 - 1) = T^2 + 1.
        assert_eq!(gab_poly(&f, 2, 2).unwrap(), DensePoly::from_ints(&f, &[1, 0, 1]));
        assert!(gab_poly(&f, 0, 3).is_err());
    }

    #[test]
    fn gab_matches_quotient_definition() {
        // Includes b divisible by the characteristic: the identity is
        // unconditional even though the partition guarantee is not.
        for (p, a, b) in [(2u32, 3u64, 5u64), (3, 2, 4), (5, 4, 3), (3, 1, 7), (2, 2, 2), (3, 2, 3)] {
            let f = Field::prime(p).unwrap();
            let g = gab_poly(&f, a, b).unwrap();
            let num = DensePoly::t_pow_minus_one(&f, a * b);
            let den = DensePoly::t_pow_minus_one(&f, a);
            let (q, r) = num.divrem(&den).unwrap();
            assert!(r.is_zero());
            assert_eq!(g, q);
        }
    }

    #[test]
    fn derivative_and_eval() {
        let f = f3();
        // (T^3 + 2T + 1)' = 3T^2 + 2 = 2 in characteristic 3.
        let p = DensePoly::from_ints(&f, &[1, 2, 0, 1]);
        assert_eq!(p.derivative(), DensePoly::from_ints(&f, &[2]));
        assert_eq!(p.eval(Fq(1)), f.from_int(4));
    }

    #[test]
    fn pow_mod_agrees_with_pow() {
        let f = f3();
        let base = DensePoly::from_ints(&f, &[1, 1]);
        let m = DensePoly::from_ints(&f, &[1, 0, 0, 1]);
        let direct = base.pow(10).unwrap().divrem(&m).unwrap().1;
        assert_eq!(base.pow_mod(10, &m).unwrap(), direct);
    }
}
