//! Laurent polynomials over F_q and pole-aware divisibility.
//!
//! A nonzero Laurent polynomial stores its least exponent `min_deg` and the
//! coefficients from there upward, with nonzero first and last entries. The
//! divisibility convention makes powers of T invisible: an ordinary
//! polynomial Q divides a Laurent polynomial P when no root of Q in the
//! algebraic closure is a pole of P/Q, counted with multiplicity.

use std::collections::BTreeMap;
use std::fmt;

use super::dense::DensePoly;
use super::field::{Field, Fq};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    field: Field,
    min_deg: i64,
    coeffs: Vec<Fq>,
}

impl fmt::Debug for LaurentPoly {
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
            let e = self.min_deg + i as i64;
            match e {
                0 => write!(f, "{}", c.0)?,
                1 if c.0 == 1 => write!(f, "T")?,
                _ if c.0 == 1 => write!(f, "T^{e}")?,
                1 => write!(f, "{}*T", c.0)?,
                _ => write!(f, "{}*T^{e}", c.0)?,
            }
        }
        Ok(())
    }
}

impl LaurentPoly {
    pub fn zero(field: &Field) -> LaurentPoly {
        LaurentPoly { field: field.clone(), min_deg: 0, coeffs: Vec::new() }
    }

    /// Build from (exponent, coefficient) pairs; repeated exponents are summed.
    pub fn from_terms(field: &Field, terms: &[(i64, Fq)]) -> LaurentPoly {
        let mut map: BTreeMap<i64, Fq> = BTreeMap::new();
        for &(e, c) in terms {
            let entry = map.entry(e).or_insert(Fq(0));
            *entry = field.add(*entry, c);
        }
        map.retain(|_, c| c.0 != 0);
        let Some((&lo, _)) = map.first_key_value() else {
            return LaurentPoly::zero(field);
        };
        let &hi = map.last_key_value().map(|(k, _)| k).unwrap();
        let mut coeffs = vec![Fq(0); (hi - lo + 1) as usize];
        for (e, c) in map {
            coeffs[(e - lo) as usize] = c;
        }
        LaurentPoly { field: field.clone(), min_deg: lo, coeffs }
    }

    /// The monomial c*T^e.
    pub fn monomial(field: &Field, c: Fq, e: i64) -> LaurentPoly {
        LaurentPoly::from_terms(field, &[(e, c)])
    }

    pub fn from_dense(p: &DensePoly) -> LaurentPoly {
        let terms: Vec<(i64, Fq)> =
            p.coeffs().iter().enumerate().map(|(i, &c)| (i as i64, c)).collect();
        LaurentPoly::from_terms(p.field(), &terms)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Least exponent with nonzero coefficient (0 for the zero polynomial).
    pub fn min_deg(&self) -> i64 {
        self.min_deg
    }

    /// Greatest exponent with nonzero coefficient, or None when zero.
    pub fn max_deg(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.min_deg + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn coeff(&self, e: i64) -> Fq {
        if e < self.min_deg {
            return Fq(0);
        }
        self.coeffs.get((e - self.min_deg) as usize).copied().unwrap_or(Fq(0))
    }

    /// Iterate (exponent, coefficient) over nonzero terms, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Fq)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.0 != 0)
            .map(|(i, &c)| (self.min_deg + i as i64, c))
    }

    pub fn add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.field.expect_same(&other.field)?;
        let mut terms: Vec<(i64, Fq)> = self.terms().collect();
        terms.extend(other.terms());
        Ok(LaurentPoly::from_terms(&self.field, &terms))
    }

    pub fn sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.field.expect_same(&other.field)?;
        let mut terms: Vec<(i64, Fq)> = self.terms().collect();
        terms.extend(other.terms().map(|(e, c)| (e, self.field.neg(c))));
        Ok(LaurentPoly::from_terms(&self.field, &terms))
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.field.expect_same(&other.field)?;
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Ok(LaurentPoly::zero(f));
        }
        let mut coeffs = vec![Fq(0); self.coeffs.len() + other.coeffs.len() - 1];
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
        Ok(LaurentPoly {
            field: f.clone(),
            min_deg: self.min_deg + other.min_deg,
            coeffs,
        })
    }

    /// Clear the pole at zero: returns the ordinary polynomial
    /// T^{-min(0, min_deg)} * self.
    pub fn cleared(&self) -> DensePoly {
        if self.is_zero() {
            return DensePoly::zero(&self.field);
        }
        let shift = (-self.min_deg).max(0);
        let mut coeffs = vec![Fq(0); (self.min_deg + shift) as usize];
        coeffs.extend_from_slice(&self.coeffs);
        DensePoly::new(&self.field, coeffs)
    }
}

/// Pole-aware divisibility: does Q ∈ F_q[T] divide P ∈ F_q[T, T^{-1}]?
///
/// Writing Q = T^s * Q0 with Q0(0) != 0, the convention reads: Q divides P
/// exactly when Q0 divides T^{-min(0, min_deg P)} * P in F_q[T] and the order
/// of P at zero is at least s. Zero is divisible by everything; a zero
/// divisor is rejected.
pub fn laurent_divides(q: &DensePoly, p: &LaurentPoly) -> Result<bool> {
    q.field().expect_same(p.field())?;
    if q.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    if p.is_zero() {
        return Ok(true);
    }
    // Split off the T^s factor of Q; its zero at the origin must not be a
    // pole (of order beyond s) of P/Q.
    let mut s = 0usize;
    while q.coeff(s).0 == 0 {
        s += 1;
    }
    if s > 0 && p.min_deg() < s as i64 {
        return Ok(false);
    }
    let q0 = DensePoly::new(q.field(), q.coeffs()[s..].to_vec());
    q0.divides(&p.cleared())
}
