//! Sparse polynomials in T and X_1..X_M over F_q, and their specialization
//! at monomial points X_i = T^{e_i}.
//!
//! Terms are keyed by the full exponent tuple (d_0, d_1, ..., d_M): d_0 is
//! the T-degree, d_i the degree in X_i. Zero coefficients are never stored;
//! iteration order is the lexicographic order on tuples, which makes every
//! downstream enumeration deterministic.

use std::collections::BTreeMap;
use std::fmt;

use super::field::{Field, Fq};
use super::laurent::LaurentPoly;
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: Field,
    num_vars: usize,
    terms: BTreeMap<Vec<u32>, Fq>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (tuple, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c.0)?;
            if tuple[0] > 0 {
                write!(f, "*T^{}", tuple[0])?;
            }
            for (i, &d) in tuple.iter().enumerate().skip(1) {
                if d > 0 {
                    write!(f, "*X{i}^{d}")?;
                }
            }
        }
        Ok(())
    }
}

impl MultiPoly {
    pub fn zero(field: &Field, num_vars: usize) -> MultiPoly {
        MultiPoly { field: field.clone(), num_vars, terms: BTreeMap::new() }
    }

    /// Build from (tuple, coefficient) pairs; tuples are (d_0, d_1, ..., d_M)
    /// and must all have length `num_vars + 1`. Repeated tuples are summed.
    pub fn from_terms(
        field: &Field,
        num_vars: usize,
        terms: &[(Vec<u32>, Fq)],
    ) -> Result<MultiPoly> {
        let mut map: BTreeMap<Vec<u32>, Fq> = BTreeMap::new();
        for (tuple, c) in terms {
            if tuple.len() != num_vars + 1 {
                return Err(Error::Invalid(format!(
                    "exponent tuple {:?} has length {}, expected {}",
                    tuple,
                    tuple.len(),
                    num_vars + 1
                )));
            }
            let entry = map.entry(tuple.clone()).or_insert(Fq(0));
            *entry = field.add(*entry, *c);
        }
        map.retain(|_, c| c.0 != 0);
        Ok(MultiPoly { field: field.clone(), num_vars, terms: map })
    }

    /// Convenience constructor with integer coefficients.
    pub fn from_int_terms(
        field: &Field,
        num_vars: usize,
        terms: &[(i64, Vec<u32>)],
    ) -> Result<MultiPoly> {
        let mapped: Vec<(Vec<u32>, Fq)> =
            terms.iter().map(|(c, t)| (t.clone(), field.from_int(*c))).collect();
        MultiPoly::from_terms(field, num_vars, &mapped)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Number of X-variables M.
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterate (tuple, coefficient) in lexicographic tuple order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], Fq)> + '_ {
        self.terms.iter().map(|(t, &c)| (t.as_slice(), c))
    }

    /// Largest exponent appearing anywhere in the tuples, T-degree included.
    pub fn max_degree(&self) -> u32 {
        self.terms.keys().flat_map(|t| t.iter().copied()).max().unwrap_or(0)
    }

    /// Largest exponent among the X-degrees only.
    pub fn max_x_degree(&self) -> u32 {
        self.terms.keys().flat_map(|t| t[1..].iter().copied()).max().unwrap_or(0)
    }

    /// Exponent of T contributed by a term tuple at the monomial point e.
    pub fn term_exponent(tuple: &[u32], e: &[i64]) -> Result<i64> {
        let mut acc = tuple[0] as i64;
        for (d, &ei) in tuple[1..].iter().zip(e) {
            let contrib = (*d as i64).checked_mul(ei).ok_or(Error::Overflow("term exponent"))?;
            acc = acc.checked_add(contrib).ok_or(Error::Overflow("term exponent"))?;
        }
        Ok(acc)
    }

    /// Substitute X_i = T^{e_i}, producing a Laurent polynomial in T.
    pub fn specialize(&self, e: &[i64]) -> Result<LaurentPoly> {
        if e.len() != self.num_vars {
            return Err(Error::Invalid(format!(
                "exponent vector has length {}, expected {}",
                e.len(),
                self.num_vars
            )));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (tuple, &c) in &self.terms {
            terms.push((Self::term_exponent(tuple, e)?, c));
        }
        Ok(LaurentPoly::from_terms(&self.field, &terms))
    }
}

/// Validate that every polynomial of a system shares one field and one
/// variable count, returning (field, num_vars).
pub fn system_shape(polys: &[MultiPoly]) -> Result<(Field, usize)> {
    let Some(first) = polys.first() else {
        return Err(Error::Invalid("empty polynomial system".into()));
    };
    for p in &polys[1..] {
        first.field.expect_same(&p.field)?;
        if p.num_vars != first.num_vars {
            return Err(Error::Invalid("polynomials disagree on the number of variables".into()));
        }
    }
    Ok((first.field.clone(), first.num_vars))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specialization_collects_and_cancels() {
        let f = Field::prime(2).unwrap();
        // f = X1*X2 + T over F_2, e = (1, 0): T*1 + T = 0.
        let p = MultiPoly::from_int_terms(&f, 2, &[(1, vec![0, 1, 1]), (1, vec![1, 0, 0])])
            .unwrap();
        assert!(p.specialize(&[1, 0]).unwrap().is_zero());
        // e = (2, -1): T^{2-1} + T = 2T = 0 over F_2 as well.
        assert!(p.specialize(&[2, -1]).unwrap().is_zero());
        // e = (3, 1): T^4 + T != 0.
        let v = p.specialize(&[3, 1]).unwrap();
        assert_eq!(v.terms().collect::<Vec<_>>(), vec![(1, Fq(1)), (4, Fq(1))]);
    }

    #[test]
    fn negative_exponents_reach_laurent_terms() {
        let f = Field::prime(3).unwrap();
        let p = MultiPoly::from_int_terms(&f, 1, &[(1, vec![0, 2]), (-1, vec![1, 0])]).unwrap();
        let v = p.specialize(&[-3]).unwrap();
        assert_eq!(v.min_deg(), -6);
        assert_eq!(v.coeff(-6), Fq(1));
        assert_eq!(v.coeff(1), Fq(2));
    }

    #[test]
    fn degrees_and_shape_checks() {
        let f = Field::prime(5).unwrap();
        let p = MultiPoly::from_int_terms(&f, 2, &[(1, vec![3, 1, 0]), (4, vec![0, 2, 2])])
            .unwrap();
        assert_eq!(p.max_degree(), 3);
        assert_eq!(p.max_x_degree(), 2);
        let q = MultiPoly::from_int_terms(&f, 1, &[(1, vec![0, 1])]).unwrap();
        assert!(system_shape(&[p.clone(), q]).is_err());
        assert!(system_shape(std::slice::from_ref(&p)).is_ok());
        assert!(p.specialize(&[1]).is_err());
    }

    #[test]
    fn repeated_tuples_are_merged() {
        let f = Field::prime(3).unwrap();
        let p = MultiPoly::from_int_terms(
            &f,
            1,
            &[(1, vec![0, 1]), (2, vec![0, 1]), (1, vec![1, 0])],
        )
        .unwrap();
        // X1 + 2*X1 = 3*X1 = 0, leaving only T.
        assert_eq!(p.num_terms(), 1);
    }
}
