//! Factorization of univariate polynomials over F_q.
//!
//! The pipeline is classical: characteristic-p squarefree decomposition,
//! distinct-degree splitting via iterated Frobenius, then equal-degree
//! splitting (probabilistic with a fixed-seed generator, so the output is
//! reproducible). Factors come back monic, sorted by (degree, coefficient
//! sequence), with the unit split off.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dense::DensePoly;
use super::field::{Field, Fq};
use crate::{Error, Result};

const EDF_SEED: u64 = 0x6d6f6e6f706f6c79;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Leading unit: the input equals unit * product of factor powers.
    pub unit: Fq,
    /// Monic irreducible factors with multiplicities, canonically sorted.
    pub factors: Vec<(DensePoly, u32)>,
}

/// Canonical sort key: degree, then coefficient indices from the constant up.
fn poly_key(p: &DensePoly) -> (usize, Vec<u32>) {
    (p.coeffs().len(), p.coeffs().iter().map(|c| c.0).collect())
}

/// p-th root of a polynomial all of whose exponents are divisible by p.
fn pth_root(f: &DensePoly) -> DensePoly {
    let field = f.field();
    let p = field.characteristic() as usize;
    let d = field.extension_degree();
    // a^{1/p} = a^{p^{d-1}} since Frobenius is an automorphism of F_q.
    let root_exp = (field.characteristic() as u64).pow(d - 1);
    let mut coeffs = Vec::new();
    for i in (0..f.coeffs().len()).step_by(p) {
        coeffs.push(field.pow(f.coeff(i), root_exp));
    }
    DensePoly::new(field, coeffs)
}

/// Monic squarefree decomposition: pairs (g_i, m_i) with f = prod g_i^{m_i},
/// the g_i squarefree, coprime, nonconstant.
fn squarefree_decomposition(f: &DensePoly) -> Result<Vec<(DensePoly, u32)>> {
    let field = f.field();
    let p = field.characteristic();
    let one = DensePoly::one(field);
    let mut result = Vec::new();
    let df = f.derivative();
    if df.is_zero() {
        // Every exponent is divisible by p: recurse on the p-th root.
        let root = pth_root(f);
        if root.degree() == Some(0) || root.is_zero() {
            return Ok(result);
        }
        for (g, m) in squarefree_decomposition(&root)? {
            result.push((g, m * p));
        }
        return Ok(result);
    }
    let mut c = f.gcd(&df)?;
    let mut w = f.divrem(&c)?.0;
    let mut i = 1u32;
    while w != one {
        let y = w.gcd(&c)?;
        let z = w.divrem(&y)?.0;
        if z != one {
            result.push((z, i));
        }
        w = y;
        c = c.divrem(&w)?.0;
        i += 1;
    }
    if c != one {
        // The tail keeps its full multiplicities (all divisible by p) and has
        // zero derivative, so the recursion scales them by p itself.
        result.extend(squarefree_decomposition(&c)?);
    }
    Ok(result)
}

/// Split a squarefree monic polynomial into (product of degree-i irreducibles, i) pairs.
fn distinct_degree(f: &DensePoly) -> Result<Vec<(DensePoly, usize)>> {
    let field = f.field();
    let q = field.order() as u128;
    let t = DensePoly::monomial(field, field.one(), 1);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut frob = t.pow_mod(q, &rest)?; // T^{q^i} mod rest, starting at i = 1
    let mut i = 1usize;
    while rest.degree().unwrap_or(0) >= 2 * i {
        let g = frob.sub(&t)?.gcd(&rest)?;
        if !g.is_zero() && g.degree() != Some(0) {
            out.push((g.clone(), i));
            rest = rest.divrem(&g)?.0;
            frob = frob.divrem(&rest)?.1;
        }
        i += 1;
        frob = frob.pow_mod(q, &rest)?;
    }
    if rest.degree().unwrap_or(0) >= 1 {
        let d = rest.degree().unwrap();
        out.push((rest, d));
    }
    Ok(out)
}

fn random_poly(field: &Field, deg_below: usize, rng: &mut ChaCha8Rng) -> DensePoly {
    let q = field.order();
    let coeffs: Vec<Fq> = (0..deg_below).map(|_| Fq(rng.gen_range(0..q))).collect();
    DensePoly::new(field, coeffs)
}

/// Equal-degree splitting of a monic squarefree product of irreducibles of
/// degree `d`.
fn equal_degree(f: &DensePoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<DensePoly>) -> Result<()> {
    let field = f.field();
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Ok(());
    }
    if n == d {
        out.push(f.clone());
        return Ok(());
    }
    let q = field.order() as u128;
    let one = DensePoly::one(field);
    loop {
        let r = random_poly(field, n, rng);
        if r.degree().unwrap_or(0) == 0 {
            continue;
        }
        let g = r.gcd(f)?;
        let candidate = if g.degree().unwrap_or(0) > 0 {
            g
        } else if field.characteristic() == 2 {
            // Trace map over F_2: sum of r^{2^j} for j < d*log2(q).
            let steps = d as u32 * field.extension_degree();
            let mut tr = r.divrem(f)?.1;
            let mut pow = tr.clone();
            for _ in 1..steps {
                pow = pow.mul(&pow)?.divrem(f)?.1;
                tr = tr.add(&pow)?;
            }
            tr.gcd(f)?
        } else {
            let exp_bits = (d as u32) * (128 - (q - 1).leading_zeros());
            if exp_bits >= 127 {
                return Err(Error::Unsupported(
                    "equal-degree splitting exponent exceeds 127 bits".into(),
                ));
            }
            let e = (q.pow(d as u32) - 1) / 2;
            let s = r.pow_mod(e, f)?;
            s.sub(&one)?.gcd(f)?
        };
        let k = candidate.degree().unwrap_or(0);
        if k > 0 && k < n {
            equal_degree(&candidate, d, rng, out)?;
            equal_degree(&f.divrem(&candidate)?.0, d, rng, out)?;
            return Ok(());
        }
    }
}

/// Factor into monic irreducibles over F_q.
pub fn factorize(f: &DensePoly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::Invalid("cannot factor the zero polynomial".into()));
    }
    let unit = f.leading_coeff().unwrap();
    let monic = f.monic()?;
    let mut factors: Vec<(DensePoly, u32)> = Vec::new();
    if monic.degree() == Some(0) {
        return Ok(Factorization { unit, factors });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(EDF_SEED);
    for (g, mult) in squarefree_decomposition(&monic)? {
        for (h, d) in distinct_degree(&g)? {
            let mut parts = Vec::new();
            equal_degree(&h, d, &mut rng, &mut parts)?;
            for part in parts {
                factors.push((part, mult));
            }
        }
    }
    factors.sort_by_key(|(p, _)| poly_key(p));
    // Merge any repeats (cannot occur from coprime squarefree parts, but keep
    // the output canonical regardless).
    let mut merged: Vec<(DensePoly, u32)> = Vec::new();
    for (p, m) in factors {
        match merged.last_mut() {
            Some((q, n)) if *q == p => *n += m,
            _ => merged.push((p, m)),
        }
    }
    Ok(Factorization { unit, factors: merged })
}

/// Rabin irreducibility test.
pub fn is_irreducible(f: &DensePoly) -> Result<bool> {
    let field = f.field();
    let Some(n) = f.degree() else {
        return Ok(false);
    };
    if n == 0 {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    let q = field.order() as u128;
    let t = DensePoly::monomial(field, field.one(), 1);
    // T^{q^n} must equal T modulo f.
    let mut frob = t.clone();
    let mut frob_pows = Vec::with_capacity(n);
    for _ in 0..n {
        frob = frob.pow_mod(q, f)?;
        frob_pows.push(frob.clone());
    }
    if frob_pows[n - 1] != t.divrem(f)?.1 {
        return Ok(false);
    }
    // gcd(T^{q^{n/l}} - T, f) must be constant for every prime l | n.
    let mut m = n;
    let mut primes = Vec::new();
    let mut k = 2;
    while k * k <= m {
        if m % k == 0 {
            primes.push(k);
            while m % k == 0 {
                m /= k;
            }
        }
        k += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    for l in primes {
        let g = frob_pows[n / l - 1].sub(&t)?.gcd(f)?;
        if g.degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Multiplicative order of T in F_q[T]/(P^n) for irreducible P with P(0) != 0.
pub fn mult_order(p_poly: &DensePoly, n: u32) -> Result<u128> {
    let field = p_poly.field();
    if n == 0 {
        return Err(Error::Invalid("precision must be at least 1".into()));
    }
    if !is_irreducible(p_poly)? {
        return Err(Error::Invalid("modulus base is not irreducible".into()));
    }
    if p_poly.coeff(0).0 == 0 {
        return Err(Error::Invalid("T is not a unit modulo a multiple of T".into()));
    }
    let e = p_poly.degree().unwrap() as u32;
    let q = field.order() as u128;
    let qe = q.checked_pow(e).filter(|&v| v <= 1 << 48).ok_or_else(|| {
        Error::Unsupported("residue field order exceeds 2^48; order search unsupported".into())
    })?;
    // Unit group order: q^{e(n-1)} * (q^e - 1).
    let p_part_exp = e * (n - 1) * field.extension_degree();
    let mut group_order = qe - 1;
    for _ in 0..p_part_exp {
        group_order = group_order
            .checked_mul(field.characteristic() as u128)
            .ok_or(Error::Overflow("unit group order"))?;
    }
    // Prime factors of the group order.
    let mut primes = Vec::new();
    if p_part_exp > 0 {
        primes.push(field.characteristic() as u128);
    }
    let mut v = qe - 1;
    let mut k = 2u128;
    while k * k <= v {
        if v % k == 0 {
            primes.push(k);
            while v % k == 0 {
                v /= k;
            }
        }
        k += 1;
    }
    if v > 1 {
        primes.push(v);
    }
    let modulus = p_poly.monic()?.pow(n as u64)?;
    let t = DensePoly::monomial(field, field.one(), 1);
    let one = DensePoly::one(field).divrem(&modulus)?.1;
    let mut order = group_order;
    for l in primes {
        while order % l == 0 && t.pow_mod(order / l, &modulus)? == one {
            order /= l;
        }
    }
    Ok(order)
}
