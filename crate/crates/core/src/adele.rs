//! Finite-precision local data: places of k(T) away from T, residue
//! congruences, and the density comparison.
//!
//! A place is a monic irreducible P != T. A closure level fixes finitely
//! many places with precisions and works modulo Q = prod P^{n_v}; T is a
//! unit there, of some multiplicative order N, so exponent vectors live in
//! (Z/N)^M. [`congruence_solutions`] enumerates the residues that satisfy
//! the system modulo Q, [`exact_projection`] reduces an exact solution
//! family to the same quotient, and [`density_check`] runs a nested level
//! schedule verifying that the exact image is contained in the congruence
//! set everywhere and coincides with it once the level is fine enough.
//! [`frobenius_limit`] computes the stabilized value of T^(p^(n!)) in a
//! residue field together with its minimal polynomial.

use std::collections::BTreeSet;

use crate::ffpoly::{is_irreducible, mult_order, system_shape, DensePoly, Field, Fq, MultiPoly};
use crate::lifting::SolutionFamily;
use crate::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// A finite place of k(T) usable for monomial congruences: a monic
/// irreducible polynomial other than T (so T is a unit at the place).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Place {
    poly: DensePoly,
}

impl Place {
    pub fn new(poly: DensePoly) -> Result<Place> {
        let deg = poly.degree().ok_or(Error::Invalid("a place cannot be zero".into()))?;
        if deg == 0 {
            return Err(Error::Invalid("a place must be non-constant".into()));
        }
        if poly.leading_coeff() != Some(poly.field().one()) {
            return Err(Error::Invalid("a place must be monic".into()));
        }
        if poly.field().is_zero(poly.coeff(0)) {
            return Err(Error::Invalid("the place T is excluded: T must be a unit".into()));
        }
        if !is_irreducible(&poly)? {
            return Err(Error::Invalid("a place must be irreducible".into()));
        }
        Ok(Place { poly })
    }

    pub fn poly(&self) -> &DensePoly {
        &self.poly
    }

    pub fn field(&self) -> &Field {
        self.poly.field()
    }

    /// Residue field degree over the coefficient field.
    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    fn sort_key(&self) -> (usize, Vec<u32>) {
        (self.degree(), self.poly.coeffs().iter().map(|c| c.0).collect())
    }
}

/// Largest degree [`place_enumerate`] accepts.
pub const PLACE_ENUM_MAX_DEG: usize = 6;

/// All places of degree at most `max_deg`, in (degree, coefficients)
/// order. T itself is never a place.
pub fn place_enumerate(field: &Field, max_deg: usize) -> Result<Vec<Place>> {
    if max_deg == 0 || max_deg > PLACE_ENUM_MAX_DEG {
        return Err(Error::Cap(format!(
            "place enumeration supports degrees 1..={PLACE_ENUM_MAX_DEG}, got {max_deg}"
        )));
    }
    let q = field.order() as u64;
    let mut out = Vec::new();
    for deg in 1..=max_deg {
        let count = q
            .checked_pow(deg as u32)
            .ok_or(Error::Overflow("monic polynomial count"))?;
        for code in 0..count {
            let mut coeffs = Vec::with_capacity(deg + 1);
            let mut c = code;
            for _ in 0..deg {
                coeffs.push(Fq((c % q) as u32));
                c /= q;
            }
            coeffs.push(field.one());
            let poly = DensePoly::new(field, coeffs);
            // Skip T (zero constant term) and reducibles.
            if field.is_zero(poly.coeff(0)) || !is_irreducible(&poly)? {
                continue;
            }
            out.push(Place { poly });
        }
    }
    out.sort_by_key(Place::sort_key);
    Ok(out)
}

/// A finite list of places with precisions, closed into one working
/// modulus: Q = prod P^n and the order N of T modulo Q. Exponents of T are
/// well defined modulo N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureLevel {
    places: Vec<(Place, u32)>,
    modulus: DensePoly,
    period: u64,
}

impl ClosureLevel {
    pub fn new(places: Vec<(Place, u32)>) -> Result<ClosureLevel> {
        if places.is_empty() {
            return Err(Error::Invalid("a closure level needs at least one place".into()));
        }
        let field = places[0].0.field().clone();
        let mut modulus = DensePoly::one(&field);
        let mut period: u64 = 1;
        let mut seen: BTreeSet<(usize, Vec<u32>)> = BTreeSet::new();
        for (place, prec) in &places {
            place.field().expect_same(&field)?;
            if *prec == 0 {
                return Err(Error::Invalid("place precision must be at least 1".into()));
            }
            if !seen.insert(place.sort_key()) {
                return Err(Error::Invalid("duplicate place in closure level".into()));
            }
            let order = mult_order(place.poly(), *prec)?;
            let order = u64::try_from(order)
                .map_err(|_| Error::Overflow("multiplicative order of T"))?;
            period = lcm_u64(period, order).ok_or(Error::Overflow("exponent period"))?;
            modulus = modulus.mul(&place.poly().pow((*prec).into())?)?;
        }
        Ok(ClosureLevel { places, modulus, period })
    }

    pub fn places(&self) -> &[(Place, u32)] {
        &self.places
    }

    /// Q = prod P^n.
    pub fn modulus(&self) -> &DensePoly {
        &self.modulus
    }

    /// The order of T modulo Q: exponents are read modulo this.
    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn field(&self) -> &Field {
        self.modulus.field()
    }

    /// Does this level's modulus divide the finer level's modulus?
    pub fn divides(&self, finer: &ClosureLevel) -> Result<bool> {
        self.modulus.divides(&finer.modulus)
    }
}

fn lcm_u64(a: u64, b: u64) -> Option<u64> {
    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }
    (a / gcd(a, b)).checked_mul(b)
}

/// Residue vectors in (Z/period)^num_vars attached to the level that
/// defines them. Sorted set, so equal sets compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueSet {
    pub level: ClosureLevel,
    pub num_vars: usize,
    pub residues: BTreeSet<Vec<u64>>,
}

impl ResidueSet {
    pub fn is_subset(&self, other: &ResidueSet) -> bool {
        self.residues.is_subset(&other.residues)
    }
}

/// Cap on period^num_vars for residue enumeration.
pub const RESIDUE_ENUM_CAP: u64 = 1_000_000;

/// Table of T^r modulo Q for r in 0..N, as raw coefficient rows of width
/// deg Q. Row r+1 is row r shifted once and reduced by the monic modulus.
fn power_table(modulus: &DensePoly, period: u64) -> Result<Vec<Vec<Fq>>> {
    let field = modulus.field();
    let d = modulus.degree().ok_or(Error::Invalid("zero modulus".into()))?;
    if d == 0 {
        return Err(Error::Invalid("constant modulus".into()));
    }
    let mut rows = Vec::with_capacity(period as usize);
    let mut row = vec![field.zero(); d];
    row[0] = field.one();
    if d == 1 {
        // T reduces to a scalar immediately; recompute row 0 honestly.
        row[0] = field.one();
    }
    for _ in 0..period {
        rows.push(row.clone());
        let overflow = row[d - 1];
        for i in (1..d).rev() {
            row[i] = row[i - 1];
        }
        row[0] = field.zero();
        if !field.is_zero(overflow) {
            for (i, slot) in row.iter_mut().enumerate() {
                *slot = field.add(*slot, field.neg(field.mul(overflow, modulus.coeff(i))));
            }
        }
    }
    Ok(rows)
}

/// The terms of a polynomial prepared for residue evaluation: coefficient,
/// T-degree, X-degree vector.
fn term_data(f: &MultiPoly) -> Vec<(Fq, u64, Vec<u64>)> {
    f.terms()
        .map(|(tuple, c)| {
            (c, tuple[0] as u64, tuple[1..].iter().map(|&d| d as u64).collect())
        })
        .collect()
}

/// Does r satisfy every polynomial modulo Q? `acc` is a scratch row of
/// width deg Q.
fn residue_satisfies(
    field: &Field,
    polys: &[Vec<(Fq, u64, Vec<u64>)>],
    powers: &[Vec<Fq>],
    period: u64,
    r: &[u64],
    acc: &mut [Fq],
) -> bool {
    for terms in polys {
        acc.fill(field.zero());
        for (c, d0, dx) in terms {
            let mut exp = d0 % period;
            for (d, ri) in dx.iter().zip(r) {
                exp = (exp + (d % period) * ri) % period;
            }
            for (slot, p) in acc.iter_mut().zip(&powers[exp as usize]) {
                *slot = field.add(*slot, field.mul(*c, *p));
            }
        }
        if acc.iter().any(|&v| !field.is_zero(v)) {
            return false;
        }
    }
    true
}

/// All exponent residues r in (Z/N)^M with f_j(T^(r_1), ..., T^(r_M))
/// congruent to 0 modulo Q for every j. Well defined because T^N = 1
/// modulo Q.
pub fn congruence_solutions(polys: &[MultiPoly], level: &ClosureLevel) -> Result<ResidueSet> {
    let (field, m) = system_shape(polys)?;
    field.expect_same(level.field())?;
    let n = level.period();
    let total = n
        .checked_pow(m as u32)
        .filter(|&t| t <= RESIDUE_ENUM_CAP)
        .ok_or_else(|| {
            Error::Cap(format!(
                "{n}^{m} residue candidates exceed the cap of {RESIDUE_ENUM_CAP}"
            ))
        })?;
    let _ = total;
    let powers = power_table(level.modulus(), n)?;
    let width = level.modulus().degree().unwrap();
    let data: Vec<Vec<(Fq, u64, Vec<u64>)>> = polys.iter().map(term_data).collect();

    let scan_first = |r1: u64| -> BTreeSet<Vec<u64>> {
        let mut found = BTreeSet::new();
        let mut acc = vec![field.zero(); width];
        let mut r = vec![0u64; m];
        r[0] = r1;
        loop {
            if residue_satisfies(&field, &data, &powers, n, &r, &mut acc) {
                found.insert(r.clone());
            }
            // Advance coordinates 1.., keeping r[0] fixed.
            let mut pos = 1;
            loop {
                if pos >= m {
                    return found;
                }
                r[pos] += 1;
                if r[pos] < n {
                    break;
                }
                r[pos] = 0;
                pos += 1;
            }
        }
    };

    let residues: BTreeSet<Vec<u64>> = if m == 0 {
        BTreeSet::new()
    } else {
        #[cfg(feature = "parallel")]
        {
            (0..n)
                .into_par_iter()
                .map(scan_first)
                .reduce(BTreeSet::new, |mut a, b| {
                    a.extend(b);
                    a
                })
        }
        #[cfg(not(feature = "parallel"))]
        {
            let mut all = BTreeSet::new();
            for r1 in 0..n {
                all.extend(scan_first(r1));
            }
            all
        }
    };
    Ok(ResidueSet { level: level.clone(), num_vars: m, residues })
}

/// Reduce an exact solution family modulo the level: particular points and
/// the subgroup generated by the basis vectors, all in (Z/N)^M.
pub fn exact_projection(family: &SolutionFamily, level: &ClosureLevel) -> Result<ResidueSet> {
    let n = level.period();
    let ni = i64::try_from(n).map_err(|_| Error::Overflow("period"))?;
    let mut residues: BTreeSet<Vec<u64>> = BTreeSet::new();
    for coset in &family.cosets {
        let m = coset.particular.len();
        let base: Vec<u64> =
            coset.particular.iter().map(|&x| x.rem_euclid(ni) as u64).collect();
        let gens: Vec<Vec<u64>> = coset
            .basis
            .iter()
            .map(|v| v.iter().map(|&x| x.rem_euclid(ni) as u64).collect())
            .collect();
        // Subgroup closure of the reduced basis by worklist.
        let mut group: BTreeSet<Vec<u64>> = BTreeSet::new();
        let mut queue = vec![vec![0u64; m]];
        group.insert(queue[0].clone());
        while let Some(g) = queue.pop() {
            for gen in &gens {
                let next: Vec<u64> =
                    g.iter().zip(gen).map(|(a, b)| (a + b) % n).collect();
                if group.insert(next.clone()) {
                    if group.len() as u64 > RESIDUE_ENUM_CAP {
                        return Err(Error::Cap(format!(
                            "lattice image exceeds the cap of {RESIDUE_ENUM_CAP}"
                        )));
                    }
                    queue.push(next);
                }
            }
        }
        for g in &group {
            let point: Vec<u64> =
                base.iter().zip(g).map(|(a, b)| (a + b) % n).collect();
            residues.insert(point);
        }
    }
    Ok(ResidueSet { level: level.clone(), num_vars: family.num_vars, residues })
}

/// Per-level outcome of the density comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelReport {
    pub period: u64,
    pub modulus_degree: usize,
    pub congruence_count: usize,
    pub exact_count: usize,
    pub equal: bool,
}

/// Outcome of a full schedule run. `stabilized` means the finest level saw
/// the congruence set equal the exact image; `counterexamples` lists the
/// congruence residues at the finest level with no exact solution above
/// them (empty iff stabilized).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub levels: Vec<LevelReport>,
    /// First schedule index at which the two sets coincide, if any.
    pub first_equal: Option<usize>,
    pub stabilized: bool,
    pub counterexamples: Vec<Vec<u64>>,
}

/// Run the schedule: at every level check exact_projection is a subset of
/// congruence_solutions (a theorem; violation is an internal error), and
/// report where the sets become equal. Levels must be nested: each
/// modulus divides the next.
pub fn density_check(polys: &[MultiPoly], schedule: &[ClosureLevel]) -> Result<DensityReport> {
    if schedule.is_empty() {
        return Err(Error::Invalid("empty level schedule".into()));
    }
    for pair in schedule.windows(2) {
        if !pair[0].divides(&pair[1])? {
            return Err(Error::Invalid(
                "schedule is not nested: a modulus does not divide its successor".into(),
            ));
        }
    }
    let family = crate::lifting::solve_all_monomial_points(polys)?;
    let mut levels = Vec::with_capacity(schedule.len());
    let mut first_equal = None;
    let mut final_diff: Vec<Vec<u64>> = Vec::new();
    for (idx, level) in schedule.iter().enumerate() {
        let cong = congruence_solutions(polys, level)?;
        let exact = exact_projection(&family, level)?;
        if !exact.is_subset(&cong) {
            return Err(Error::Inconsistent(format!(
                "exact solutions escape the congruence set at level {idx}: \
                 an exact monomial point fails its own congruence"
            )));
        }
        let equal = exact.residues == cong.residues;
        if equal && first_equal.is_none() {
            first_equal = Some(idx);
        }
        if idx + 1 == schedule.len() {
            final_diff = cong.residues.difference(&exact.residues).cloned().collect();
        }
        levels.push(LevelReport {
            period: level.period(),
            modulus_degree: level.modulus().degree().unwrap_or(0),
            congruence_count: cong.residues.len(),
            exact_count: exact.residues.len(),
            equal,
        });
    }
    let stabilized = levels.last().map(|l| l.equal).unwrap_or(false);
    Ok(DensityReport { levels, first_equal, stabilized, counterexamples: final_diff })
}

/// The standard nested schedule: places of degree <= 1, <= 2, ..., <=
/// max_deg at precision 1, then the full place list again at precisions
/// 2..=max_prec.
pub fn standard_schedule(
    field: &Field,
    max_deg: usize,
    max_prec: u32,
) -> Result<Vec<ClosureLevel>> {
    if max_prec == 0 {
        return Err(Error::Invalid("precision must be at least 1".into()));
    }
    let mut schedule = Vec::new();
    for deg in 1..=max_deg {
        let places = place_enumerate(field, deg)?;
        schedule.push(ClosureLevel::new(places.into_iter().map(|p| (p, 1)).collect())?);
    }
    for prec in 2..=max_prec {
        let places = place_enumerate(field, max_deg)?;
        schedule.push(ClosureLevel::new(places.into_iter().map(|p| (p, prec)).collect())?);
    }
    Ok(schedule)
}

/// The stabilized value of T^(p^(n!)) in the residue field of a place,
/// with the index at which it stabilized and its minimal polynomial over
/// the coefficient field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusReport {
    pub place: Place,
    /// Representative of the limit in k[T]/(P), degree < deg P.
    pub limit: DensePoly,
    /// Least n at which p^(n!) fixes T: the sequence is constant from here.
    pub stabilized_at: u32,
    pub minimal_polynomial: DensePoly,
}

/// Cap on the stabilization search.
pub const FROBENIUS_SEARCH_CAP: u32 = 1_000;

/// Iterated-Frobenius limit at a place: T^(p^(n!)) modulo P stabilizes
/// once n! is divisible by the order of p modulo ord(T), because T^(p^(n!))
/// = T exactly then. The limit and its minimal polynomial are computed
/// honestly and the minimal polynomial is returned for comparison with P.
pub fn frobenius_limit(place: &Place) -> Result<FrobeniusReport> {
    let field = place.field();
    let p = field.characteristic() as u128;
    let ord = mult_order(place.poly(), 1)?;
    // Exponent of the n-th term, reduced modulo ord(T): e_1 = p, and
    // e_{n} = e_{n-1}^n since p^(n!) = (p^((n-1)!))^n.
    let mut e = p % ord;
    let mut n: u32 = 1;
    while e != 1 % ord {
        n += 1;
        if n > FROBENIUS_SEARCH_CAP {
            return Err(Error::Cutoff(format!(
                "no stabilization within {FROBENIUS_SEARCH_CAP} factorial steps"
            )));
        }
        e = pow_mod_u128(e, n as u128, ord);
    }
    let t = DensePoly::monomial(field, field.one(), 1);
    let limit = t.pow_mod(e, place.poly())?;
    // Stability audit: one more factorial step must not move the value.
    let e_next = pow_mod_u128(e, (n + 1) as u128, ord);
    if t.pow_mod(e_next, place.poly())? != limit {
        return Err(Error::Inconsistent("frobenius value moved after stabilization".into()));
    }
    let minimal_polynomial = minimal_poly(&limit, place.poly())?;
    Ok(FrobeniusReport { place: place.clone(), limit, stabilized_at: n, minimal_polynomial })
}

fn pow_mod_u128(base: u128, mut exp: u128, modulus: u128) -> u128 {
    let mut acc: u128 = 1 % modulus;
    let mut b = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % modulus;
        }
        b = b * b % modulus;
        exp >>= 1;
    }
    acc
}

/// Minimal polynomial over the coefficient field of an element of
/// k[T]/(modulus): the least j such that 1, alpha, ..., alpha^j are
/// linearly dependent, with the dependency normalized monic.
fn minimal_poly(alpha: &DensePoly, modulus: &DensePoly) -> Result<DensePoly> {
    let field = alpha.field();
    let d = modulus
        .degree()
        .ok_or(Error::Invalid("zero modulus".into()))?;
    // Power columns as coefficient vectors of width d.
    let mut powers: Vec<Vec<Fq>> = Vec::with_capacity(d + 1);
    let mut cur = DensePoly::one(field);
    for _ in 0..=d {
        let mut col = vec![field.zero(); d];
        for (i, slot) in col.iter_mut().enumerate() {
            *slot = cur.coeff(i);
        }
        powers.push(col);
        cur = cur.mul(alpha)?.divrem(modulus)?.1;
    }
    for j in 1..=d {
        // Solve sum_{i<j} c_i alpha^i = -alpha^j by Gaussian elimination.
        let mut aug: Vec<Vec<Fq>> = (0..d)
            .map(|row| {
                let mut line: Vec<Fq> = (0..j).map(|i| powers[i][row]).collect();
                line.push(field.neg(powers[j][row]));
                line
            })
            .collect();
        if let Some(coeffs) = gauss_solve(field, &mut aug, j)? {
            let mut poly = coeffs;
            poly.push(field.one());
            return Ok(DensePoly::new(field, poly));
        }
    }
    Err(Error::Inconsistent(
        "no dependency among powers up to the modulus degree".into(),
    ))
}

/// Solve an augmented system over Fq; `cols` unknowns, last column the
/// right side. Returns None when inconsistent.
fn gauss_solve(field: &Field, aug: &mut [Vec<Fq>], cols: usize) -> Result<Option<Vec<Fq>>> {
    let rows = aug.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut rank = 0;
    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| !field.is_zero(aug[r][col])) else {
            continue;
        };
        aug.swap(rank, pr);
        let inv = field.inv(aug[rank][col])?;
        for v in aug[rank].iter_mut() {
            *v = field.mul(*v, inv);
        }
        for r in 0..rows {
            if r != rank && !field.is_zero(aug[r][col]) {
                let factor = aug[r][col];
                for c in 0..=cols {
                    let sub = field.mul(factor, aug[rank][c]);
                    aug[r][c] = field.add(aug[r][c], field.neg(sub));
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    for row in aug.iter().skip(rank) {
        if !field.is_zero(row[cols]) {
            return Ok(None);
        }
    }
    let mut out = vec![field.zero(); cols];
    for (col, pivot) in pivot_of_col.iter().enumerate() {
        if let Some(r) = pivot {
            out[col] = aug[*r][cols];
        }
    }
    Ok(Some(out))
}
