//! From congruence witnesses to exact monomial points.
//!
//! A monomial point substitutes X_i = T^{E_i} into a system f_1..f_J over
//! F_q[T]. For a window level a and parameter b0, divisibility of each
//! specialized f_j by the (a, b0) window forces the term tuples of f_j into
//! residue classes modulo a*b0; partitioning each class into minimal
//! zero-sum blocks yields pair equations whose integer solutions are exactly
//! the monomial points compatible with those blocks. [`lift_exponents`]
//! drives one witness through [`crate::zsolve::lift`]; [`solve_all_monomial_points`]
//! unions the lattice cosets over every admissible joint block choice, which
//! is provably the complete solution set.

use crate::ffpoly::{gab_poly, laurent_divides, system_shape, DensePoly, Field, Fq, MultiPoly};
use crate::partition::{classwise_zero_sum_options, ZeroSumPartition, PARTITION_TERM_CAP};
use crate::zsolve::{
    self, base_modulus, normalize, AugSystem, IntMat, LatticeCoset, ModulusFamily, SolveOutcome,
    DEFAULT_MODULUS_CUTOFF,
};
use crate::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Window parameters: levels are drawn from a0 * N and the window polynomial
/// at level a is built with second parameter b0.
///
/// [`choose_parameters`] returns values in the guarantee regime (a0, b0
/// coprime to the characteristic, b0 exceeding (D+1)^(M+1), window coprime
/// to a forbidden set). [`GabParams::new`] accepts any positive coprime pair
/// for expert use at ad hoc levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GabParams {
    pub a0: u64,
    pub b0: u64,
    /// Irreducibles that must not divide any window polynomial in use.
    pub forbidden: Vec<DensePoly>,
}

impl GabParams {
    pub fn new(field: &Field, a0: u64, b0: u64) -> Result<GabParams> {
        if a0 == 0 || b0 == 0 {
            return Err(Error::Invalid("window parameters must be positive".into()));
        }
        let p = field.characteristic() as u64;
        if a0 % p == 0 || b0 % p == 0 {
            return Err(Error::Invalid(format!(
                "window parameters must be coprime to the characteristic {p}"
            )));
        }
        Ok(GabParams { a0, b0, forbidden: Vec::new() })
    }

    /// The level family the parameters induce: products prod_{i=1}^{a0+n} i,
    /// every element divisible by a0 and by all earlier elements.
    pub fn level_family(&self) -> ModulusFamily {
        ModulusFamily::FactorialProducts { start: self.a0 }
    }
}

/// How many multiples of a0 are sampled when vetting a candidate against the
/// forbidden set.
pub const LEVEL_SAMPLES: u64 = 8;

/// Largest a0 candidate tried before giving up.
pub const A0_SEARCH_LIMIT: u64 = 64;

/// Pick window parameters for a system: b0 is the least integer coprime to
/// the characteristic exceeding (D+1)^(M+1) where D bounds every tuple
/// component, and a0 is the least coprime value such that no forbidden
/// irreducible divides the window at sampled levels a0 * {1..8}.
///
/// The forbidden set must contain T; window polynomials have constant term
/// one, so T itself never divides them.
pub fn choose_parameters(polys: &[MultiPoly], forbidden: &[DensePoly]) -> Result<GabParams> {
    let (field, m) = system_shape(polys)?;
    let p = field.characteristic() as u64;
    let t = DensePoly::monomial(&field, field.one(), 1);
    if !forbidden.contains(&t) {
        return Err(Error::Invalid("the forbidden set must contain T".into()));
    }
    let d = polys.iter().map(|f| f.max_degree()).max().unwrap_or(0) as u64;
    let threshold = (d + 1)
        .checked_pow(m as u32 + 1)
        .filter(|&v| v <= 1 << 20)
        .ok_or(Error::Cap("degree bound (D+1)^(M+1) exceeds 2^20".into()))?;
    let mut b0 = threshold + 1;
    while b0 % p == 0 {
        b0 += 1;
    }
    'candidates: for a0 in 1..=A0_SEARCH_LIMIT {
        if a0 % p == 0 {
            continue;
        }
        for s in 1..=LEVEL_SAMPLES {
            let g = gab_poly(&field, a0 * s, b0)?;
            for q in forbidden {
                if *q != t && q.divides(&g)? {
                    continue 'candidates;
                }
            }
        }
        return Ok(GabParams { a0, b0, forbidden: forbidden.to_vec() });
    }
    Err(Error::Cutoff(format!(
        "no admissible a0 up to {A0_SEARCH_LIMIT} for b0 = {b0}"
    )))
}

/// One zero-sum partition of the term tuples of each polynomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PartitionChoice {
    pub per_poly: Vec<ZeroSumPartition>,
}

/// Pair equations of a joint choice: within every block, consecutive tuples
/// (d, d') contribute sum_i (d_i - d'_i) E_i = d'_0 - d_0. Solutions are the
/// exponent vectors making each block collapse onto a single monomial.
pub fn system_from_partitions(
    polys: &[MultiPoly],
    choice: &PartitionChoice,
) -> Result<AugSystem> {
    let (_, m) = system_shape(polys)?;
    if choice.per_poly.len() != polys.len() {
        return Err(Error::Invalid("one partition per polynomial is required".into()));
    }
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut rhs: Vec<i64> = Vec::new();
    for (f, part) in polys.iter().zip(&choice.per_poly) {
        let tuples: Vec<&[u32]> = f.terms().map(|(t, _)| t).collect();
        for block in &part.blocks {
            for pair in block.windows(2) {
                let d = tuples
                    .get(pair[0])
                    .ok_or_else(|| Error::Invalid(format!("tuple index {} out of range", pair[0])))?;
                let d2 = tuples
                    .get(pair[1])
                    .ok_or_else(|| Error::Invalid(format!("tuple index {} out of range", pair[1])))?;
                rows.push((1..=m).map(|i| d[i] as i64 - d2[i] as i64).collect());
                rhs.push(d2[0] as i64 - d[0] as i64);
            }
        }
    }
    if rows.is_empty() {
        rows.push(vec![0; m]);
        rhs.push(0);
    }
    AugSystem::new(IntMat::from_rows(&rows)?, rhs)
}

/// Cap on joint choices enumerated by the solvers below.
pub const JOINT_CHOICE_CAP: usize = 1 << 16;

/// For each polynomial, group its tuples by specialized exponent residue
/// modulo `window` and list the per-class partition options.
fn witness_options(
    f: &MultiPoly,
    e: &[i64],
    window: i64,
) -> Result<Vec<Vec<Vec<Vec<usize>>>>> {
    if f.num_terms() > PARTITION_TERM_CAP {
        return Err(Error::Cap(format!(
            "{} terms exceed the partition cap of {PARTITION_TERM_CAP}",
            f.num_terms()
        )));
    }
    let coeffs: Vec<Fq> = f.terms().map(|(_, c)| c).collect();
    let mut classes: std::collections::BTreeMap<i64, Vec<usize>> = Default::default();
    for (i, (tuple, _)) in f.terms().enumerate() {
        let ex = MultiPoly::term_exponent(tuple, e)?;
        classes.entry(ex.rem_euclid(window)).or_default().push(i);
    }
    let class_list: Vec<Vec<usize>> = classes.into_values().collect();
    Ok(classwise_zero_sum_options(f.field(), &coeffs, &class_list))
}

/// Iterate the cartesian product of option lists by odometer, assembling a
/// partition per polynomial. `groups[j]` holds the per-class options of
/// polynomial j. Calls `visit` for each joint choice until it returns true.
fn for_each_joint_choice<FVisit>(
    groups: &[Vec<Vec<Vec<Vec<usize>>>>],
    mut visit: FVisit,
) -> Result<bool>
where
    FVisit: FnMut(&PartitionChoice) -> Result<bool>,
{
    // Flatten: one odometer digit per (polynomial, class).
    let mut digits: Vec<(usize, usize, usize)> = Vec::new(); // (poly, class, count)
    let mut total: usize = 1;
    for (j, classes) in groups.iter().enumerate() {
        for (c, options) in classes.iter().enumerate() {
            if options.is_empty() {
                return Ok(false);
            }
            total = total
                .checked_mul(options.len())
                .filter(|&t| t <= JOINT_CHOICE_CAP)
                .ok_or_else(|| {
                    Error::Cap(format!("joint witness choices exceed {JOINT_CHOICE_CAP}"))
                })?;
            digits.push((j, c, options.len()));
        }
    }
    let _ = total;
    let mut idx = vec![0usize; digits.len()];
    loop {
        let mut per_poly: Vec<ZeroSumPartition> =
            groups.iter().map(|_| ZeroSumPartition { blocks: Vec::new() }).collect();
        for (pos, &(j, c, _)) in digits.iter().enumerate() {
            per_poly[j].blocks.extend(groups[j][c][idx[pos]].iter().cloned());
        }
        for part in &mut per_poly {
            part.blocks.sort();
        }
        if visit(&PartitionChoice { per_poly })? {
            return Ok(true);
        }
        // Advance the odometer.
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return Ok(false);
            }
            idx[pos] += 1;
            if idx[pos] < digits[pos].2 {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// A successful lift and the data needed to audit it.
#[derive(Clone, Debug)]
pub struct Lifted {
    pub exponents: Vec<i64>,
    /// The witness level a.
    pub level: u64,
    /// Base modulus n0 from the level family.
    pub base: i128,
    /// e and the lifted exponents agree modulo this (= level / base).
    pub promised_modulus: i128,
    pub choice: PartitionChoice,
}

#[derive(Clone, Debug)]
pub enum LiftOutcome {
    Lifted(Lifted),
    /// The divisibility hypothesis held and witnesses existed, yet every
    /// joint choice produced an exactly unsolvable system. Under the theory
    /// this cannot happen; the certificates make the claim auditable.
    Unsolvable { certificates: Vec<zsolve::EmptyCertificate> },
}

/// Lift a congruence witness to an exact monomial point.
///
/// Requires the (level, b0) window to divide every specialized polynomial.
/// The lifted point satisfies every f_j exactly and is congruent to e
/// modulo level / n0, where n0 is the least level-family element divisible
/// by the pivot product of the chosen pair system.
pub fn lift_exponents(
    polys: &[MultiPoly],
    e: &[i64],
    level: u64,
    params: &GabParams,
) -> Result<LiftOutcome> {
    let (field, m) = system_shape(polys)?;
    if e.len() != m {
        return Err(Error::Invalid("exponent vector length mismatch".into()));
    }
    if level == 0 || level % params.a0 != 0 {
        return Err(Error::Invalid(format!(
            "level {level} is not a positive multiple of a0 = {}",
            params.a0
        )));
    }
    let window = (level as i64)
        .checked_mul(params.b0 as i64)
        .ok_or(Error::Overflow("window size"))?;
    let g = gab_poly(&field, level, params.b0)?;
    for (j, f) in polys.iter().enumerate() {
        if !laurent_divides(&g, &f.specialize(e)?)? {
            return Err(Error::Hypothesis(format!(
                "the ({level}, {}) window does not divide polynomial {j} specialized at {e:?}",
                params.b0
            )));
        }
    }
    let mut groups = Vec::with_capacity(polys.len());
    for (j, f) in polys.iter().enumerate() {
        let options = witness_options(f, e, window)?;
        if options.iter().any(|o| o.is_empty()) {
            return Err(Error::Hypothesis(format!(
                "no zero-sum witness for polynomial {j}: a residue class admits no partition"
            )));
        }
        groups.push(options);
    }
    let family = params.level_family();
    let mut certificates: Vec<zsolve::EmptyCertificate> = Vec::new();
    let mut modulus_obstructions: Vec<i128> = Vec::new();
    let mut lifted: Option<Lifted> = None;
    for_each_joint_choice(&groups, |choice| {
        let sys = system_from_partitions(polys, choice)?;
        let nf = normalize(&sys)?;
        let n0 = base_modulus(&nf, &family, DEFAULT_MODULUS_CUTOFF)?;
        if level as i128 % n0 != 0 {
            modulus_obstructions.push(n0);
            return Ok(false);
        }
        match zsolve::lift(&sys, e, level as i128, n0) {
            Ok(exponents) => {
                for f in polys {
                    if !f.specialize(&exponents)?.is_zero() {
                        return Err(Error::Inconsistent(
                            "lifted point does not annihilate the system".into(),
                        ));
                    }
                }
                lifted = Some(Lifted {
                    exponents,
                    level,
                    base: n0,
                    promised_modulus: level as i128 / n0,
                    choice: choice.clone(),
                });
                Ok(true)
            }
            Err(Error::Inconsistent(_)) => {
                // This choice's residue class holds no exact solution; keep
                // an emptiness certificate and try the next choice.
                if let SolveOutcome::Empty(c) = zsolve::solve(&sys)? {
                    certificates.push(c);
                }
                Ok(false)
            }
            Err(other) => Err(other),
        }
    })?;
    if let Some(l) = lifted {
        return Ok(LiftOutcome::Lifted(l));
    }
    if !modulus_obstructions.is_empty() {
        modulus_obstructions.sort_unstable();
        modulus_obstructions.dedup();
        return Err(Error::Hypothesis(format!(
            "level {level} is not divisible by the base modulus; required one of {modulus_obstructions:?}"
        )));
    }
    Ok(LiftOutcome::Unsolvable { certificates })
}

/// Union of lattice cosets; the complete set of monomial points when
/// produced by [`solve_all_monomial_points`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionFamily {
    pub num_vars: usize,
    pub cosets: Vec<LatticeCoset>,
}

impl SolutionFamily {
    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn contains(&self, e: &[i64]) -> Result<bool> {
        for c in &self.cosets {
            if c.contains(e)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// The complete set of monomial points of the system, as a finite union of
/// lattice cosets over the exponent vector.
///
/// Every exact solution groups the tuples of each f_j by equal specialized
/// exponent; those groups are zero-sum and refine into minimal zero-sum
/// blocks, so the solution satisfies the pair system of some joint choice.
/// Conversely, any pair-system solution collapses each block onto one
/// monomial with zero-sum coefficients. The union over all joint choices is
/// therefore exact in both directions. Emitted cosets are spot-verified by
/// substitution.
pub fn solve_all_monomial_points(polys: &[MultiPoly]) -> Result<SolutionFamily> {
    let (field, m) = system_shape(polys)?;
    let mut per_poly_choices: Vec<Vec<ZeroSumPartition>> = Vec::with_capacity(polys.len());
    for f in polys {
        if f.num_terms() > PARTITION_TERM_CAP {
            return Err(Error::Cap(format!(
                "{} terms exceed the partition cap of {PARTITION_TERM_CAP}",
                f.num_terms()
            )));
        }
        let coeffs: Vec<Fq> = f.terms().map(|(_, c)| c).collect();
        let choices = crate::partition::enumerate_zero_sum_partitions(&field, &coeffs)?;
        if choices.is_empty() {
            // No zero-sum structure at all: f_j can never vanish under a
            // monomial substitution, so the system has no solutions.
            return Ok(SolutionFamily { num_vars: m, cosets: Vec::new() });
        }
        per_poly_choices.push(choices);
    }
    let mut joint: Vec<PartitionChoice> = vec![PartitionChoice { per_poly: Vec::new() }];
    for choices in &per_poly_choices {
        let mut next = Vec::with_capacity(joint.len() * choices.len());
        for base in &joint {
            for c in choices {
                if next.len() + 1 > JOINT_CHOICE_CAP {
                    return Err(Error::Cap(format!(
                        "joint partition choices exceed {JOINT_CHOICE_CAP}"
                    )));
                }
                let mut ext = base.clone();
                ext.per_poly.push(c.clone());
                next.push(ext);
            }
        }
        joint = next;
    }

    let solve_one = |choice: &PartitionChoice| -> Result<Option<LatticeCoset>> {
        let sys = system_from_partitions(polys, choice)?;
        match zsolve::solve(&sys)? {
            SolveOutcome::Empty(_) => Ok(None),
            SolveOutcome::Solutions(coset) => {
                let mut probes: Vec<Vec<i64>> = vec![coset.particular.clone()];
                for v in &coset.basis {
                    probes.push(
                        coset.particular.iter().zip(v).map(|(a, b)| a + b).collect(),
                    );
                }
                for probe in &probes {
                    for f in polys {
                        if !f.specialize(probe)?.is_zero() {
                            return Err(Error::Inconsistent(
                                "emitted coset fails substitution spot-check".into(),
                            ));
                        }
                    }
                }
                Ok(Some(coset))
            }
        }
    };

    #[cfg(feature = "parallel")]
    let collected: Vec<Option<LatticeCoset>> =
        joint.par_iter().map(solve_one).collect::<Result<_>>()?;
    #[cfg(not(feature = "parallel"))]
    let collected: Vec<Option<LatticeCoset>> =
        joint.iter().map(solve_one).collect::<Result<_>>()?;

    let mut cosets: Vec<LatticeCoset> = collected.into_iter().flatten().collect();
    cosets.sort_by(|a, b| (&a.particular, &a.basis).cmp(&(&b.particular, &b.basis)));
    cosets.dedup();
    Ok(SolutionFamily { num_vars: m, cosets })
}

/// Linearization data: each polynomial becomes a linear form over monomial
/// coordinates Y indexed by X-exponent tuples in {0..D}^M, with k[T]
/// coefficients folding the T-degrees.
#[derive(Clone, Debug)]
pub struct Veronese {
    pub field: Field,
    pub num_vars: usize,
    /// Bound on each X-exponent coordinate.
    pub degree: u32,
    /// forms[j] maps an X-exponent tuple to its k[T] coefficient.
    pub forms: Vec<std::collections::BTreeMap<Vec<u32>, DensePoly>>,
}

impl Veronese {
    /// All Y indices in row-major order; (degree+1)^num_vars entries.
    pub fn indices(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new()];
        for _ in 0..self.num_vars {
            let mut next = Vec::with_capacity(out.len() * (self.degree as usize + 1));
            for prefix in &out {
                for d in 0..=self.degree {
                    let mut ext = prefix.clone();
                    ext.push(d);
                    next.push(ext);
                }
            }
            out = next;
        }
        out
    }

    /// Image of the monomial point X_i = T^{e_i}: each Y index maps to the
    /// exponent of its monomial value.
    pub fn monomial_image(&self, e: &[i64]) -> Result<Vec<(Vec<u32>, i64)>> {
        if e.len() != self.num_vars {
            return Err(Error::Invalid("point dimension mismatch".into()));
        }
        self.indices()
            .into_iter()
            .map(|idx| {
                let mut acc: i64 = 0;
                for (d, &ei) in idx.iter().zip(e) {
                    acc = acc
                        .checked_add((*d as i64).checked_mul(ei).ok_or(Error::Overflow("image"))?)
                        .ok_or(Error::Overflow("image"))?;
                }
                Ok((idx, acc))
            })
            .collect()
    }

    /// Evaluate form j at a monomial Y-point, through the linearized data
    /// alone: sum over indices of coeff(T) * T^{y_index}.
    pub fn eval_form(&self, j: usize, image: &[(Vec<u32>, i64)]) -> Result<crate::ffpoly::LaurentPoly> {
        use crate::ffpoly::LaurentPoly;
        let form = self
            .forms
            .get(j)
            .ok_or_else(|| Error::Invalid(format!("no form {j}")))?;
        let lookup: std::collections::BTreeMap<&Vec<u32>, i64> =
            image.iter().map(|(k, v)| (k, *v)).collect();
        let mut acc = LaurentPoly::zero(&self.field);
        for (idx, coeff) in form {
            let y = lookup
                .get(idx)
                .ok_or_else(|| Error::Invalid(format!("image lacks index {idx:?}")))?;
            let shifted = LaurentPoly::from_dense(coeff)
                .mul(&LaurentPoly::monomial(&self.field, self.field.one(), *y))?;
            acc = acc.add(&shifted)?;
        }
        Ok(acc)
    }

    /// Does the monomial point X_i = T^{e_i} annihilate every form?
    pub fn vanishes_at(&self, e: &[i64]) -> Result<bool> {
        let image = self.monomial_image(e)?;
        for j in 0..self.forms.len() {
            if !self.eval_form(j, &image)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Cap on (degree+1)^num_vars for linearization.
pub const VERONESE_INDEX_CAP: u64 = 1 << 16;

/// Rewrite each polynomial as a linear form over monomial coordinates.
pub fn veronese_linearize(polys: &[MultiPoly]) -> Result<Veronese> {
    let (field, m) = system_shape(polys)?;
    let degree = polys.iter().map(|f| f.max_x_degree()).max().unwrap_or(0);
    let count = (degree as u64 + 1)
        .checked_pow(m as u32)
        .filter(|&c| c <= VERONESE_INDEX_CAP)
        .ok_or(Error::Cap("monomial coordinate count exceeds cap".into()))?;
    let _ = count;
    let mut forms = Vec::with_capacity(polys.len());
    for f in polys {
        let mut form: std::collections::BTreeMap<Vec<u32>, DensePoly> = Default::default();
        for (tuple, c) in f.terms() {
            let idx = tuple[1..].to_vec();
            let add = DensePoly::monomial(&field, c, tuple[0] as usize);
            let entry = form.entry(idx).or_insert_with(|| DensePoly::zero(&field));
            *entry = entry.add(&add)?;
        }
        form.retain(|_, v| !v.is_zero());
        forms.push(form);
    }
    Ok(Veronese { field, num_vars: m, degree, forms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(field: &Field, num_vars: usize, terms: &[(&[u32], i64)]) -> MultiPoly {
        let list: Vec<(i64, Vec<u32>)> =
            terms.iter().map(|&(t, c)| (c, t.to_vec())).collect();
        MultiPoly::from_int_terms(field, num_vars, &list).unwrap()
    }

    /// X1*X2 - T over the given field.
    fn product_surface(field: &Field) -> MultiPoly {
        poly(field, 2, &[(&[0, 1, 1], 1), (&[1, 0, 0], -1)])
    }

    #[test]
    fn parameters_for_product_surface() {
        let f2 = Field::prime(2).unwrap();
        let f = product_surface(&f2);
        let t = DensePoly::monomial(&f2, f2.one(), 1);
        let params = choose_parameters(&[f], &[t]).unwrap();
        // D = 1, M = 2: threshold 8, least coprime-to-2 value above is 9.
        assert_eq!(params.b0, 9);
        assert_eq!(params.a0, 1);
    }

    #[test]
    fn parameters_require_t_in_forbidden_set() {
        let f3 = Field::prime(3).unwrap();
        let f = poly(&f3, 1, &[(&[0, 1], 1), (&[1, 0], -1)]);
        assert!(matches!(choose_parameters(&[f], &[]), Err(Error::Invalid(_))));
    }

    #[test]
    fn parameters_min_b0_odd_characteristic() {
        let f3 = Field::prime(3).unwrap();
        // D = 1, M = 1: threshold 4, so b0 = 5 (coprime to 3).
        let f = poly(&f3, 1, &[(&[0, 1], 1), (&[1, 0], -1)]);
        let t = DensePoly::monomial(&f3, f3.one(), 1);
        let params = choose_parameters(&[f], &[t]).unwrap();
        assert_eq!(params.b0, 5);
    }

    #[test]
    fn pair_system_examples() {
        let f2 = Field::prime(2).unwrap();
        let f = product_surface(&f2);
        // Canonical term order puts (0,1,1) before (1,0,0).
        let choice =
            PartitionChoice { per_poly: vec![ZeroSumPartition { blocks: vec![vec![0, 1]] }] };
        let sys = system_from_partitions(&[f], &choice).unwrap();
        assert_eq!(sys.a.row(0), &[1, 1]);
        assert_eq!(sys.b, vec![1]);

        // X1 - X2 forces E1 = E2; canonical term order lists the X2 tuple
        // (0,0,1) first, so the pair row reads E2 - E1 = 0.
        let g = poly(&f2, 2, &[(&[0, 1, 0], 1), (&[0, 0, 1], -1)]);
        let sys2 = system_from_partitions(&[g], &choice).unwrap();
        assert_eq!(sys2.a.row(0), &[-1, 1]);
        assert_eq!(sys2.b, vec![0]);
    }

    #[test]
    fn lift_fixed_point_when_exact() {
        let f2 = Field::prime(2).unwrap();
        let f = product_surface(&f2);
        let params = GabParams::new(&f2, 1, 9).unwrap();
        match lift_exponents(&[f], &[4, -3], 2, &params).unwrap() {
            LiftOutcome::Lifted(l) => {
                // 4 + (-3) = 1 already: the lift can keep the point.
                assert_eq!(l.exponents, vec![4, -3]);
            }
            other => panic!("expected lift, got {other:?}"),
        }
    }

    #[test]
    fn lift_worked_example() {
        // X1 + X2 - T - T^2 over F3 at e = (7, 8), level 6, b0 = 1:
        // residues mod 6 pair X1 with T and X2 with T^2, the pair system is
        // E1 = 1, E2 = 2, and n0 = 2, so the lift promises congruence mod 3.
        let f3 = Field::prime(3).unwrap();
        let f = poly(
            &f3,
            2,
            &[(&[0, 1, 0], 1), (&[0, 0, 1], 1), (&[1, 0, 0], -1), (&[2, 0, 0], -1)],
        );
        let params = GabParams::new(&f3, 1, 1).unwrap();
        match lift_exponents(std::slice::from_ref(&f), &[7, 8], 6, &params).unwrap() {
            LiftOutcome::Lifted(l) => {
                assert_eq!(l.exponents, vec![1, 2]);
                assert_eq!(l.base, 2);
                assert_eq!(l.promised_modulus, 3);
                assert!(f.specialize(&l.exponents).unwrap().is_zero());
            }
            other => panic!("expected lift, got {other:?}"),
        }
    }

    #[test]
    fn lift_rejects_non_witness() {
        let f2 = Field::prime(2).unwrap();
        let f = product_surface(&f2);
        let params = GabParams::new(&f2, 1, 9).unwrap();
        // e1 + e2 = 2, not congruent to 1 mod 9: the window cannot divide.
        assert!(matches!(
            lift_exponents(&[f], &[1, 1], 1, &params),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn solve_product_surface() {
        let f2 = Field::prime(2).unwrap();
        let fam = solve_all_monomial_points(&[product_surface(&f2)]).unwrap();
        assert_eq!(fam.cosets.len(), 1);
        let c = &fam.cosets[0];
        assert_eq!(c.basis.len(), 1);
        // E1 + E2 = 1: members include (1,0), (0,1), (5,-4).
        assert!(fam.contains(&[1, 0]).unwrap());
        assert!(fam.contains(&[0, 1]).unwrap());
        assert!(fam.contains(&[5, -4]).unwrap());
        assert!(!fam.contains(&[1, 1]).unwrap());
    }

    #[test]
    fn solve_two_point_instance() {
        // X1 + X2 - T - T^2 over F3: exactly (1,2) and (2,1).
        let f3 = Field::prime(3).unwrap();
        let f = poly(
            &f3,
            2,
            &[(&[0, 1, 0], 1), (&[0, 0, 1], 1), (&[1, 0, 0], -1), (&[2, 0, 0], -1)],
        );
        let fam = solve_all_monomial_points(&[f]).unwrap();
        assert!(fam.contains(&[1, 2]).unwrap());
        assert!(fam.contains(&[2, 1]).unwrap());
        assert!(!fam.contains(&[1, 1]).unwrap());
        assert!(!fam.contains(&[2, 2]).unwrap());
        // Both cosets are points: no free directions.
        assert!(fam.cosets.iter().all(|c| c.basis.is_empty()));
        assert_eq!(fam.cosets.len(), 2);
    }

    #[test]
    fn solve_certifies_empty_instance() {
        // X1 + X2 + 1 over F2: no pair of monomials sums to 1; the lone
        // witnessless coefficient multiset has no zero-sum partition.
        let f2 = Field::prime(2).unwrap();
        let f = poly(&f2, 2, &[(&[0, 1, 0], 1), (&[0, 0, 1], 1), (&[0, 0, 0], 1)]);
        let fam = solve_all_monomial_points(&[f]).unwrap();
        assert!(fam.is_empty());
    }

    #[test]
    fn solve_matches_brute_force_box() {
        let f3 = Field::prime(3).unwrap();
        let systems: Vec<Vec<MultiPoly>> = vec![
            vec![product_surface(&f3)],
            vec![poly(
                &f3,
                2,
                &[(&[0, 1, 0], 1), (&[0, 0, 1], 1), (&[1, 0, 0], -1), (&[2, 0, 0], -1)],
            )],
            // X1^2 - T^2: E = 1 exactly.
            vec![poly(&f3, 1, &[(&[0, 2], 1), (&[2, 0], -1)])],
            // Two equations: X1*X2 = T and X1 = X2 (no integer solution:
            // 2E = 1).
            vec![
                product_surface(&f3),
                poly(&f3, 2, &[(&[0, 1, 0], 1), (&[0, 0, 1], -1)]),
            ],
        ];
        for polys in &systems {
            let fam = solve_all_monomial_points(polys).unwrap();
            let m = polys[0].num_vars();
            let bound = 6i64;
            let width = (2 * bound + 1) as usize;
            for code in 0..width.pow(m as u32) {
                let mut c = code;
                let mut e = Vec::with_capacity(m);
                for _ in 0..m {
                    e.push((c % width) as i64 - bound);
                    c /= width;
                }
                let vanish = polys
                    .iter()
                    .all(|f| f.specialize(&e).unwrap().is_zero());
                assert_eq!(
                    fam.contains(&e).unwrap(),
                    vanish,
                    "mismatch at {e:?} for system {polys:?}"
                );
            }
        }
    }

    #[test]
    fn veronese_product_surface_form() {
        let f2 = Field::prime(2).unwrap();
        let v = veronese_linearize(&[product_surface(&f2)]).unwrap();
        assert_eq!(v.degree, 1);
        // One form: Y_(1,1) - T * Y_(0,0).
        assert_eq!(v.forms.len(), 1);
        let form = &v.forms[0];
        assert_eq!(form.len(), 2);
        assert_eq!(form[&vec![1, 1]], DensePoly::from_ints(&f2, &[1]));
        assert_eq!(form[&vec![0, 0]], DensePoly::from_ints(&f2, &[0, 1]));
    }

    #[test]
    fn veronese_membership_round_trip() {
        use rand::{Rng, SeedableRng};
        let f3 = Field::prime(3).unwrap();
        let polys = vec![product_surface(&f3)];
        let v = veronese_linearize(&polys).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let e = vec![rng.gen_range(-8..=8), rng.gen_range(-8..=8)];
            let direct = polys.iter().all(|f| f.specialize(&e).unwrap().is_zero());
            assert_eq!(v.vanishes_at(&e).unwrap(), direct, "at {e:?}");
        }
        // The x = (T^2, T^-1) example: Y_(1,1) has exponent 1, the form
        // T*Y_(0,0) cancels it.
        assert!(v.vanishes_at(&[2, -1]).unwrap());
    }

    #[test]
    fn lift_recovers_perturbed_solutions() {
        use rand::{Rng, SeedableRng};
        let f2 = Field::prime(2).unwrap();
        let polys = vec![product_surface(&f2)];
        let t = DensePoly::monomial(&f2, f2.one(), 1);
        let params = choose_parameters(&polys, &[t]).unwrap();
        let family = params.level_family();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let exact = [3i64, -2];
        for _ in 0..50 {
            // Walk the level family until the lift accepts the level.
            let mut done = false;
            for &level_i in family.values(4).iter() {
                let level = level_i as u64;
                let w = level as i64 * params.b0 as i64;
                let e: Vec<i64> =
                    exact.iter().map(|&x| x + w * rng.gen_range(-2..=2)).collect();
                match lift_exponents(&polys, &e, level, &params) {
                    Ok(LiftOutcome::Lifted(l)) => {
                        assert!(polys
                            .iter()
                            .all(|f| f.specialize(&l.exponents).unwrap().is_zero()));
                        for (a, b) in l.exponents.iter().zip(&e) {
                            assert_eq!((a - b).rem_euclid(l.promised_modulus as i64), 0);
                        }
                        done = true;
                        break;
                    }
                    Ok(LiftOutcome::Unsolvable { .. }) => {
                        panic!("product surface lift reported unsolvable")
                    }
                    Err(Error::Hypothesis(_)) => continue,
                    Err(other) => panic!("{other}"),
                }
            }
            assert!(done, "no admissible level in the family prefix");
        }
    }
}
