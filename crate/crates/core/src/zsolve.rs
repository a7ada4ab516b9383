//! Integer linear systems A·E = b: normal forms with explicit transformation
//! records, congruence-to-exact lifting, and complete solution sets.
//!
//! [`normalize`] drives an augmented system to a quasi-diagonal shape using
//! only solution-set-preserving moves: row swaps, swaps among the variable
//! columns, scaling a whole row (equation) by a nonzero integer, and adding
//! an integer multiple of one row to another. The moves are recorded, not
//! inverted: scaling is not unimodular, so the records are the audit trail.
//!
//! [`lift`] turns a vector satisfying the system modulo n into an exact
//! solution congruent to it modulo n/n0, where n0 absorbs the pivot product.
//! [`solve`] computes the full integer solution set as a lattice coset (or a
//! certified emptiness witness) by a two-sided diagonalization.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMat {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<IntMat> {
        if data.len() != rows * cols {
            return Err(Error::Invalid(format!(
                "matrix data length {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        Ok(IntMat { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<IntMat> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Invalid("ragged matrix rows".into()));
        }
        Ok(IntMat { rows: r, cols: c, data: rows.concat() })
    }

    pub fn zeros(rows: usize, cols: usize) -> IntMat {
        IntMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> IntMat {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Matrix-vector product with overflow checks.
    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.cols {
            return Err(Error::Invalid("vector length does not match matrix columns".into()));
        }
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut acc: i128 = 0;
            for c in 0..self.cols {
                acc += self.get(r, c) as i128 * v[c] as i128;
            }
            out.push(i64::try_from(acc).map_err(|_| Error::Overflow("matrix product"))?);
        }
        Ok(out)
    }
}

/// An augmented system A·E = b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugSystem {
    pub a: IntMat,
    pub b: Vec<i64>,
}

impl AugSystem {
    pub fn new(a: IntMat, b: Vec<i64>) -> Result<AugSystem> {
        if b.len() != a.rows() {
            return Err(Error::Invalid("right-hand side length does not match rows".into()));
        }
        Ok(AugSystem { a, b })
    }

    pub fn num_eqs(&self) -> usize {
        self.a.rows()
    }

    pub fn num_vars(&self) -> usize {
        self.a.cols()
    }

    /// Residuals b - A·e, in wide arithmetic.
    pub fn residuals(&self, e: &[i64]) -> Result<Vec<i128>> {
        if e.len() != self.num_vars() {
            return Err(Error::Invalid("exponent vector length mismatch".into()));
        }
        let mut out = Vec::with_capacity(self.num_eqs());
        for r in 0..self.num_eqs() {
            let mut acc: i128 = self.b[r] as i128;
            for c in 0..self.num_vars() {
                acc -= self.a.get(r, c) as i128 * e[c] as i128;
            }
            out.push(acc);
        }
        Ok(out)
    }

    pub fn is_solution(&self, e: &[i64]) -> Result<bool> {
        Ok(self.residuals(e)?.iter().all(|&r| r == 0))
    }
}

/// One solution-set-preserving move on an augmented system.
///
/// `AddRowMultiple` is the composition scale(src, -1) / add src to dst |k|
/// times / scale(src, -1) of the primitive moves, recorded in folded form so
/// replays stay exact without entry blowup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElemOp {
    SwapRows(usize, usize),
    /// Swap two variable columns (never the right-hand side).
    SwapCols(usize, usize),
    /// Scale an entire equation, including its right-hand side, by a nonzero
    /// integer.
    ScaleRow(usize, i64),
    /// dst += k * src, right-hand side included.
    AddRowMultiple { src: usize, dst: usize, k: i64 },
}

fn checked_mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow("normal form entry"))
}

fn checked_add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("normal form entry"))
}

/// Apply one move to (A | b) in place.
pub fn apply_op(a: &mut IntMat, b: &mut [i64], op: ElemOp) -> Result<()> {
    match op {
        ElemOp::SwapRows(r1, r2) => {
            for c in 0..a.cols() {
                let (x, y) = (a.get(r1, c), a.get(r2, c));
                a.set(r1, c, y);
                a.set(r2, c, x);
            }
            b.swap(r1, r2);
        }
        ElemOp::SwapCols(c1, c2) => {
            for r in 0..a.rows() {
                let (x, y) = (a.get(r, c1), a.get(r, c2));
                a.set(r, c1, y);
                a.set(r, c2, x);
            }
        }
        ElemOp::ScaleRow(r, k) => {
            if k == 0 {
                return Err(Error::Invalid("row scaling by zero".into()));
            }
            for c in 0..a.cols() {
                a.set(r, c, checked_mul(a.get(r, c), k)?);
            }
            b[r] = checked_mul(b[r], k)?;
        }
        ElemOp::AddRowMultiple { src, dst, k } => {
            if src == dst {
                return Err(Error::Invalid("row added to itself".into()));
            }
            for c in 0..a.cols() {
                let v = checked_add(a.get(dst, c), checked_mul(a.get(src, c), k)?)?;
                a.set(dst, c, v);
            }
            b[dst] = checked_add(b[dst], checked_mul(b[src], k)?)?;
        }
    }
    Ok(())
}

/// Quasi-diagonal normal form of an augmented system.
///
/// In the transformed system, the first `rank` columns are diagonal with
/// nonzero pivots, rows beyond `rank` are zero on the matrix side, and
/// `col_perm[i]` names the original variable sitting at normalized column i.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub mat: IntMat,
    pub rhs: Vec<i64>,
    pub rank: usize,
    pub ops: Vec<ElemOp>,
    pub col_perm: Vec<usize>,
}

impl NormalForm {
    pub fn pivots(&self) -> Vec<i64> {
        (0..self.rank).map(|i| self.mat.get(i, i)).collect()
    }

    /// Product of pivot absolute values (1 for rank zero).
    pub fn pivot_product(&self) -> Result<i128> {
        let mut acc: i128 = 1;
        for p in self.pivots() {
            acc = acc
                .checked_mul((p as i128).abs())
                .ok_or(Error::Overflow("pivot product"))?;
        }
        Ok(acc)
    }
}

/// Drive (A | b) to quasi-diagonal form, recording every move.
pub fn normalize(sys: &AugSystem) -> Result<NormalForm> {
    let mut a = sys.a.clone();
    let mut b = sys.b.to_vec();
    let rows = a.rows();
    let cols = a.cols();
    let mut ops: Vec<ElemOp> = Vec::new();
    let mut col_perm: Vec<usize> = (0..cols).collect();

    let mut step = |a: &mut IntMat, b: &mut Vec<i64>, op: ElemOp| -> Result<()> {
        apply_op(a, b, op)?;
        if let ElemOp::SwapCols(c1, c2) = op {
            col_perm.swap(c1, c2);
        }
        ops.push(op);
        Ok(())
    };

    // Phase 1: column echelon on the pivot block, Euclid below each pivot.
    let mut rank = 0;
    while rank < rows && rank < cols {
        // Deterministic pivot choice: smallest absolute nonzero value in the
        // unprocessed block, ties broken by (row, column).
        let mut pivot: Option<(usize, usize, i64)> = None;
        for r in rank..rows {
            for c in rank..cols {
                let v = a.get(r, c);
                if v != 0 && pivot.map_or(true, |(_, _, pv)| v.abs() < pv.abs()) {
                    pivot = Some((r, c, v));
                }
            }
        }
        let Some((pr, pc, _)) = pivot else { break };
        if pr != rank {
            step(&mut a, &mut b, ElemOp::SwapRows(pr, rank))?;
        }
        if pc != rank {
            step(&mut a, &mut b, ElemOp::SwapCols(pc, rank))?;
        }
        // Euclidean elimination below the pivot.
        loop {
            let mut progressed = false;
            for r in rank + 1..rows {
                let v = a.get(r, rank);
                if v == 0 {
                    continue;
                }
                let p = a.get(rank, rank);
                let q = v / p;
                if q != 0 {
                    step(&mut a, &mut b, ElemOp::AddRowMultiple { src: rank, dst: r, k: -q })?;
                }
                if a.get(r, rank) != 0 {
                    // Remainder is smaller than the pivot: promote it.
                    step(&mut a, &mut b, ElemOp::SwapRows(rank, r))?;
                    progressed = true;
                }
            }
            if !progressed {
                break;
            }
        }
        rank += 1;
    }

    // Phase 2: clear entries above each pivot. Row j is first scaled so the
    // pivot divides the target entry; scaling a whole equation by a nonzero
    // integer preserves its solutions.
    for i in (0..rank).rev() {
        for j in 0..i {
            let target = a.get(j, i);
            if target == 0 {
                continue;
            }
            let p = a.get(i, i);
            let g = gcd_i64(p, target);
            let f = p / g;
            if f.abs() != 1 {
                step(&mut a, &mut b, ElemOp::ScaleRow(j, f))?;
            }
            let k = a.get(j, i) / p;
            step(&mut a, &mut b, ElemOp::AddRowMultiple { src: i, dst: j, k: -k })?;
            debug_assert_eq!(a.get(j, i), 0);
        }
    }

    Ok(NormalForm { mat: a, rhs: b, rank, ops, col_perm })
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Modulus families over which lifting levels range. Values are generated in
/// increasing order; the factorial family prod_{i=1}^{start+n} i (n >= 1) is
/// the default because every integer divides all sufficiently late elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModulusFamily {
    FactorialProducts { start: u64 },
    Explicit(Vec<i128>),
}

impl ModulusFamily {
    /// First `count` values, sorted ascending, stopping early on overflow.
    pub fn values(&self, count: usize) -> Vec<i128> {
        match self {
            ModulusFamily::FactorialProducts { start } => {
                let mut out = Vec::with_capacity(count);
                let mut v: i128 = 1;
                for i in 1..=*start {
                    match v.checked_mul(i as i128) {
                        Some(n) => v = n,
                        None => return out,
                    }
                }
                let mut i = *start;
                while out.len() < count {
                    i += 1;
                    match v.checked_mul(i as i128) {
                        Some(n) => v = n,
                        None => break,
                    }
                    out.push(v);
                }
                out
            }
            ModulusFamily::Explicit(list) => {
                let mut out: Vec<i128> = list.iter().copied().filter(|&v| v > 0).collect();
                out.sort_unstable();
                out.dedup();
                out.truncate(count);
                out
            }
        }
    }

    pub fn contains(&self, v: i128, cutoff: usize) -> bool {
        self.values(cutoff).contains(&v)
    }
}

/// Default search depth into a modulus family.
pub const DEFAULT_MODULUS_CUTOFF: usize = 20;

/// Least family element divisible by the normal form's pivot product.
pub fn base_modulus(nf: &NormalForm, family: &ModulusFamily, cutoff: usize) -> Result<i128> {
    let product = nf.pivot_product()?;
    for v in family.values(cutoff) {
        if v % product == 0 {
            return Ok(v);
        }
    }
    Err(Error::Cutoff(format!(
        "no element among the first {cutoff} moduli is divisible by the pivot product {product}"
    )))
}

/// Lift a mod-n solution of A·E = b to an exact one, congruent mod n/n0.
///
/// Requires n0 >= 1, n0 | n, every pivot of the normal form dividing n0, and
/// n dividing every residual b - A·e. Free positions keep their input values;
/// pivot positions are solved exactly. A zero row with nonzero right-hand
/// side certifies that no exact solution exists at all.
pub fn lift(sys: &AugSystem, e: &[i64], n: i128, n0: i128) -> Result<Vec<i64>> {
    if e.len() != sys.num_vars() {
        return Err(Error::Invalid("exponent vector length mismatch".into()));
    }
    if n0 < 1 || n < 1 || n % n0 != 0 {
        return Err(Error::Invalid(format!("invalid modulus pair n = {n}, n0 = {n0}")));
    }
    for (j, r) in sys.residuals(e)?.iter().enumerate() {
        if r % n != 0 {
            return Err(Error::Hypothesis(format!(
                "residual {r} of equation {j} is not divisible by n = {n}"
            )));
        }
    }
    let nf = normalize(sys)?;
    for p in nf.pivots() {
        if n0 % (p as i128).abs() != 0 {
            return Err(Error::Invalid(format!(
                "n0 = {n0} is not divisible by pivot {p}; use base_modulus"
            )));
        }
    }
    for j in nf.rank..sys.num_eqs() {
        if nf.rhs[j] != 0 {
            return Err(Error::Inconsistent(format!(
                "zero row {j} has right-hand side {}; the system has no exact solution",
                nf.rhs[j]
            )));
        }
    }
    let mut out = e.to_vec();
    for i in 0..nf.rank {
        let mut acc: i128 = nf.rhs[i] as i128;
        for k in nf.rank..sys.num_vars() {
            acc -= nf.mat.get(i, k) as i128 * e[nf.col_perm[k]] as i128;
        }
        let p = nf.mat.get(i, i) as i128;
        if acc % p != 0 {
            // Unreachable when the congruence hypothesis holds: the pivot
            // divides n, which divides the transported residual.
            return Err(Error::Inconsistent(format!(
                "pivot {p} does not divide its target {acc} at row {i}"
            )));
        }
        out[nf.col_perm[i]] = i64::try_from(acc / p).map_err(|_| Error::Overflow("lifted value"))?;
    }
    debug_assert!(sys.is_solution(&out)?);
    debug_assert!(out
        .iter()
        .zip(e)
        .all(|(&a, &b)| (a as i128 - b as i128) % (n / n0) == 0));
    Ok(out)
}

/// The set particular + Z-span(basis) in Z^M.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeCoset {
    pub particular: Vec<i64>,
    pub basis: Vec<Vec<i64>>,
}

/// Why a system has no integer solutions, in terms of its diagonalization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmptyCertificate {
    pub row: usize,
    /// Some(d): the pivot d fails to divide `value`. None: a zero row with
    /// nonzero transformed right-hand side `value`.
    pub pivot: Option<i64>,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Empty(EmptyCertificate),
    Solutions(LatticeCoset),
}

/// Complete integer solution set of A·E = b via two-sided diagonalization
/// U·A·V = D with unimodular U, V.
pub fn solve(sys: &AugSystem) -> Result<SolveOutcome> {
    let rows = sys.num_eqs();
    let cols = sys.num_vars();
    let mut a = sys.a.clone();
    let mut u = IntMat::identity(rows);
    let mut v = IntMat::identity(cols);

    let swap_rows = |a: &mut IntMat, u: &mut IntMat, r1: usize, r2: usize| {
        for c in 0..a.cols() {
            let (x, y) = (a.get(r1, c), a.get(r2, c));
            a.set(r1, c, y);
            a.set(r2, c, x);
        }
        for c in 0..u.cols() {
            let (x, y) = (u.get(r1, c), u.get(r2, c));
            u.set(r1, c, y);
            u.set(r2, c, x);
        }
    };
    let swap_cols = |a: &mut IntMat, v: &mut IntMat, c1: usize, c2: usize| {
        for r in 0..a.rows() {
            let (x, y) = (a.get(r, c1), a.get(r, c2));
            a.set(r, c1, y);
            a.set(r, c2, x);
        }
        for r in 0..v.rows() {
            let (x, y) = (v.get(r, c1), v.get(r, c2));
            v.set(r, c1, y);
            v.set(r, c2, x);
        }
    };
    let add_row = |a: &mut IntMat, u: &mut IntMat, src: usize, dst: usize, k: i64| -> Result<()> {
        for c in 0..a.cols() {
            let val = checked_add(a.get(dst, c), checked_mul(a.get(src, c), k)?)?;
            a.set(dst, c, val);
        }
        for c in 0..u.cols() {
            let val = checked_add(u.get(dst, c), checked_mul(u.get(src, c), k)?)?;
            u.set(dst, c, val);
        }
        Ok(())
    };
    let add_col = |a: &mut IntMat, v: &mut IntMat, src: usize, dst: usize, k: i64| -> Result<()> {
        for r in 0..a.rows() {
            let val = checked_add(a.get(r, dst), checked_mul(a.get(r, src), k)?)?;
            a.set(r, dst, val);
        }
        for r in 0..v.rows() {
            let val = checked_add(v.get(r, dst), checked_mul(v.get(r, src), k)?)?;
            v.set(r, dst, val);
        }
        Ok(())
    };

    let mut t = 0;
    'outer: while t < rows && t < cols {
        // Smallest absolute nonzero entry of the unprocessed block.
        let mut pivot: Option<(usize, usize, i64)> = None;
        for r in t..rows {
            for c in t..cols {
                let val = a.get(r, c);
                if val != 0 && pivot.map_or(true, |(_, _, pv)| val.abs() < pv.abs()) {
                    pivot = Some((r, c, val));
                }
            }
        }
        let Some((pr, pc, _)) = pivot else { break 'outer };
        if pr != t {
            swap_rows(&mut a, &mut u, pr, t);
        }
        if pc != t {
            swap_cols(&mut a, &mut v, pc, t);
        }
        loop {
            let mut dirty = false;
            for r in t + 1..rows {
                let val = a.get(r, t);
                if val != 0 {
                    let q = val / a.get(t, t);
                    if q != 0 {
                        add_row(&mut a, &mut u, t, r, -q)?;
                    }
                    if a.get(r, t) != 0 {
                        swap_rows(&mut a, &mut u, t, r);
                        dirty = true;
                    }
                }
            }
            for c in t + 1..cols {
                let val = a.get(t, c);
                if val != 0 {
                    let q = val / a.get(t, t);
                    if q != 0 {
                        add_col(&mut a, &mut v, t, c, -q)?;
                    }
                    if a.get(t, c) != 0 {
                        swap_cols(&mut a, &mut v, t, c);
                        dirty = true;
                    }
                }
            }
            if !dirty && (t + 1..rows).all(|r| a.get(r, t) == 0) {
                break;
            }
        }
        t += 1;
    }
    let rank = t;

    // Transformed right-hand side U·b.
    let ub = u.mul_vec(&sys.b)?;
    let mut y = vec![0i64; cols];
    for i in 0..rank {
        let d = a.get(i, i);
        if ub[i] % d != 0 {
            return Ok(SolveOutcome::Empty(EmptyCertificate {
                row: i,
                pivot: Some(d),
                value: ub[i],
            }));
        }
        y[i] = ub[i] / d;
    }
    for (j, &val) in ub.iter().enumerate().skip(rank) {
        if val != 0 {
            return Ok(SolveOutcome::Empty(EmptyCertificate { row: j, pivot: None, value: val }));
        }
    }
    let particular = {
        let mut out = vec![0i64; cols];
        for r in 0..cols {
            let mut acc: i128 = 0;
            for c in 0..cols {
                acc += v.get(r, c) as i128 * y[c] as i128;
            }
            out[r] = i64::try_from(acc).map_err(|_| Error::Overflow("particular solution"))?;
        }
        out
    };
    let basis: Vec<Vec<i64>> =
        (rank..cols).map(|c| (0..cols).map(|r| v.get(r, c)).collect()).collect();
    debug_assert!(sys.is_solution(&particular)?);
    let mut coset = LatticeCoset { particular, basis };
    coset.canonicalize();
    Ok(SolveOutcome::Solutions(coset))
}

impl LatticeCoset {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Membership test: is `point` in the coset?
    pub fn contains(&self, point: &[i64]) -> Result<bool> {
        if point.len() != self.particular.len() {
            return Err(Error::Invalid("point dimension mismatch".into()));
        }
        if self.basis.is_empty() {
            return Ok(point == self.particular);
        }
        // Solve basis^T · t = point - particular over the integers.
        let m = self.particular.len();
        let mut mat = IntMat::zeros(m, self.basis.len());
        for (j, vec) in self.basis.iter().enumerate() {
            for i in 0..m {
                mat.set(i, j, vec[i]);
            }
        }
        let rhs: Vec<i64> = point
            .iter()
            .zip(&self.particular)
            .map(|(&p, &q)| p.checked_sub(q).ok_or(Error::Overflow("membership difference")))
            .collect::<Result<_>>()?;
        match solve(&AugSystem::new(mat, rhs)?)? {
            SolveOutcome::Empty(_) => Ok(false),
            SolveOutcome::Solutions(_) => Ok(true),
        }
    }

    /// Canonical form: basis rows in row-style echelon with positive pivots
    /// and reduced entries above, particular reduced modulo the lattice.
    /// Equal cosets become structurally equal.
    pub fn canonicalize(&mut self) {
        let m = self.particular.len();
        let mut rows: Vec<Vec<i64>> = self.basis.clone();
        rows.retain(|r| r.iter().any(|&x| x != 0));
        let mut pivot_rows: Vec<(usize, usize)> = Vec::new(); // (row index, pivot col)
        let mut top = 0usize;
        for col in 0..m {
            // Euclid among rows >= top on this column.
            loop {
                let mut best: Option<(usize, i64)> = None;
                for (i, row) in rows.iter().enumerate().skip(top) {
                    let v = row[col];
                    if v != 0 && best.map_or(true, |(_, bv)| v.abs() < bv.abs()) {
                        best = Some((i, v));
                    }
                }
                let Some((bi, bv)) = best else { break };
                rows.swap(top, bi);
                let mut done = true;
                for i in top + 1..rows.len() {
                    let q = rows[i][col] / bv;
                    if q != 0 {
                        for k in 0..m {
                            rows[i][k] -= q * rows[top][k];
                        }
                    }
                    if rows[i][col] != 0 {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if top < rows.len() && rows[top][col] != 0 {
                if rows[top][col] < 0 {
                    for k in 0..m {
                        rows[top][k] = -rows[top][k];
                    }
                }
                pivot_rows.push((top, col));
                top += 1;
            }
        }
        rows.truncate(top);
        // Reduce entries above each pivot into [0, pivot).
        for idx in (0..pivot_rows.len()).rev() {
            let (r, col) = pivot_rows[idx];
            let p = rows[r][col];
            for j in 0..r {
                let q = rows[j][col].div_euclid(p);
                if q != 0 {
                    for k in 0..m {
                        rows[j][k] -= q * rows[r][k];
                    }
                }
            }
            // Reduce the particular point as well.
            let q = self.particular[col].div_euclid(p);
            if q != 0 {
                for k in 0..m {
                    self.particular[k] -= q * rows[r][k];
                }
            }
        }
        self.basis = rows;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(rows: &[Vec<i64>], b: &[i64]) -> AugSystem {
        AugSystem::new(IntMat::from_rows(rows).unwrap(), b.to_vec()).unwrap()
    }

    /// Brute-force solutions within a symmetric box.
    fn brute_box(s: &AugSystem, bound: i64) -> Vec<Vec<i64>> {
        let m = s.num_vars();
        let mut out = Vec::new();
        let width = (2 * bound + 1) as usize;
        let total = width.pow(m as u32);
        for code in 0..total {
            let mut c = code;
            let mut e = Vec::with_capacity(m);
            for _ in 0..m {
                e.push((c % width) as i64 - bound);
                c /= width;
            }
            if s.is_solution(&e).unwrap() {
                out.push(e);
            }
        }
        out
    }

    #[test]
    fn normal_form_structure_and_replay() {
        let s = sys(&[vec![2, 4], vec![1, 2]], &[6, 3]);
        let nf = normalize(&s).unwrap();
        assert_eq!(nf.rank, 1);
        // Zero row must have zero right-hand side here (consistent system).
        assert_eq!(nf.mat.get(1, 0), 0);
        assert_eq!(nf.mat.get(1, 1), 0);
        assert_eq!(nf.rhs[1], 0);
        // Replaying the records over the input reproduces the normal form.
        let mut a = s.a.clone();
        let mut b = s.b.clone();
        for &op in &nf.ops {
            apply_op(&mut a, &mut b, op).unwrap();
        }
        assert_eq!(a, nf.mat);
        assert_eq!(b, nf.rhs);
    }

    #[test]
    fn normalization_preserves_box_solutions() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let j = rng.gen_range(1..=3);
            let m = rng.gen_range(1..=3);
            let rows: Vec<Vec<i64>> =
                (0..j).map(|_| (0..m).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            let b: Vec<i64> = (0..j).map(|_| rng.gen_range(-3..=3)).collect();
            let s = sys(&rows, &b);
            let nf = normalize(&s).unwrap();
            // Structure: diagonal pivot block, zero rows below.
            for i in 0..nf.rank {
                assert_ne!(nf.mat.get(i, i), 0);
                for r in 0..s.num_eqs() {
                    if r != i {
                        assert_eq!(nf.mat.get(r, i), 0, "column {i} not diagonal");
                    }
                }
            }
            for r in nf.rank..s.num_eqs() {
                for c in 0..m {
                    assert_eq!(nf.mat.get(r, c), 0);
                }
            }
            // Solution sets agree inside a box, after unpermuting variables.
            let transformed = AugSystem::new(nf.mat.clone(), nf.rhs.clone()).unwrap();
            let mut expect = brute_box(&s, 3);
            let found: Vec<Vec<i64>> = brute_box(&transformed, 3)
                .into_iter()
                .map(|e| {
                    let mut orig = vec![0i64; m];
                    for (i, &var) in nf.col_perm.iter().enumerate() {
                        orig[var] = e[i];
                    }
                    orig
                })
                .collect();
            let mut found = found;
            expect.sort();
            found.sort();
            assert_eq!(expect, found);
        }
    }

    #[test]
    fn base_modulus_examples() {
        // Pivots (2, 3): product 6; first factorial product divisible is 6.
        let s = sys(&[vec![2, 0], vec![0, 3]], &[0, 0]);
        let nf = normalize(&s).unwrap();
        assert_eq!(nf.pivot_product().unwrap(), 6);
        let fam = ModulusFamily::FactorialProducts { start: 1 };
        assert_eq!(base_modulus(&nf, &fam, 20).unwrap(), 6);
        // Unit pivots: the first element works.
        let s2 = sys(&[vec![1, 0], vec![0, 1]], &[1, 2]);
        let nf2 = normalize(&s2).unwrap();
        assert_eq!(base_modulus(&nf2, &fam, 20).unwrap(), 2);
        // Explicit family.
        let fam2 = ModulusFamily::Explicit(vec![5, 12, 7]);
        assert_eq!(base_modulus(&nf, &fam2, 20).unwrap(), 12);
        let fam3 = ModulusFamily::Explicit(vec![5, 7]);
        assert!(base_modulus(&nf, &fam3, 20).is_err());
    }

    #[test]
    fn factorial_family_values() {
        let fam = ModulusFamily::FactorialProducts { start: 1 };
        assert_eq!(fam.values(4), vec![2, 6, 24, 120]);
        let fam3 = ModulusFamily::FactorialProducts { start: 3 };
        assert_eq!(fam3.values(3), vec![24, 120, 720]);
        assert!(fam.contains(24, 20));
        assert!(!fam.contains(25, 20));
    }

    #[test]
    fn lift_single_pivot() {
        // 2E = 6, e = 7, n = 8, n0 = 2: residual 6 - 14 = -8; lift to 3.
        let s = sys(&[vec![2]], &[6]);
        let e = lift(&s, &[7], 8, 2).unwrap();
        assert_eq!(e, vec![3]);
        // Congruence: 7 - 3 = 4 is divisible by n/n0 = 4.
    }

    #[test]
    fn lift_keeps_free_positions() {
        // E1 + E2 = 1 with e = (5, -4) already exact: unchanged.
        let s = sys(&[vec![1, 1]], &[1]);
        assert_eq!(lift(&s, &[5, -4], 10, 1).unwrap(), vec![5, -4]);
    }

    #[test]
    fn lift_rejects_bad_hypotheses() {
        let s = sys(&[vec![2]], &[6]);
        // Residual -7 not divisible by 8.
        assert!(matches!(lift(&s, &[13, ], 8, 2), Err(Error::Hypothesis(_))));
        // n0 must absorb the pivot.
        assert!(matches!(lift(&s, &[7], 8, 1), Err(Error::Invalid(_))));
        // Zero row with nonzero rhs: no exact solution.
        let s2 = sys(&[vec![1], vec![1]], &[2, 8]);
        assert!(matches!(lift(&s2, &[2], 6, 1), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn lift_randomized_roundtrip() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let fam = ModulusFamily::FactorialProducts { start: 1 };
        for _ in 0..300 {
            let j = rng.gen_range(1..=3);
            let m = rng.gen_range(1..=3);
            let rows: Vec<Vec<i64>> =
                (0..j).map(|_| (0..m).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            let exact: Vec<i64> = (0..m).map(|_| rng.gen_range(-5..=5)).collect();
            let a = IntMat::from_rows(&rows).unwrap();
            let b = a.mul_vec(&exact).unwrap();
            let s = AugSystem::new(a, b).unwrap();
            let nf = normalize(&s).unwrap();
            // Factorial default when it stays in sane range; otherwise an
            // explicit family seeded by the pivot product (also valid: lift
            // only needs n0 >= 1, n0 | n, and every pivot dividing n0).
            let product = nf.pivot_product().unwrap();
            let n0 = match base_modulus(&nf, &fam, 20) {
                Ok(v) if v < 1 << 20 => v,
                _ => product,
            };
            let n = n0 * rng.gen_range(1..=4);
            let step = i64::try_from(n).unwrap();
            let e: Vec<i64> = exact.iter().map(|&x| x + step * rng.gen_range(-2..=2)).collect();
            let lifted = lift(&s, &e, n, n0).unwrap();
            assert!(s.is_solution(&lifted).unwrap());
            let step = (n / n0) as i64;
            for (l, orig) in lifted.iter().zip(&e) {
                assert_eq!((l - orig).rem_euclid(step), 0);
            }
        }
    }

    #[test]
    fn solve_unique_point() {
        let s = sys(&[vec![1, 1], vec![1, -1]], &[3, 1]);
        match solve(&s).unwrap() {
            SolveOutcome::Solutions(c) => {
                assert_eq!(c.particular, vec![2, 1]);
                assert!(c.basis.is_empty());
            }
            other => panic!("expected solutions, got {other:?}"),
        }
    }

    #[test]
    fn solve_certifies_emptiness() {
        // 2E = 1: pivot fails to divide.
        match solve(&sys(&[vec![2]], &[1])).unwrap() {
            SolveOutcome::Empty(c) => {
                assert_eq!(c.pivot, Some(2));
                assert_eq!(c.value, 1);
            }
            other => panic!("expected empty, got {other:?}"),
        }
        // E = 2 and E = 8: after elimination a zero row with nonzero rhs.
        match solve(&sys(&[vec![1], vec![1]], &[2, 8])).unwrap() {
            SolveOutcome::Empty(c) => assert_eq!(c.pivot, None),
            other => panic!("expected empty, got {other:?}"),
        }
    }

    #[test]
    fn solve_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..150 {
            let j = rng.gen_range(1..=3);
            let m = rng.gen_range(1..=3);
            let rows: Vec<Vec<i64>> =
                (0..j).map(|_| (0..m).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            let b: Vec<i64> = (0..j).map(|_| rng.gen_range(-3..=3)).collect();
            let s = sys(&rows, &b);
            let expect = brute_box(&s, 4);
            match solve(&s).unwrap() {
                SolveOutcome::Empty(_) => assert!(expect.is_empty()),
                SolveOutcome::Solutions(coset) => {
                    assert!(s.is_solution(&coset.particular).unwrap());
                    for v in &coset.basis {
                        let shifted: Vec<i64> =
                            coset.particular.iter().zip(v).map(|(a, b)| a + b).collect();
                        assert!(s.is_solution(&shifted).unwrap());
                    }
                    for e in &expect {
                        assert!(coset.contains(e).unwrap(), "missing box solution {e:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn coset_canonical_forms_agree() {
        let mut a = LatticeCoset { particular: vec![1, 0], basis: vec![vec![1, -1]] };
        let mut b = LatticeCoset { particular: vec![-3, 4], basis: vec![vec![-2, 2], vec![1, -1]] };
        a.canonicalize();
        b.canonicalize();
        assert_eq!(a, b);
        // A full-rank basis reduces the particular into the fundamental box.
        let mut c = LatticeCoset { particular: vec![7, 9], basis: vec![vec![2, 0], vec![0, 3]] };
        c.canonicalize();
        assert_eq!(c.particular, vec![1, 0]);
    }

    #[test]
    fn coset_membership() {
        let c = LatticeCoset { particular: vec![1, 0], basis: vec![vec![1, -1]] };
        assert!(c.contains(&[3, -2]).unwrap());
        assert!(!c.contains(&[3, -1]).unwrap());
        let point = LatticeCoset { particular: vec![2, 2], basis: vec![] };
        assert!(point.contains(&[2, 2]).unwrap());
        assert!(!point.contains(&[2, 3]).unwrap());
    }

    proptest::proptest! {
        #[test]
        fn prop_replay_matches_normal_form(
            rows in proptest::collection::vec(
                proptest::collection::vec(-4i64..=4, 1..=3), 1..=3),
            b in proptest::collection::vec(-4i64..=4, 3),
        ) {
            let m = rows[0].len();
            let rows: Vec<Vec<i64>> =
                rows.iter().map(|r| r.iter().copied().cycle().take(m).collect()).collect();
            let s = sys(&rows, &b[..rows.len()]);
            let nf = normalize(&s).unwrap();
            let mut a = s.a.clone();
            let mut rhs = s.b.clone();
            for &op in &nf.ops {
                apply_op(&mut a, &mut rhs, op).unwrap();
            }
            proptest::prop_assert_eq!(a, nf.mat);
            proptest::prop_assert_eq!(rhs, nf.rhs);
        }

        #[test]
        fn prop_coset_members_solve_system(
            rows in proptest::collection::vec(
                proptest::collection::vec(-3i64..=3, 2..=3), 1..=2),
            b in proptest::collection::vec(-3i64..=3, 2),
            coeffs in proptest::collection::vec(-2i64..=2, 3),
        ) {
            let m = rows[0].len();
            let rows: Vec<Vec<i64>> =
                rows.iter().map(|r| r.iter().copied().cycle().take(m).collect()).collect();
            let s = sys(&rows, &b[..rows.len()]);
            if let SolveOutcome::Solutions(c) = solve(&s).unwrap() {
                let mut point = c.particular.clone();
                for (v, &k) in c.basis.iter().zip(&coeffs) {
                    for (p, x) in point.iter_mut().zip(v) {
                        *p += k * x;
                    }
                }
                proptest::prop_assert!(s.is_solution(&point).unwrap());
                proptest::prop_assert!(c.contains(&point).unwrap());
            }
        }
    }
}
