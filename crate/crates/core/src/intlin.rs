//! Exact integer linear algebra: dense arbitrary-precision matrices,
//! Smith normal form with unimodular transforms, kernel bases, right
//! inverses, and integer linear solving.
//!
//! Everything here is deterministic: pivot choices break ties in
//! row-major order and output columns are canonically sorted, so repeated
//! runs on equal inputs produce identical results.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix with arbitrary-precision entries, row-major.
///
/// Zero rows or columns are allowed; several operations on empty shapes
/// are meaningful (an injective matrix has a kernel basis with no
/// columns, for example).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

/// Build an [`IntMat`] from integer literals: `mat![[1, 1, -2]]`.
#[macro_export]
macro_rules! mat {
    ($([$($x:expr),* $(,)?]),* $(,)?) => {{
        let rows: Vec<Vec<$crate::BigInt>> =
            vec![$(vec![$($crate::BigInt::from($x)),*]),*];
        $crate::intlin::IntMat::from_rows(rows)
    }};
}

/// Build a `Vec<BigInt>` from integer literals: `vecz![1, 1, -2]`.
#[macro_export]
macro_rules! vecz {
    ($($x:expr),* $(,)?) => {
        vec![$($crate::BigInt::from($x)),*]
    };
}

impl IntMat {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must match shape");
        IntMat { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Build from a list of rows; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row);
        }
        IntMat::new(r, c, entries)
    }

    /// Build from a list of columns; used when assembling kernel bases.
    pub fn from_cols(rows: usize, cols: Vec<Vec<BigInt>>) -> Self {
        let c = cols.len();
        let mut m = IntMat::zeros(rows, c);
        for (j, col) in cols.into_iter().enumerate() {
            assert_eq!(col.len(), rows, "column of wrong height");
            for (i, x) in col.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<BigInt> {
        self.row(i).to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_nonneg(&self) -> bool {
        self.entries.iter().all(|x| !x.is_negative())
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += c * row[src]`
    pub(crate) fn add_scaled_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        assert_ne!(dst, src);
        for j in 0..self.cols {
            let add = c * self.get(src, j);
            let cur = self.get(dst, j) + add;
            self.set(dst, j, cur);
        }
    }

    /// `col[dst] += c * col[src]`
    pub(crate) fn add_scaled_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        assert_ne!(dst, src);
        for i in 0..self.rows {
            let add = c * self.get(i, src);
            let cur = self.get(i, dst) + add;
            self.set(i, dst, cur);
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = -self.get(i, j).clone();
            self.set(i, j, x);
        }
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMat {}x{} {}", self.rows, self.cols, self)
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows == 0 || self.cols == 0 {
            return write!(f, "[empty {}x{}]", self.rows, self.cols);
        }
        let mut widths = vec![0usize; self.cols];
        for i in 0..self.rows {
            for (j, w) in widths.iter_mut().enumerate() {
                *w = (*w).max(self.get(i, j).to_string().len());
            }
        }
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for (j, w) in widths.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", self.get(i, j).to_string(), width = w)?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// vector helpers shared across the crate
// ---------------------------------------------------------------------------

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    assert_eq!(a.len(), b.len());
    let mut acc = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

pub fn one_norm(v: &[BigInt]) -> BigInt {
    v.iter().map(Signed::abs).sum()
}

pub fn support_len(v: &[BigInt]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn is_nonneg_vec(v: &[BigInt]) -> bool {
    v.iter().all(|x| !x.is_negative())
}

pub fn is_strictly_positive(v: &[BigInt]) -> bool {
    !v.is_empty() && v.iter().all(|x| x.is_positive())
}

pub(crate) fn add_vec(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn sub_vec(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a <= b` componentwise.
pub(crate) fn le_vec(a: &[BigInt], b: &[BigInt]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Canonical order for monoid vectors: total 1-norm, then support size,
/// then colexicographic on the raw coordinates. Total on equal-length
/// vectors; used for Hilbert-basis columns, fiber elements, and semigroup
/// generator lists.
pub fn monoid_cmp(a: &[BigInt], b: &[BigInt]) -> Ordering {
    one_norm(a)
        .cmp(&one_norm(b))
        .then_with(|| support_len(a).cmp(&support_len(b)))
        .then_with(|| {
            for (x, y) in a.iter().rev().zip(b.iter().rev()) {
                match x.cmp(y) {
                    Ordering::Equal => continue,
                    other => return other,
                }
            }
            Ordering::Equal
        })
}

/// Order used for kernel-basis columns: 1-norm, then lexicographic.
fn kernel_cmp(a: &[BigInt], b: &[BigInt]) -> Ordering {
    one_norm(a).cmp(&one_norm(b)).then_with(|| a.cmp(b))
}

/// Rounded integer division, |remainder| <= |b|/2; ties round away from
/// the floor. Used by the Smith reduction to shrink pivots fast.
pub(crate) fn div_rounded(a: &BigInt, b: &BigInt) -> BigInt {
    assert!(!b.is_zero());
    let babs = b.abs();
    let (mut q, r) = a.div_mod_floor(&babs);
    if &r * 2 > babs {
        q += 1;
    }
    if b.is_negative() {
        -q
    } else {
        q
    }
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

/// Decomposition `left * m * right = diagonal` with unimodular `left`,
/// `right`. The diagonal carries the invariant factors `d_1 | d_2 | ...`,
/// all positive, followed by zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithNormalForm {
    pub left: IntMat,
    pub right: IntMat,
    pub diagonal: IntMat,
    pub invariant_factors: Vec<BigInt>,
}

/// Find the entry of smallest nonzero absolute value in the trailing
/// submatrix starting at `(t, t)`; ties break in row-major order.
fn min_abs_pivot(d: &IntMat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = d.get(i, j);
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            match &best {
                Some((_, _, cur)) if *cur <= a => {}
                _ => best = Some((i, j, a)),
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Smith normal form by elementary row and column reduction, pivoting on
/// the entry of minimal absolute value. Requires a nonempty matrix.
pub fn smith_normal_form(m: &IntMat) -> SmithNormalForm {
    assert!(m.rows() > 0 && m.cols() > 0, "smith normal form of an empty matrix");
    let mut d = m.clone();
    let mut left = IntMat::identity(m.rows());
    let mut right = IntMat::identity(m.cols());
    let steps = m.rows().min(m.cols());

    'steps: for t in 0..steps {
        loop {
            let Some((pi, pj)) = min_abs_pivot(&d, t) else {
                break 'steps;
            };
            d.swap_rows(t, pi);
            left.swap_rows(t, pi);
            d.swap_cols(t, pj);
            right.swap_cols(t, pj);

            for i in (t + 1)..d.rows() {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = div_rounded(d.get(i, t), d.get(t, t));
                if !q.is_zero() {
                    let c = -q;
                    d.add_scaled_row(i, t, &c);
                    left.add_scaled_row(i, t, &c);
                }
            }
            for j in (t + 1)..d.cols() {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = div_rounded(d.get(t, j), d.get(t, t));
                if !q.is_zero() {
                    let c = -q;
                    d.add_scaled_col(j, t, &c);
                    right.add_scaled_col(j, t, &c);
                }
            }

            let col_clear = ((t + 1)..d.rows()).all(|i| d.get(i, t).is_zero());
            let row_clear = ((t + 1)..d.cols()).all(|j| d.get(t, j).is_zero());
            if !(col_clear && row_clear) {
                continue;
            }

            // Pull in a trailing entry the pivot does not divide, if any,
            // so the next rounds shrink the pivot to the gcd.
            let pivot = d.get(t, t).clone();
            let mut fixed = true;
            'scan: for i in (t + 1)..d.rows() {
                for j in (t + 1)..d.cols() {
                    if !d.get(i, j).mod_floor(&pivot).is_zero() {
                        let one = BigInt::one();
                        d.add_scaled_row(t, i, &one);
                        left.add_scaled_row(t, i, &one);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            left.negate_row(t);
        }
    }

    let mut invariant_factors = Vec::new();
    for t in 0..steps {
        let x = d.get(t, t);
        if x.is_zero() {
            break;
        }
        invariant_factors.push(x.clone());
    }

    SmithNormalForm { left, right, diagonal: d, invariant_factors }
}

/// Rank over the rationals, via the number of invariant factors.
pub fn rank(m: &IntMat) -> usize {
    if m.rows() == 0 || m.cols() == 0 || m.is_zero() {
        return 0;
    }
    smith_normal_form(m).invariant_factors.len()
}

/// A basis of the integer kernel `{x : m x = 0}`, returned as the columns
/// of a `m.cols() x rank(kernel)` matrix. Columns are sign-normalized so
/// their first nonzero entry is positive and sorted by 1-norm, then
/// lexicographically. An injective matrix yields a result with no columns.
pub fn kernel_basis(m: &IntMat) -> IntMat {
    if m.cols() == 0 {
        return IntMat::zeros(0, 0);
    }
    let mut cols: Vec<Vec<BigInt>> = if m.rows() == 0 || m.is_zero() {
        (0..m.cols())
            .map(|j| {
                let mut e = vec![BigInt::zero(); m.cols()];
                e[j] = BigInt::one();
                e
            })
            .collect()
    } else {
        let snf = smith_normal_form(m);
        let r = snf.invariant_factors.len();
        (r..m.cols()).map(|j| snf.right.col_vec(j)).collect()
    };
    for col in &mut cols {
        if let Some(first) = col.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                for x in col.iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
        }
    }
    cols.sort_by(|a, b| kernel_cmp(a, b));
    IntMat::from_cols(m.cols(), cols)
}

/// Whether `Z^n / (row lattice of a)` is torsion-free, i.e. every
/// invariant factor equals one. This is exactly the primality test for
/// the associated lattice ideal.
pub fn is_torsion_free_quotient(a: &IntMat) -> bool {
    if a.rows() == 0 || a.cols() == 0 || a.is_zero() {
        return true;
    }
    smith_normal_form(a).invariant_factors.iter().all(One::is_one)
}

/// When the quotient has torsion, the smallest invariant factor exceeding
/// one (used in diagnostics).
pub fn first_torsion_factor(a: &IntMat) -> Option<BigInt> {
    if a.rows() == 0 || a.cols() == 0 || a.is_zero() {
        return None;
    }
    smith_normal_form(a).invariant_factors.into_iter().find(|f| !f.is_one())
}

/// An integer right inverse `q` with `c * q = identity`, when one exists.
/// Existence is equivalent to `c` being surjective as a map of lattices:
/// full row rank with all invariant factors one.
pub fn right_inverse(c: &IntMat) -> Option<IntMat> {
    if c.rows() == 0 {
        return Some(IntMat::zeros(c.cols(), 0));
    }
    if c.cols() == 0 {
        return None;
    }
    let snf = smith_normal_form(c);
    if snf.invariant_factors.len() != c.rows()
        || !snf.invariant_factors.iter().all(One::is_one)
    {
        return None;
    }
    let mut dplus = IntMat::zeros(c.cols(), c.rows());
    for t in 0..c.rows() {
        dplus.set(t, t, BigInt::one());
    }
    let q = snf.right.mul(&dplus).mul(&snf.left);
    debug_assert_eq!(c.mul(&q), IntMat::identity(c.rows()));
    Some(q)
}

/// One integer solution `x` of `m x = t` (matrix right-hand sides allowed),
/// or `None` when no integer solution exists. Free coordinates are set to
/// zero in the Smith basis, so the output is deterministic.
pub fn solve_integer(m: &IntMat, t: &IntMat) -> Option<IntMat> {
    assert_eq!(m.rows(), t.rows(), "right-hand side has wrong height");
    if m.cols() == 0 {
        return t.is_zero().then(|| IntMat::zeros(0, t.cols()));
    }
    if m.rows() == 0 {
        return Some(IntMat::zeros(m.cols(), t.cols()));
    }
    let snf = smith_normal_form(m);
    let r = snf.invariant_factors.len();
    let y = snf.left.mul(t);
    let mut reduced = IntMat::zeros(m.cols(), t.cols());
    for i in 0..m.rows() {
        for j in 0..t.cols() {
            let yij = y.get(i, j);
            if i < r {
                let (q, rem) = yij.div_mod_floor(&snf.invariant_factors[i]);
                if !rem.is_zero() {
                    return None;
                }
                reduced.set(i, j, q);
            } else if !yij.is_zero() {
                return None;
            }
        }
    }
    let x = snf.right.mul(&reduced);
    debug_assert_eq!(m.mul(&x), *t);
    Some(x)
}
