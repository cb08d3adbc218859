//! Rational polyhedral cones with both generator and inequality
//! representations, cone duality, and affine semigroup saturation.
//!
//! Inequalities are computed from generators by Fourier Motzkin
//! elimination. Saturating a semigroup means computing the Hilbert
//! basis of (cone spanned by the generators) intersected with (lattice
//! generated by the generators); a semigroup is normal when that adds
//! nothing new.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::intlin::{self, dot, is_zero_vec, monoid_cmp, IntMat};
use crate::{Error, Result};

/// A rational polyhedral cone, kept in both representations: spanning
/// generators and supporting inequalities. Both lists are primitive,
/// deduplicated, and canonically ordered; every generator satisfies
/// every inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCone {
    ambient_dim: usize,
    generators: Vec<Vec<BigInt>>,
    inequalities: Vec<Vec<BigInt>>,
}

/// Divide a vector by the gcd of its entries, keeping orientation.
/// Zero vectors stay zero.
fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

fn normalize_list(vs: impl IntoIterator<Item = Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let set: BTreeSet<Vec<BigInt>> = vs
        .into_iter()
        .map(|v| primitive(&v))
        .filter(|v| !is_zero_vec(v))
        .collect();
    let mut out: Vec<Vec<BigInt>> = set.into_iter().collect();
    out.sort_by(|a, b| monoid_cmp(a, b));
    out
}

/// One row of the elimination tableau over variables
/// `(lambda_1..lambda_t, x_1..x_d)`: either an equation `coeffs = 0`
/// or an inequality `coeffs >= 0`.
#[derive(Clone, Debug)]
struct TableauRow {
    coeffs: Vec<BigInt>,
    is_eq: bool,
}

impl TableauRow {
    fn normalized(mut self) -> Self {
        self.coeffs = primitive(&self.coeffs);
        self
    }
}

/// Eliminate variable `var` from the rows: by pivoting on an equation
/// when one uses it, otherwise by combining positive and negative
/// inequality rows. Equation pivots are scaled positive so inequality
/// directions survive the cross-multiplication.
fn eliminate(rows: Vec<TableauRow>, var: usize) -> Vec<TableauRow> {
    let mut rows = rows;
    if let Some(p) = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.is_eq && !r.coeffs[var].is_zero())
        .min_by_key(|(_, r)| r.coeffs[var].abs())
        .map(|(i, _)| i)
    {
        let mut pivot = rows.swap_remove(p);
        if pivot.coeffs[var].is_negative() {
            for c in &mut pivot.coeffs {
                *c = -c.clone();
            }
        }
        let pc = pivot.coeffs[var].clone();
        let mut out = Vec::new();
        for r in rows {
            if r.coeffs[var].is_zero() {
                out.push(r);
                continue;
            }
            let f = r.coeffs[var].clone();
            let coeffs = r
                .coeffs
                .iter()
                .zip(&pivot.coeffs)
                .map(|(a, b)| a * &pc - b * &f)
                .collect();
            out.push(TableauRow { coeffs, is_eq: r.is_eq }.normalized());
        }
        return out;
    }

    // no equation uses the variable: classic positive/negative pairing
    let (zero, nonzero): (Vec<_>, Vec<_>) =
        rows.into_iter().partition(|r| r.coeffs[var].is_zero());
    let mut out = zero;
    let pos: Vec<&TableauRow> = nonzero.iter().filter(|r| r.coeffs[var].is_positive()).collect();
    let neg: Vec<&TableauRow> = nonzero.iter().filter(|r| r.coeffs[var].is_negative()).collect();
    debug_assert!(nonzero.iter().all(|r| !r.is_eq));
    for p in &pos {
        for n in &neg {
            let pc = p.coeffs[var].clone();
            let nc = -n.coeffs[var].clone();
            let coeffs: Vec<BigInt> = p
                .coeffs
                .iter()
                .zip(&n.coeffs)
                .map(|(a, b)| a * &nc + b * &pc)
                .collect();
            let row = TableauRow { coeffs, is_eq: false }.normalized();
            if !is_zero_vec(&row.coeffs) {
                out.push(row);
            }
        }
    }
    dedupe_rows(out)
}

fn dedupe_rows(rows: Vec<TableauRow>) -> Vec<TableauRow> {
    let mut seen: BTreeSet<(bool, Vec<BigInt>)> = BTreeSet::new();
    let mut out = Vec::new();
    for r in rows {
        if seen.insert((r.is_eq, r.coeffs.clone())) {
            out.push(r);
        }
    }
    out
}

/// Inequality description of the cone spanned by `gens` in dimension
/// `dim`: eliminate the combination coefficients from
/// `x = sum lambda_i g_i, lambda >= 0`.
fn span_inequalities(dim: usize, gens: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let t = gens.len();
    let width = t + dim;
    let mut rows: Vec<TableauRow> = Vec::new();
    for j in 0..dim {
        // x_j - sum_i lambda_i g_i[j] = 0
        let mut coeffs = vec![BigInt::zero(); width];
        for (i, g) in gens.iter().enumerate() {
            coeffs[i] = -g[j].clone();
        }
        coeffs[t + j] = BigInt::one();
        rows.push(TableauRow { coeffs, is_eq: true });
    }
    for i in 0..t {
        let mut coeffs = vec![BigInt::zero(); width];
        coeffs[i] = BigInt::one();
        rows.push(TableauRow { coeffs, is_eq: false });
    }

    for var in 0..t {
        rows = eliminate(rows, var);
    }

    let mut ineqs: Vec<Vec<BigInt>> = Vec::new();
    for r in rows {
        debug_assert!(r.coeffs[..t].iter().all(|c| c.is_zero()));
        let x_part: Vec<BigInt> = r.coeffs[t..].to_vec();
        if is_zero_vec(&x_part) {
            continue;
        }
        if r.is_eq {
            ineqs.push(x_part.iter().map(|c| -c.clone()).collect());
            ineqs.push(x_part);
        } else {
            ineqs.push(x_part);
        }
    }
    normalize_list(ineqs)
}

impl RationalCone {
    /// The cone spanned by the given generators. Inequalities are
    /// derived by elimination; an empty generator list gives the zero
    /// cone.
    pub fn from_generators(ambient_dim: usize, generators: Vec<Vec<BigInt>>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::Invalid("cone needs a positive ambient dimension".into()));
        }
        for g in &generators {
            if g.len() != ambient_dim {
                return Err(Error::Invalid(format!(
                    "generator has length {} in ambient dimension {}",
                    g.len(),
                    ambient_dim
                )));
            }
        }
        let generators = normalize_list(generators);
        let inequalities = span_inequalities(ambient_dim, &generators);
        let cone = RationalCone { ambient_dim, generators, inequalities };
        debug_assert!(cone.generators.iter().all(|g| cone.contains(g)));
        Ok(cone)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn inequalities(&self) -> &[Vec<BigInt>] {
        &self.inequalities
    }

    /// Membership: every inequality pairs nonnegatively.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.ambient_dim);
        self.inequalities.iter().all(|h| !dot(h, v).is_negative())
    }

    /// A cone is pointed when it contains no line, i.e. the inequality
    /// normals span the full ambient space.
    pub fn is_pointed(&self) -> bool {
        if self.generators.is_empty() {
            return true;
        }
        let m = IntMat::from_rows(self.inequalities.clone());
        intlin::rank(&m) == self.ambient_dim
    }

    /// Set equality: mutual containment checked on generators.
    pub fn set_eq(&self, other: &RationalCone) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.generators.iter().all(|g| other.contains(g))
            && other.generators.iter().all(|g| self.contains(g))
    }
}

/// The dual cone: vectors pairing nonnegatively with everything in the
/// input. Its generators are the input's supporting inequalities, and
/// its own inequality description is recomputed from scratch by
/// elimination.
pub fn dual_cone(cone: &RationalCone) -> RationalCone {
    RationalCone::from_generators(cone.ambient_dim, cone.inequalities.clone())
        .expect("inequality vectors are valid generators")
}

/// A finitely generated subsemigroup of some `Z^m`, given by its
/// generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupPresentation {
    ambient_dim: usize,
    generators: Vec<Vec<BigInt>>,
}

impl SemigroupPresentation {
    pub fn new(ambient_dim: usize, generators: Vec<Vec<BigInt>>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::Invalid(
                "semigroup needs a positive ambient dimension".into(),
            ));
        }
        if generators.is_empty() {
            return Err(Error::Invalid("semigroup needs at least one generator".into()));
        }
        for g in &generators {
            if g.len() != ambient_dim {
                return Err(Error::Invalid(format!(
                    "generator has length {} in ambient dimension {}",
                    g.len(),
                    ambient_dim
                )));
            }
        }
        Ok(SemigroupPresentation { ambient_dim, generators })
    }

    /// Convenience: the semigroup generated by the rows of a matrix.
    pub fn from_rows(m: &IntMat) -> Result<Self> {
        Self::new(m.cols(), (0..m.rows()).map(|i| m.row_vec(i)).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }
}

/// Coordinates of the semigroup inside the lattice its generators
/// span: a full-rank change of basis derived from the Smith form, with
/// maps in both directions.
struct LatticeChart {
    /// rank of the generated lattice
    rank: usize,
    /// columns are the lattice basis, expressed in the ambient space
    basis_cols: IntMat,
    /// generator images in the chart, one column per nonzero generator
    gen_coords: IntMat,
}

fn lattice_chart(ambient_dim: usize, gens: &[Vec<BigInt>]) -> LatticeChart {
    let m = IntMat::from_rows(gens.to_vec());
    let snf = intlin::smith_normal_form(&m);
    let r = snf.invariant_factors.len();
    // rows of D V^{-1} scaled by the invariant factors span the lattice;
    // V^{-1} exists exactly because V is unimodular
    let v_inv = intlin::solve_integer(&snf.right, &IntMat::identity(ambient_dim))
        .expect("a unimodular matrix has an integer inverse");
    let cols: Vec<Vec<BigInt>> = (0..r)
        .map(|i| {
            v_inv
                .row(i)
                .iter()
                .map(|x| x * &snf.invariant_factors[i])
                .collect()
        })
        .collect();
    let basis_cols = IntMat::from_cols(ambient_dim, cols);
    let targets = IntMat::from_cols(ambient_dim, gens.to_vec());
    let gen_coords = intlin::solve_integer(&basis_cols, &targets)
        .expect("generators lie in the lattice they span");
    LatticeChart { rank: r, basis_cols, gen_coords }
}

/// Saturate: the Hilbert basis of (spanned cone) intersect (generated
/// lattice), expressed back in the ambient coordinates. Idempotent.
pub fn saturate_semigroup(s: &SemigroupPresentation) -> Result<SemigroupPresentation> {
    let gens: Vec<Vec<BigInt>> = s
        .generators
        .iter()
        .filter(|g| !is_zero_vec(g))
        .cloned()
        .collect();
    if gens.is_empty() {
        // the zero semigroup is its own saturation
        return Ok(s.clone());
    }

    let chart = lattice_chart(s.ambient_dim, &gens);
    let r = chart.rank;
    let coords: Vec<Vec<BigInt>> =
        (0..chart.gen_coords.cols()).map(|j| chart.gen_coords.col_vec(j)).collect();
    let cone = RationalCone::from_generators(r, coords.clone())?;
    if !cone.is_pointed() {
        return Err(Error::NotPointed);
    }

    // Every irreducible element lies in the zonotope of the generators,
    // so its coordinates lie in the box of columnwise negative and
    // positive part sums.
    let mut lo = vec![BigInt::zero(); r];
    let mut hi = vec![BigInt::zero(); r];
    for c in &coords {
        for i in 0..r {
            if c[i].is_negative() {
                lo[i] += &c[i];
            } else {
                hi[i] += &c[i];
            }
        }
    }

    let mut candidates: Vec<Vec<BigInt>> = Vec::new();
    let mut point = lo.clone();
    'scan: loop {
        if !is_zero_vec(&point) && cone.contains(&point) {
            candidates.push(point.clone());
        }
        let mut i = 0;
        loop {
            if i == r {
                break 'scan;
            }
            if point[i] < hi[i] {
                point[i] += 1;
                break;
            }
            point[i] = lo[i].clone();
            i += 1;
        }
    }

    let irreducible: Vec<Vec<BigInt>> = candidates
        .iter()
        .filter(|x| {
            !candidates.iter().any(|g| {
                g != *x && {
                    let diff: Vec<BigInt> =
                        x.iter().zip(g).map(|(a, b)| a - b).collect();
                    cone.contains(&diff)
                }
            })
        })
        .cloned()
        .collect();

    let mut out: Vec<Vec<BigInt>> = irreducible
        .iter()
        .map(|p| chart.basis_cols.mul_vec(p))
        .collect();
    out.sort_by(|a, b| monoid_cmp(a, b));
    SemigroupPresentation::new(s.ambient_dim, out)
}

/// Does the semigroup generated by `s` contain `x`? Decided by
/// completing the homogeneous system `(generators | -x) w = 0` and
/// looking for a minimal solution using `x` exactly once.
pub fn semigroup_contains(s: &SemigroupPresentation, x: &[BigInt]) -> bool {
    assert_eq!(x.len(), s.ambient_dim);
    if is_zero_vec(x) {
        return true;
    }
    let mut cols: Vec<Vec<BigInt>> = s.generators.clone();
    cols.push(x.iter().map(|v| -v.clone()).collect());
    let m = IntMat::from_cols(s.ambient_dim, cols);
    let minimal = crate::hilbert::minimal_nonneg_kernel(&m);
    minimal.iter().any(|w| w[s.generators.len()].is_one())
}

/// Is the semigroup saturated in the lattice it generates? True when
/// every saturation generator already belongs to it.
pub fn is_normal(s: &SemigroupPresentation) -> Result<bool> {
    let sat = saturate_semigroup(s)?;
    Ok(sat
        .generators
        .iter()
        .all(|x| s.generators.contains(x) || semigroup_contains(s, x)))
}
