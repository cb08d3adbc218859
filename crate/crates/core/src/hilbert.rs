//! The nonnegative-kernel monoid of a lattice presentation: Hilbert
//! bases, strictly positive kernel vectors, fibers of the induced
//! monoid map, and minimal obstruction witnesses.
//!
//! For a presentation with matrix `A`, the monoid is
//! `K = ker(A) ∩ N^n`. Its Hilbert basis `B` (columns) parametrizes the
//! variety by monomials; fibers of `w -> B w` detect whether a monomial
//! value has more than one representation, which is the combinatorial
//! source of non-extendable maps.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::intlin::{
    self, add_vec, dot, is_nonneg_vec, is_strictly_positive, is_zero_vec, kernel_basis,
    le_vec, monoid_cmp, one_norm, sub_vec, IntMat,
};
use crate::toric::LatticePresentation;
use crate::{Error, Result};

/// The Hilbert basis of `ker(A) ∩ N^n`, stored as the columns of an
/// `n x m` matrix together with the presentation it came from.
///
/// Columns are canonically ordered and none is a nonnegative integer
/// combination of the others.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertBasis {
    pub matrix: IntMat,
    pub presentation: LatticePresentation,
}

impl HilbertBasis {
    /// Number of basis elements (columns).
    pub fn len(&self) -> usize {
        self.matrix.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Minimal solutions of `a x = 0, x in N^n \ {0}`, by completion:
/// breadth-first growth from the unit vectors, stepping only in
/// directions that shrink the defect, pruning anything that dominates a
/// known solution. Returns the solutions sorted canonically.
pub(crate) fn minimal_nonneg_kernel(a: &IntMat) -> Vec<Vec<BigInt>> {
    let n = a.cols();
    let defect_of_unit: Vec<Vec<BigInt>> = (0..n).map(|j| a.col_vec(j)).collect();

    let mut minimal: Vec<Vec<BigInt>> = Vec::new();
    let mut frontier: BTreeMap<Vec<BigInt>, Vec<BigInt>> = BTreeMap::new();
    for j in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[j] = BigInt::one();
        frontier.insert(e, defect_of_unit[j].clone());
    }

    while !frontier.is_empty() {
        for (x, defect) in &frontier {
            if is_zero_vec(defect) {
                minimal.push(x.clone());
            }
        }
        let mut next: BTreeMap<Vec<BigInt>, Vec<BigInt>> = BTreeMap::new();
        for (x, defect) in frontier {
            if is_zero_vec(&defect) {
                continue;
            }
            for j in 0..n {
                if dot(&defect, &defect_of_unit[j]).is_negative() {
                    let mut y = x.clone();
                    y[j] += 1;
                    if minimal.iter().any(|s| le_vec(s, &y)) {
                        continue;
                    }
                    next.entry(y)
                        .or_insert_with(|| add_vec(&defect, &defect_of_unit[j]));
                }
            }
        }
        frontier = next;
    }

    minimal.sort_by(|x, y| monoid_cmp(x, y));
    minimal
}

/// Hilbert basis of the nonnegative kernel of the presentation. A trivial
/// monoid yields a basis with no columns.
pub fn hilbert_basis(p: &LatticePresentation) -> HilbertBasis {
    let cols = minimal_nonneg_kernel(p.relations());
    let matrix = IntMat::from_cols(p.coords(), cols);
    debug_assert!(p.relations().mul(&matrix).is_zero());
    HilbertBasis { matrix, presentation: p.clone() }
}

/// A strictly positive integer vector in `ker(A)`, when one exists:
/// the canonically least one (smallest total degree, then the canonical
/// order). Existence is equivalent to the variety containing the origin.
pub fn positive_kernel_vector(p: &LatticePresentation) -> Option<Vec<BigInt>> {
    positive_vector_from_basis(&hilbert_basis(p))
}

/// Same as [`positive_kernel_vector`] but reuses an already computed
/// basis.
pub(crate) fn positive_vector_from_basis(basis: &HilbertBasis) -> Option<Vec<BigInt>> {
    let b = &basis.matrix;
    let n = b.rows();
    if b.cols() == 0 {
        return None;
    }
    let mut sigma = vec![BigInt::zero(); n];
    for j in 0..b.cols() {
        sigma = add_vec(&sigma, &b.col_vec(j));
    }
    if !is_strictly_positive(&sigma) {
        // A coordinate missing from every basis element is zero on the
        // whole monoid, so nothing strictly positive exists.
        return None;
    }

    // Any degree-minimal strictly positive element is bounded by the
    // column sum, so searching level by level in total degree is exact.
    let col_deg: Vec<BigInt> = (0..b.cols()).map(|j| one_norm(&b.col_vec(j))).collect();
    let max_deg = one_norm(&sigma);
    let mut deg = BigInt::one();
    while deg <= max_deg {
        let mut found: Vec<Vec<BigInt>> = Vec::new();
        level_values(b, &col_deg, &deg, &mut found);
        if let Some(best) = found.into_iter().min_by(|x, y| monoid_cmp(x, y)) {
            return Some(best);
        }
        deg += 1;
    }
    unreachable!("the column sum itself is strictly positive");
}

/// Collect every strictly positive value `B w` of exact total degree
/// `deg` into `out`.
fn level_values(b: &IntMat, col_deg: &[BigInt], deg: &BigInt, out: &mut Vec<Vec<BigInt>>) {
    fn rec(
        b: &IntMat,
        col_deg: &[BigInt],
        j: usize,
        remaining: BigInt,
        acc: Vec<BigInt>,
        out: &mut BTreeSet<Vec<BigInt>>,
    ) {
        if j == b.cols() {
            if remaining.is_zero() && is_strictly_positive(&acc) {
                out.insert(acc);
            }
            return;
        }
        let col = b.col_vec(j);
        let mut used = BigInt::zero();
        let mut cur = acc;
        loop {
            rec(b, col_deg, j + 1, remaining.clone() - &used, cur.clone(), out);
            used += &col_deg[j];
            if used > remaining {
                break;
            }
            cur = add_vec(&cur, &col);
        }
    }
    let mut set = BTreeSet::new();
    rec(b, col_deg, 0, deg.clone(), vec![BigInt::zero(); b.rows()], &mut set);
    out.extend(set);
}

/// The complete fiber `{w in N^m : B w = target}`, canonically ordered.
///
/// Every column of a nonnegative matrix with some positive entry bounds
/// its coordinate, so the fiber is finite; a column with no positive
/// entry leaves its coordinate unconstrained and is an error.
pub fn fiber(basis: &HilbertBasis, target: &[BigInt]) -> Result<Vec<Vec<BigInt>>> {
    fiber_of_matrix(&basis.matrix, target)
}

pub(crate) fn fiber_of_matrix(b: &IntMat, target: &[BigInt]) -> Result<Vec<Vec<BigInt>>> {
    assert_eq!(target.len(), b.rows(), "fiber target has wrong length");
    for j in 0..b.cols() {
        if !(0..b.rows()).any(|i| b.get(i, j).is_positive()) {
            return Err(Error::UnboundedFiber { column: j });
        }
    }
    if !is_nonneg_vec(target) {
        return Ok(Vec::new());
    }

    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut w = vec![BigInt::zero(); b.cols()];
    fiber_rec(b, 0, target.to_vec(), &mut w, &mut out);
    out.sort_by(|x, y| monoid_cmp(x, y));
    Ok(out)
}

fn fiber_rec(
    b: &IntMat,
    j: usize,
    residual: Vec<BigInt>,
    w: &mut Vec<BigInt>,
    out: &mut Vec<Vec<BigInt>>,
) {
    if j == b.cols() {
        if is_zero_vec(&residual) {
            out.push(w.clone());
        }
        return;
    }
    let col = b.col_vec(j);
    let mut k = BigInt::zero();
    let mut res = residual;
    loop {
        w[j] = k.clone();
        fiber_rec(b, j + 1, res.clone(), w, out);
        let next = sub_vec(&res, &col);
        if !is_nonneg_vec(&next) {
            break;
        }
        res = next;
        k += 1;
    }
    w[j] = BigInt::zero();
}

/// A canonically least monoid element with two distinct preimages,
/// together with the preimage pair and its unit-vector splits. The two
/// preimages have disjoint supports and neither is a unit vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionWitness {
    /// The minimal doubly-represented monoid element `v = B w = B z`.
    pub value: Vec<BigInt>,
    /// The canonically least preimage.
    pub lesser: Vec<BigInt>,
    /// The canonically greatest preimage.
    pub greater: Vec<BigInt>,
    /// `lesser` written as (unit vector at its first support index, rest).
    pub lesser_split: (Vec<BigInt>, Vec<BigInt>),
    /// `greater` written the same way.
    pub greater_split: (Vec<BigInt>, Vec<BigInt>),
}

fn unit_split(w: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let i = w
        .iter()
        .position(|x| x.is_positive())
        .expect("obstruction preimages are nonzero");
    let mut head = vec![BigInt::zero(); w.len()];
    head[i] = BigInt::one();
    let rest = sub_vec(w, &head);
    (head, rest)
}

/// Search for the canonically least element of the monoid with at least
/// two preimages. Absent exactly when the kernel of the basis matrix is
/// trivial, in which case every element has a unique representation.
pub fn minimal_obstruction(basis: &HilbertBasis) -> Option<ObstructionWitness> {
    let b = &basis.matrix;
    let e = kernel_basis(b);
    if e.cols() == 0 {
        return None;
    }
    let u = e.col_vec(0);
    let u_plus: Vec<BigInt> = u
        .iter()
        .map(|x| if x.is_positive() { x.clone() } else { BigInt::zero() })
        .collect();
    let bound = b.mul_vec(&u_plus);

    // Every monoid element below the bound, with all of its preimages.
    let mut by_value: BTreeMap<Vec<BigInt>, Vec<Vec<BigInt>>> = BTreeMap::new();
    let mut w = vec![BigInt::zero(); b.cols()];
    collect_below(b, 0, bound.clone(), &bound, &mut w, &mut by_value);

    let candidates: Vec<&Vec<BigInt>> = by_value
        .iter()
        .filter(|(v, ws)| !is_zero_vec(v) && ws.len() >= 2)
        .map(|(v, _)| v)
        .collect();
    let value = candidates
        .iter()
        .filter(|v| {
            !candidates
                .iter()
                .any(|c| *c != **v && le_vec(c, v))
        })
        .min_by(|x, y| monoid_cmp(x, y))
        .expect("the kernel bound itself has two preimages")
        .to_vec();

    let mut preimages = by_value.remove(&value).unwrap();
    preimages.sort_by(|x, y| monoid_cmp(x, y));
    let lesser = preimages.first().unwrap().clone();
    let greater = preimages.last().unwrap().clone();
    debug_assert!(lesser
        .iter()
        .zip(&greater)
        .all(|(x, y)| x.is_zero() || y.is_zero()));

    Some(ObstructionWitness {
        value,
        lesser_split: unit_split(&lesser),
        greater_split: unit_split(&greater),
        lesser,
        greater,
    })
}

/// Depth-first walk over `{w : B w <= bound}` recording `B w -> w`.
fn collect_below(
    b: &IntMat,
    j: usize,
    residual: Vec<BigInt>,
    bound: &[BigInt],
    w: &mut Vec<BigInt>,
    out: &mut BTreeMap<Vec<BigInt>, Vec<Vec<BigInt>>>,
) {
    if j == b.cols() {
        let value = sub_vec(bound, &residual);
        out.entry(value).or_default().push(w.clone());
        return;
    }
    let col = b.col_vec(j);
    let mut k = BigInt::zero();
    let mut res = residual;
    loop {
        w[j] = k.clone();
        collect_below(b, j + 1, res.clone(), bound, w, out);
        let next = sub_vec(&res, &col);
        if !is_nonneg_vec(&next) {
            break;
        }
        res = next;
        k += 1;
    }
    w[j] = BigInt::zero();
}

/// Invariant factors of the basis matrix; all ones exactly when the
/// column lattice is saturated in the ambient lattice.
pub fn basis_invariant_factors(basis: &HilbertBasis) -> Vec<BigInt> {
    if basis.matrix.cols() == 0 || basis.matrix.rows() == 0 {
        return Vec::new();
    }
    intlin::smith_normal_form(&basis.matrix).invariant_factors
}

#[cfg(test)]
#[allow(clippy::useless_vec)]
mod tests {
    use super::*;
    use crate::toric::LatticePresentation;
    use crate::{mat, vecz};

    fn pres(a: IntMat) -> LatticePresentation {
        LatticePresentation::new(a).unwrap()
    }

    fn cols(m: &IntMat) -> Vec<Vec<BigInt>> {
        (0..m.cols()).map(|j| m.col_vec(j)).collect()
    }

    #[test]
    fn basis_of_cone_relation() {
        let b = hilbert_basis(&pres(mat![[1, 1, -2]]));
        assert_eq!(
            cols(&b.matrix),
            vec![vecz![2, 0, 1], vecz![0, 2, 1], vecz![1, 1, 1]]
        );
    }

    #[test]
    fn basis_of_umbrella_relation() {
        let b = hilbert_basis(&pres(mat![[2, 1, -2]]));
        assert_eq!(cols(&b.matrix), vec![vecz![1, 0, 1], vecz![0, 2, 1]]);
    }

    #[test]
    fn basis_of_cusp_relation() {
        let b = hilbert_basis(&pres(mat![[2, -3]]));
        assert_eq!(cols(&b.matrix), vec![vecz![3, 2]]);
    }

    #[test]
    fn basis_of_positive_row_is_empty() {
        let b = hilbert_basis(&pres(mat![[1, 1]]));
        assert_eq!(b.len(), 0);
    }

    #[test]
    fn positive_vectors_match_known_values() {
        assert_eq!(positive_kernel_vector(&pres(mat![[1, 1, -2]])), Some(vecz![1, 1, 1]));
        assert_eq!(positive_kernel_vector(&pres(mat![[2, -3]])), Some(vecz![3, 2]));
        assert_eq!(positive_kernel_vector(&pres(mat![[1, 1]])), None);
    }

    #[test]
    fn fiber_of_doubly_represented_value() {
        let b = hilbert_basis(&pres(mat![[1, 1, -2]]));
        let f = fiber(&b, &vecz![2, 2, 2]).unwrap();
        assert_eq!(f, vec![vecz![0, 0, 2], vecz![1, 1, 0]]);
    }

    #[test]
    fn fiber_of_basis_column_is_single() {
        let b = hilbert_basis(&pres(mat![[1, 1, -2]]));
        assert_eq!(fiber(&b, &vecz![2, 0, 1]).unwrap(), vec![vecz![1, 0, 0]]);
        assert_eq!(fiber(&b, &vecz![0, 0, 0]).unwrap(), vec![vecz![0, 0, 0]]);
        assert_eq!(fiber(&b, &vecz![1, 0, 0]).unwrap(), Vec::<Vec<BigInt>>::new());
    }

    #[test]
    fn fiber_rejects_zero_columns() {
        let bad = HilbertBasis {
            matrix: mat![[1, 0], [1, 0]],
            presentation: pres(mat![[1, -1]]),
        };
        assert_eq!(
            fiber(&bad, &vecz![1, 1]),
            Err(crate::Error::UnboundedFiber { column: 1 })
        );
    }

    #[test]
    fn obstruction_witness_for_cone() {
        let b = hilbert_basis(&pres(mat![[1, 1, -2]]));
        let w = minimal_obstruction(&b).expect("kernel is nontrivial");
        assert_eq!(w.value, vecz![2, 2, 2]);
        assert_eq!(w.greater, vecz![1, 1, 0]);
        assert_eq!(w.lesser, vecz![0, 0, 2]);
        assert_eq!(w.greater_split, (vecz![1, 0, 0], vecz![0, 1, 0]));
        assert_eq!(w.lesser_split, (vecz![0, 0, 1], vecz![0, 0, 1]));
    }

    #[test]
    fn obstruction_witness_for_plane_quadric() {
        let b = hilbert_basis(&pres(mat![[1, 1, -1, -1]]));
        let w = minimal_obstruction(&b).expect("kernel is nontrivial");
        assert_eq!(w.value, vecz![1, 1, 1, 1]);
        assert_eq!(w.greater, vecz![1, 0, 0, 1]);
        assert_eq!(w.lesser, vecz![0, 1, 1, 0]);
    }

    #[test]
    fn obstruction_absent_for_trivial_kernel() {
        assert!(minimal_obstruction(&hilbert_basis(&pres(mat![[2, 1, -2]]))).is_none());
        assert!(minimal_obstruction(&hilbert_basis(&pres(mat![[2, -3]]))).is_none());
    }

    #[test]
    fn witness_value_is_genuinely_minimal() {
        // Exhaustively verify minimality below the witness for the cone.
        let b = hilbert_basis(&pres(mat![[1, 1, -2]]));
        let w = minimal_obstruction(&b).unwrap();
        for x in 0..=2i64 {
            for y in 0..=2i64 {
                for z in 0..=2i64 {
                    let v = vecz![x, y, z];
                    if v == w.value || is_zero_vec(&v) {
                        continue;
                    }
                    if le_vec(&v, &w.value) {
                        assert!(fiber(&b, &v).unwrap().len() < 2, "smaller witness exists");
                    }
                }
            }
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        /// Brute-force minimal nonzero solutions inside a box, for use as
        /// an oracle. Sound whenever the box bound dominates the true
        /// basis coordinates.
        fn box_minimal_solutions(a: &IntMat, max: i64) -> Vec<Vec<BigInt>> {
            let n = a.cols();
            let mut sols: Vec<Vec<i64>> = Vec::new();
            let mut x = vec![0i64; n];
            loop {
                // advance odometer
                let mut j = 0;
                loop {
                    if j == n {
                        let mut out: Vec<Vec<BigInt>> = Vec::new();
                        for s in &sols {
                            if !sols.iter().any(|t| {
                                t != s && t.iter().zip(s).all(|(a, b)| a <= b)
                            }) {
                                out.push(s.iter().map(|&v| BigInt::from(v)).collect());
                            }
                        }
                        out.sort_by(|p, q| monoid_cmp(p, q));
                        return out;
                    }
                    if x[j] < max {
                        x[j] += 1;
                        break;
                    }
                    x[j] = 0;
                    j += 1;
                }
                let xv: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
                if (0..a.rows()).all(|i| dot(a.row(i), &xv).is_zero()) {
                    sols.push(x.clone());
                }
            }
        }

        fn small_relations() -> impl Strategy<Value = IntMat> {
            (1usize..=2, 2usize..=4).prop_flat_map(|(k, n)| {
                proptest::collection::vec(-3i64..=3, k * n).prop_map(move |xs| {
                    IntMat::new(k, n, xs.into_iter().map(BigInt::from).collect())
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn completion_matches_box_oracle(a in small_relations()) {
                prop_assume!(!a.is_zero());
                let sols = minimal_nonneg_kernel(&a);
                let bound = sols
                    .iter()
                    .flat_map(|s| s.iter())
                    .map(|x| x.to_string().parse::<i64>().unwrap())
                    .max()
                    .unwrap_or(0)
                    + 2;
                let oracle = box_minimal_solutions(&a, bound.min(7));
                if bound <= 7 {
                    prop_assert_eq!(sols, oracle);
                }
            }

            #[test]
            fn basis_columns_are_solutions_and_incomparable(a in small_relations()) {
                prop_assume!(!a.is_zero());
                let p = LatticePresentation::new(a.clone()).unwrap();
                let b = hilbert_basis(&p);
                prop_assert!(a.mul(&b.matrix).is_zero());
                let cs = cols(&b.matrix);
                for (i, x) in cs.iter().enumerate() {
                    for (j, y) in cs.iter().enumerate() {
                        if i != j {
                            prop_assert!(!le_vec(x, y), "comparable basis columns");
                        }
                    }
                }
            }

            #[test]
            fn fibers_match_direct_enumeration(a in small_relations()) {
                prop_assume!(!a.is_zero());
                let p = LatticePresentation::new(a).unwrap();
                let b = hilbert_basis(&p);
                prop_assume!(!b.is_empty() && b.len() <= 4);
                // target: a small combination of columns
                let mut target = vec![BigInt::zero(); b.matrix.rows()];
                for j in 0..b.len().min(2) {
                    target = add_vec(&target, &b.matrix.col_vec(j));
                }
                // any coordinate of a fiber element is bounded by the
                // largest target entry, since basis entries are >= 1
                // wherever positive
                let cap = target
                    .iter()
                    .map(|x| x.to_string().parse::<i64>().unwrap())
                    .max()
                    .unwrap();
                prop_assume!(cap <= 4);
                let fast = fiber(&b, &target).unwrap();
                // direct odometer enumeration up to the coordinate bound
                let mut slow: Vec<Vec<BigInt>> = Vec::new();
                let m = b.len();
                let mut w = vec![0i64; m];
                'outer: loop {
                    let wv: Vec<BigInt> = w.iter().map(|&v| BigInt::from(v)).collect();
                    if b.matrix.mul_vec(&wv) == target {
                        slow.push(wv);
                    }
                    let mut j = 0;
                    loop {
                        if j == m { break 'outer; }
                        if w[j] < cap { w[j] += 1; break; }
                        w[j] = 0;
                        j += 1;
                    }
                }
                slow.sort_by(|p, q| monoid_cmp(p, q));
                prop_assert_eq!(fast, slow);
            }

            #[test]
            fn positive_vector_is_valid_when_present(a in small_relations()) {
                prop_assume!(!a.is_zero());
                let p = LatticePresentation::new(a.clone()).unwrap();
                if let Some(v) = positive_kernel_vector(&p) {
                    prop_assert!(is_strictly_positive(&v));
                    prop_assert!(is_zero_vec(&a.mul_vec(&v)));
                }
            }
        }
    }
}
