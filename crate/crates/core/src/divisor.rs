//! The divisor-level extension criterion. A map into the variety is
//! presented by where its coordinate divisors live: named prime
//! divisors on the source, a class in a finitely generated abelian
//! group for each prime, a restriction homomorphism from the ambient
//! space's class group, and the nonnegative matrix tying coordinates
//! to primes. Extending the map across the ambient space is decided by
//! searching the finite fibers of the basis matrix for a factorization
//! whose classes are restrictions from the ambient space.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::hilbert;
use crate::intlin::{self, IntMat};
use crate::toric::ToricProfile;
use crate::{Error, Result};

/// Cap on how many fiber selections [`decide_extension`] examines
/// before giving up.
pub const DEFAULT_SELECTION_BUDGET: u64 = 1_000_000;

/// A finitely generated abelian group, `Z^free_rank` plus one cyclic
/// factor per listed torsion order. Elements are integer coordinate
/// vectors, free coordinates first; torsion coordinates are compared
/// modulo their order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl AbGroup {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        for t in &torsion {
            if *t < BigInt::from(2) {
                return Err(Error::Invalid(format!("torsion order {t} is below two")));
            }
        }
        Ok(AbGroup { free_rank, torsion })
    }

    pub fn free(free_rank: usize) -> Self {
        AbGroup { free_rank, torsion: Vec::new() }
    }

    pub fn trivial() -> Self {
        AbGroup::free(0)
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Coordinate count of an element.
    pub fn dim(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_trivial_group(&self) -> bool {
        self.dim() == 0
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.dim()]
    }

    /// Canonical coordinates: torsion entries folded into `[0, order)`.
    pub fn reduced(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.dim(), "element has wrong coordinate count");
        let mut out = coords.to_vec();
        for (k, order) in self.torsion.iter().enumerate() {
            let i = self.free_rank + k;
            out[i] = out[i].mod_floor(order);
        }
        out
    }

    pub fn is_zero_elem(&self, coords: &[BigInt]) -> bool {
        self.reduced(coords).iter().all(BigInt::is_zero)
    }
}

/// A homomorphism between [`AbGroup`]s, as a matrix on coordinates.
/// Construction checks it is well defined on torsion: each source
/// relation must land in a target relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: AbGroup,
    target: AbGroup,
    matrix: IntMat,
}

impl GroupHom {
    pub fn new(source: AbGroup, target: AbGroup, matrix: IntMat) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::Invalid(format!(
                "homomorphism matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        for (k, order) in source.torsion.iter().enumerate() {
            let j = source.free_rank + k;
            for i in 0..target.dim() {
                let image = matrix.get(i, j) * order;
                let ok = if i < target.free_rank {
                    image.is_zero()
                } else {
                    image.mod_floor(&target.torsion[i - target.free_rank]).is_zero()
                };
                if !ok {
                    return Err(Error::Invalid(format!(
                        "homomorphism not defined on torsion: order-{order} generator maps off the target relations"
                    )));
                }
            }
        }
        Ok(GroupHom { source, target, matrix })
    }

    pub fn identity(group: &AbGroup) -> Self {
        GroupHom::new(group.clone(), group.clone(), IntMat::identity(group.dim()))
            .expect("the identity is a homomorphism")
    }

    pub fn zero(source: AbGroup, target: AbGroup) -> Self {
        let matrix = IntMat::zeros(target.dim(), source.dim());
        GroupHom::new(source, target, matrix).expect("the zero map is a homomorphism")
    }

    pub fn source(&self) -> &AbGroup {
        &self.source
    }

    pub fn target(&self) -> &AbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMat {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.source.dim());
        self.target.reduced(&self.matrix.mul_vec(x))
    }
}

/// Divisor-class data for maps into the variety of `profile`: named
/// prime divisors on the source, their classes in the source class
/// group, and the restriction homomorphism from the ambient class
/// group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorEnvironment {
    primes: Vec<String>,
    classes: Vec<Vec<BigInt>>,
    restriction: GroupHom,
    profile: ToricProfile,
}

impl DivisorEnvironment {
    pub fn new(
        primes: Vec<String>,
        classes: Vec<Vec<BigInt>>,
        restriction: GroupHom,
        profile: ToricProfile,
    ) -> Result<Self> {
        if classes.len() != primes.len() {
            return Err(Error::Invalid(format!(
                "{} primes but {} classes",
                primes.len(),
                classes.len()
            )));
        }
        for (i, p) in primes.iter().enumerate() {
            if p.is_empty() {
                return Err(Error::Invalid("prime names must be nonempty".into()));
            }
            if primes[..i].contains(p) {
                return Err(Error::Invalid(format!("duplicate prime name {p}")));
            }
        }
        let group = restriction.target().clone();
        let mut reduced = Vec::with_capacity(classes.len());
        for (c, p) in classes.iter().zip(&primes) {
            if c.len() != group.dim() {
                return Err(Error::Invalid(format!(
                    "class of {p} has {} coordinates, expected {}",
                    c.len(),
                    group.dim()
                )));
            }
            reduced.push(group.reduced(c));
        }
        Ok(DivisorEnvironment { primes, classes: reduced, restriction, profile })
    }

    pub fn primes(&self) -> &[String] {
        &self.primes
    }

    pub fn classes(&self) -> &[Vec<BigInt>] {
        &self.classes
    }

    pub fn restriction(&self) -> &GroupHom {
        &self.restriction
    }

    /// Class group of the source (where the prime divisors live).
    pub fn class_group(&self) -> &AbGroup {
        self.restriction.target()
    }

    /// Class group of the ambient space the map should extend to.
    pub fn ambient_class_group(&self) -> &AbGroup {
        self.restriction.source()
    }

    pub fn profile(&self) -> &ToricProfile {
        &self.profile
    }
}

/// A validated extension question: an environment together with the
/// divisor matrix, one nonnegative kernel column per prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionProblem {
    env: DivisorEnvironment,
    divisor: IntMat,
}

impl ExtensionProblem {
    pub fn env(&self) -> &DivisorEnvironment {
        &self.env
    }

    pub fn divisor(&self) -> &IntMat {
        &self.divisor
    }
}

/// Validate a divisor matrix against an environment: one column per
/// prime, every column a nonnegative kernel vector with a nonempty
/// fiber.
pub fn build_extension_problem(env: DivisorEnvironment, divisor: IntMat) -> Result<ExtensionProblem> {
    let n = env.profile.presentation().coords();
    if divisor.rows() != n {
        return Err(Error::Invalid(format!(
            "divisor matrix has {} rows, expected {}",
            divisor.rows(),
            n
        )));
    }
    if divisor.cols() != env.primes.len() {
        return Err(Error::Invalid(format!(
            "divisor matrix has {} columns but there are {} primes",
            divisor.cols(),
            env.primes.len()
        )));
    }
    if !divisor.is_nonneg() {
        return Err(Error::Invalid("divisor matrix must be nonnegative".into()));
    }
    let a = env.profile.presentation().relations();
    for g in 0..divisor.cols() {
        let col = divisor.col_vec(g);
        if !intlin::is_zero_vec(&a.mul_vec(&col)) {
            return Err(Error::ColumnNotInKernel { prime: env.primes[g].clone() });
        }
        if hilbert::fiber(&env.profile.basis, &col)?.is_empty() {
            return Err(Error::EmptyFiber { prime: env.primes[g].clone() });
        }
    }
    Ok(ExtensionProblem { env, divisor })
}

/// Outcome of the extension decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionDecision {
    /// A factorization exists: `basis * factorization = divisor`, and
    /// the class witness pulls every coordinate class back through the
    /// restriction map. The witness is empty when the kernel is
    /// trivial, where no class condition arises.
    Extendable {
        factorization: IntMat,
        class_witness: Vec<Vec<BigInt>>,
    },
    /// Every fiber selection was examined and none admits a witness.
    NotExtendable { selections_examined: u64 },
}

/// Combine per-prime classes with integer weights: the class of
/// `sum_g weights[g] * Z_g`.
fn weighted_class(env: &DivisorEnvironment, weights: impl Iterator<Item = BigInt>) -> Vec<BigInt> {
    let group = env.class_group();
    let mut acc = group.zero();
    for (g, w) in weights.enumerate() {
        for (sigma, x) in env.classes[g].iter().enumerate() {
            acc[sigma] += &w * x;
        }
    }
    group.reduced(&acc)
}

/// Find `eta` in the ambient class group, one entry per kernel column,
/// with `restriction(E * eta) = c`. Solved exactly over the integers:
/// unknowns are the coordinates of `eta`, torsion coordinates of the
/// target contribute one slack unknown per row. Absent when no witness
/// exists; with a trivial kernel that means exactly `c = 0`.
pub fn class_membership(env: &DivisorEnvironment, c: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    let e = &env.profile.kernel;
    let m = e.rows();
    assert_eq!(c.len(), m, "one class per basis element expected");
    let hs = env.class_group();
    let hx = env.ambient_class_group();
    let ds = hs.dim();
    let dx = hx.dim();
    let ell = e.cols();
    let r = env.restriction.matrix();

    let slack_per_row = hs.torsion.len();
    let rows = m * ds;
    let cols = ell * dx + m * slack_per_row;
    let mut system = IntMat::zeros(rows, cols);
    let mut rhs = IntMat::zeros(rows, 1);
    for (i, raw) in c.iter().enumerate() {
        let ci = hs.reduced(raw);
        for (sigma, coord) in ci.iter().enumerate() {
            let row = i * ds + sigma;
            rhs.set(row, 0, coord.clone());
            for lam in 0..ell {
                for chi in 0..dx {
                    system.set(row, lam * dx + chi, e.get(i, lam) * r.get(sigma, chi));
                }
            }
        }
        for (k, order) in hs.torsion.iter().enumerate() {
            let row = i * ds + hs.free_rank + k;
            system.set(row, ell * dx + i * slack_per_row + k, order.clone());
        }
    }

    let sol = intlin::solve_integer(&system, &rhs)?;
    let eta: Vec<Vec<BigInt>> = (0..ell)
        .map(|lam| {
            let coords: Vec<BigInt> =
                (0..dx).map(|chi| sol.get(lam * dx + chi, 0).clone()).collect();
            hx.reduced(&coords)
        })
        .collect();
    debug_assert!(witness_matches(env, &eta, c));
    Some(eta)
}

/// Does `restriction(E * eta) = c` hold, computed directly in the
/// groups?
fn witness_matches(env: &DivisorEnvironment, eta: &[Vec<BigInt>], c: &[Vec<BigInt>]) -> bool {
    let e = &env.profile.kernel;
    let hs = env.class_group();
    let hx = env.ambient_class_group();
    if eta.len() != e.cols() || c.len() != e.rows() {
        return false;
    }
    for (i, ci) in c.iter().enumerate() {
        let mut x = hx.zero();
        for (lam, h) in eta.iter().enumerate() {
            for (chi, v) in h.iter().enumerate() {
                x[chi] += e.get(i, lam) * v;
            }
        }
        if env.restriction.apply(&x) != hs.reduced(ci) {
            return false;
        }
    }
    true
}

/// Check an Extendable certificate from scratch: the factorization is
/// nonnegative, multiplies back to the divisor matrix, and (when the
/// kernel is nontrivial) the witness accounts for the selected classes.
pub fn verify_certificate(
    problem: &ExtensionProblem,
    factorization: &IntMat,
    class_witness: &[Vec<BigInt>],
) -> bool {
    let env = &problem.env;
    let b = &env.profile.basis.matrix;
    if factorization.rows() != b.cols() || factorization.cols() != problem.divisor.cols() {
        return false;
    }
    if !factorization.is_nonneg() {
        return false;
    }
    if b.mul(factorization) != problem.divisor {
        return false;
    }
    let ell = env.profile.kernel_rank();
    if ell == 0 {
        return class_witness.is_empty();
    }
    let m = b.cols();
    let c: Vec<Vec<BigInt>> = (0..m)
        .map(|i| weighted_class(env, (0..factorization.cols()).map(|g| factorization.get(i, g).clone())))
        .collect();
    witness_matches(env, class_witness, &c)
}

/// Decide extendability. With a trivial kernel the first fiber
/// selection works outright. Otherwise every selection of fiber
/// elements, in lexicographic order over canonically ordered fibers,
/// is tested for a class witness; the first to admit one yields the
/// certificate, and exhausting them all proves non-extendability.
/// `budget` caps how many selections are examined.
pub fn decide_extension(problem: &ExtensionProblem, budget: u64) -> Result<ExtensionDecision> {
    let env = &problem.env;
    let profile = &env.profile;
    if !profile.is_prime {
        let factor = intlin::first_torsion_factor(profile.presentation().relations())
            .expect("a non-prime presentation has a torsion factor");
        return Err(Error::NotPrime { factor });
    }
    if !profile.contains_origin {
        return Err(Error::NoOrigin);
    }

    let b = &profile.basis;
    let v = &problem.divisor;
    let gamma = v.cols();
    let mut fibers: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(gamma);
    for g in 0..gamma {
        let f = hilbert::fiber(b, &v.col_vec(g))?;
        if f.is_empty() {
            return Err(Error::EmptyFiber { prime: env.primes[g].clone() });
        }
        fibers.push(f);
    }

    if profile.normalization_is_affine_space {
        let factorization =
            IntMat::from_cols(b.len(), fibers.iter().map(|f| f[0].clone()).collect());
        let class_witness = Vec::new();
        assert!(verify_certificate(problem, &factorization, &class_witness));
        return Ok(ExtensionDecision::Extendable { factorization, class_witness });
    }

    let m = b.len();
    let mut idx = vec![0usize; gamma];
    let mut examined: u64 = 0;
    loop {
        if examined == budget {
            return Err(Error::SearchBudgetExceeded { examined, budget });
        }
        examined += 1;

        let c: Vec<Vec<BigInt>> = (0..m)
            .map(|i| weighted_class(env, (0..gamma).map(|g| fibers[g][idx[g]][i].clone())))
            .collect();
        if let Some(class_witness) = class_membership(env, &c) {
            let factorization =
                IntMat::from_cols(m, (0..gamma).map(|g| fibers[g][idx[g]].clone()).collect());
            assert!(verify_certificate(problem, &factorization, &class_witness));
            return Ok(ExtensionDecision::Extendable { factorization, class_witness });
        }

        // advance the selection odometer, last prime fastest
        let mut pos = gamma;
        loop {
            if pos == 0 {
                return Ok(ExtensionDecision::NotExtendable { selections_examined: examined });
            }
            pos -= 1;
            if idx[pos] + 1 < fibers[pos].len() {
                idx[pos] += 1;
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Build the four-prime model problem whose decision is always
/// NotExtendable: split the minimal obstruction witness into unit and
/// remainder parts, place their basis images as the divisor columns of
/// `Z1, Z2, W1, W2`, give the `Z` primes class `-1` and the `W` primes
/// class `+1` in a free rank-one class group, and restrict from the
/// trivial ambient group.
pub fn generate_counterexample(profile: &ToricProfile) -> Result<ExtensionProblem> {
    if !profile.is_prime {
        let factor = intlin::first_torsion_factor(profile.presentation().relations())
            .expect("a non-prime presentation has a torsion factor");
        return Err(Error::NotPrime { factor });
    }
    if !profile.contains_origin {
        return Err(Error::NoOrigin);
    }
    if profile.kernel_rank() == 0 {
        return Err(Error::KerBTrivial);
    }
    let witness = hilbert::minimal_obstruction(&profile.basis)
        .expect("a nontrivial kernel yields an obstruction witness");
    let b = &profile.basis.matrix;
    let divisor = IntMat::from_cols(
        b.rows(),
        vec![
            b.mul_vec(&witness.greater_split.0),
            b.mul_vec(&witness.greater_split.1),
            b.mul_vec(&witness.lesser_split.0),
            b.mul_vec(&witness.lesser_split.1),
        ],
    );
    let one = BigInt::one();
    let classes = vec![
        vec![-one.clone()],
        vec![-one.clone()],
        vec![one.clone()],
        vec![one],
    ];
    let restriction = GroupHom::zero(AbGroup::trivial(), AbGroup::free(1));
    let env = DivisorEnvironment::new(
        vec!["Z1".into(), "Z2".into(), "W1".into(), "W2".into()],
        classes,
        restriction,
        profile.clone(),
    )?;
    build_extension_problem(env, divisor)
}
