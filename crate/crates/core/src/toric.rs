//! Affine toric varieties presented by lattice data: a presentation is
//! an integer matrix `A` whose rows span the lattice of exponent
//! relations, the variety is cut out by the corresponding binomials,
//! and the classification reads off primality, the origin, dimension,
//! the monomial parametrization and its kernel.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::hilbert::{self, HilbertBasis};
use crate::intlin::{self, IntMat};
use crate::{Error, Result};

/// A lattice presentation: an integer matrix whose rows span the
/// relation lattice inside `Z^n`. The matrix must be nonzero and have
/// at least one column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePresentation {
    relations: IntMat,
}

impl LatticePresentation {
    pub fn new(relations: IntMat) -> Result<Self> {
        if relations.cols() == 0 {
            return Err(Error::Invalid(
                "presentation needs at least one coordinate".into(),
            ));
        }
        if relations.rows() == 0 || relations.is_zero() {
            return Err(Error::Invalid("relation matrix must be nonzero".into()));
        }
        Ok(LatticePresentation { relations })
    }

    /// Number of ambient coordinates (columns of the relation matrix).
    pub fn coords(&self) -> usize {
        self.relations.cols()
    }

    pub fn relations(&self) -> &IntMat {
        &self.relations
    }
}

/// One defining binomial `x^plus - x^minus`, from the positive and
/// negative parts of a relation row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialPair {
    pub plus: Vec<BigInt>,
    pub minus: Vec<BigInt>,
}

/// The defining binomials, one per relation row.
pub fn binomials(p: &LatticePresentation) -> Vec<BinomialPair> {
    (0..p.relations.rows())
        .map(|i| {
            let row = p.relations.row(i);
            let plus = row
                .iter()
                .map(|x| if x.is_positive() { x.clone() } else { BigInt::zero() })
                .collect();
            let minus = row
                .iter()
                .map(|x| if x.is_negative() { -x.clone() } else { BigInt::zero() })
                .collect();
            BinomialPair { plus, minus }
        })
        .collect()
}

/// Whether the variety is analytically irreducible at the origin, when
/// that question is decidable by the diagonal gcd test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalIrreducibility {
    Irreducible,
    /// Some coordinate's diagonal relations have gcd above one; the
    /// offending columns are listed with their gcds.
    NotIrreducible { column_gcds: Vec<(usize, BigInt)> },
    /// The test's hypotheses (prime, origin, trivial monomial kernel)
    /// do not hold, so the question was not examined.
    NotComputed,
}

/// Everything the classifier knows about one presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricProfile {
    /// The coordinate ring is a domain: the quotient lattice is
    /// torsion free.
    pub is_prime: bool,
    /// The variety contains the origin: some strictly positive vector
    /// lies in the kernel of the relation matrix.
    pub contains_origin: bool,
    /// Canonical strictly positive kernel vector, when one exists.
    pub positive_vector: Option<Vec<BigInt>>,
    /// Dimension of the variety.
    pub dimension: usize,
    /// Hilbert basis of the nonnegative kernel: the monomial
    /// parametrization exponents, one column per monomial.
    pub basis: HilbertBasis,
    /// Basis of the integer kernel of the basis matrix, one column per
    /// independent multiplicative relation among the monomials.
    pub kernel: IntMat,
    /// The normalization is an affine space exactly when the kernel is
    /// trivial.
    pub normalization_is_affine_space: bool,
    pub local_irreducibility: LocalIrreducibility,
}

impl ToricProfile {
    pub fn presentation(&self) -> &LatticePresentation {
        &self.basis.presentation
    }

    /// Number of parametrizing monomials.
    pub fn monomial_count(&self) -> usize {
        self.basis.len()
    }

    /// Rank of the kernel of the basis matrix.
    pub fn kernel_rank(&self) -> usize {
        self.kernel.cols()
    }
}

/// The axis gcd test. Restricting the parametrization to axis `i`
/// leaves exactly the coordinates whose exponent row is supported at
/// `i` alone; that one-variable map is injective precisely when the
/// gcd of those exponents is one. Requires a trivial kernel and a
/// prime presentation through the origin; a column with no row
/// supported only at it signals inconsistent input.
pub fn is_locally_irreducible(basis: &HilbertBasis) -> Result<LocalIrreducibility> {
    let b = &basis.matrix;
    let mut offending = Vec::new();
    for i in 0..b.cols() {
        let mut g = BigInt::zero();
        let mut seen = false;
        for r in 0..b.rows() {
            let supported_here = b.get(r, i).is_positive();
            let elsewhere = (0..b.cols()).any(|j| j != i && b.get(r, j).is_positive());
            if supported_here && !elsewhere {
                seen = true;
                g = num_integer::gcd(g, b.get(r, i).clone());
            }
        }
        if !seen {
            return Err(Error::MissingDiagonalRow { column: i });
        }
        if g > BigInt::one() {
            offending.push((i, g));
        }
    }
    if offending.is_empty() {
        Ok(LocalIrreducibility::Irreducible)
    } else {
        Ok(LocalIrreducibility::NotIrreducible { column_gcds: offending })
    }
}

/// Classify a presentation: primality, origin membership with the
/// canonical positive kernel vector, dimension, the Hilbert basis of
/// parametrizing monomials, the kernel of multiplicative relations,
/// normalization shape, and local irreducibility where decidable.
pub fn classify(p: &LatticePresentation) -> ToricProfile {
    let a = p.relations();
    let is_prime = intlin::is_torsion_free_quotient(a);
    let basis = hilbert::hilbert_basis(p);
    let positive_vector = hilbert::positive_vector_from_basis(&basis);
    let contains_origin = positive_vector.is_some();
    let dimension = p.coords() - intlin::rank(a);
    let kernel = intlin::kernel_basis(&basis.matrix);
    let normalization_is_affine_space = kernel.cols() == 0;
    debug_assert!(basis.matrix.mul(&kernel).is_zero());

    let local_irreducibility =
        if normalization_is_affine_space && is_prime && contains_origin {
            is_locally_irreducible(&basis)
                .expect("diagonal rows exist for a prime presentation through the origin with trivial kernel")
        } else {
            LocalIrreducibility::NotComputed
        };

    ToricProfile {
        is_prime,
        contains_origin,
        positive_vector,
        dimension,
        basis,
        kernel,
        normalization_is_affine_space,
        local_irreducibility,
    }
}

fn rat_pow(base: &BigRational, exp: &BigInt) -> BigRational {
    assert!(!exp.is_negative(), "monomial exponents are nonnegative");
    if exp.is_zero() {
        return BigRational::one();
    }
    if base.is_zero() {
        return BigRational::zero();
    }
    let mut e = exp.to_biguint().unwrap();
    let mut result = BigRational::one();
    let mut sq = base.clone();
    loop {
        if e.bit(0) {
            result *= &sq;
        }
        e >>= 1u32;
        if e.is_zero() {
            break;
        }
        sq = &sq * &sq;
    }
    result
}

/// Evaluate the monomial parametrization at a rational point, one
/// parameter per basis column: coordinate `i` of the image is
/// `prod_j t_j ^ B[i][j]`, with the convention `0^0 = 1`.
pub fn evaluate_monomial_map(basis: &HilbertBasis, t: &[BigRational]) -> Vec<BigRational> {
    let b = &basis.matrix;
    assert_eq!(t.len(), b.cols(), "evaluation point has wrong length");
    (0..b.rows())
        .map(|i| {
            let mut value = BigRational::one();
            for (j, tj) in t.iter().enumerate() {
                value *= rat_pow(tj, b.get(i, j));
            }
            value
        })
        .collect()
}
