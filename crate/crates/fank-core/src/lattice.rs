//! Sublattices of Z^n with canonical bases: spans, membership with
//! coefficients, containment, ambient index, primitivity, and orthogonal
//! complements.

use crate::matrix::{self, IntMatrix, Vector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("zero vector has no primitive form")]
    ZeroVector,
    #[error("ambient rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
}

/// A sublattice of Z^n. `basis` columns form a Z-basis, stored canonically
/// (transposed row Hermite form), so equal lattices compare structurally equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lattice {
    pub ambient_rank: usize,
    pub basis: IntMatrix,
}

impl Lattice {
    pub fn rank(&self) -> usize {
        self.basis.cols
    }

    pub fn is_zero(&self) -> bool {
        self.basis.cols == 0
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        (0..self.basis.cols).map(|j| self.basis.col(j)).collect()
    }

    /// Index [Z^n : L] when L has full rank; None otherwise.
    pub fn index_in_ambient(&self) -> Option<BigInt> {
        if self.rank() == self.ambient_rank {
            Some(matrix::det(&self.basis).abs())
        } else {
            None
        }
    }
}

/// The lattice Z-spanned by the given vectors, with canonical basis.
pub fn hermite_basis(ambient_rank: usize, vectors: &[Vector]) -> Lattice {
    for v in vectors {
        assert_eq!(v.len(), ambient_rank, "vector length mismatch");
    }
    let rows = matrix::hermite_rows(&IntMatrix::from_rows(vectors));
    let basis = if rows.is_empty() {
        IntMatrix::zeros(ambient_rank, 0)
    } else {
        IntMatrix::from_cols(&rows)
    };
    Lattice {
        ambient_rank,
        basis,
    }
}

/// v divided by the gcd of its entries; direction (signs) preserved.
pub fn primitive(v: &[BigInt]) -> Result<Vector, LatticeError> {
    let mut g = BigInt::zero();
    for e in v {
        g = g.gcd(e);
    }
    if g.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    Ok(v.iter().map(|e| e / &g).collect())
}

/// Some(coefficients in the canonical basis) if v ∈ L, None otherwise.
pub fn lattice_contains(l: &Lattice, v: &[BigInt]) -> Result<Option<Vector>, LatticeError> {
    if v.len() != l.ambient_rank {
        return Err(LatticeError::RankMismatch(l.ambient_rank, v.len()));
    }
    Ok(matrix::solve(&l.basis, v))
}

/// true iff L ⊆ L′, i.e. every basis vector of L lies in L′.
pub fn lattice_leq(l: &Lattice, lp: &Lattice) -> Result<bool, LatticeError> {
    if l.ambient_rank != lp.ambient_rank {
        return Err(LatticeError::RankMismatch(l.ambient_rank, lp.ambient_rank));
    }
    for v in l.basis_vectors() {
        if lattice_contains(lp, &v)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanReport {
    /// Z-span of the inputs equals all of Z^n.
    pub spans: bool,
    /// [Z^n : span] when the span has full rank; None otherwise.
    pub index: Option<BigInt>,
}

/// Whether the vectors Z-span Z^n, with the ambient index when full rank.
pub fn spans_ambient(ambient_rank: usize, vectors: &[Vector]) -> SpanReport {
    let l = hermite_basis(ambient_rank, vectors);
    let index = l.index_in_ambient();
    SpanReport {
        spans: index.as_ref().is_some_and(|x| x.is_one()),
        index,
    }
}

/// The saturated lattice { m ∈ Z^n : ⟨m,u⟩ = 0 for all generators u }.
pub fn perp_lattice(ambient_rank: usize, generators: &[Vector]) -> Lattice {
    if generators.is_empty() {
        let id = IntMatrix::identity(ambient_rank).rows_to_vec();
        return hermite_basis(ambient_rank, &id);
    }
    let kernel = matrix::kernel_basis(&IntMatrix::from_rows(generators));
    hermite_basis(ambient_rank, &kernel)
}

/// Saturation L^sat = (L ⊗ Q) ∩ Z^n, via two orthogonal complements.
pub fn saturation(l: &Lattice) -> Lattice {
    let perp = perp_lattice(l.ambient_rank, &l.basis_vectors());
    perp_lattice(l.ambient_rank, &perp.basis_vectors())
}
