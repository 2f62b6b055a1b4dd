//! Lattice ideals in the Laurent ring: ideals generated by Euler classes
//! 1 − α^ν, with normal-form reduction, membership, cofactor witnesses, sums,
//! and containment. Membership depends only on the lattice spanned by the
//! generator exponents, so reduction works in the quotient Z^n / L.

use crate::lattice::{self, Lattice};
use crate::laurent::{euler_class, LaurentPoly};
use crate::matrix::{self, IntMatrix, Vector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IdealError {
    #[error("polynomial is not a member; nonzero normal form {0}")]
    NotAMember(LaurentPoly),
    #[error("variable count mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
}

/// The ideal ⟨1 − α^{ν_j}⟩ of Z[α_1^{±1},…,α_n^{±1}] for the stored generator
/// exponents ν_j. Semantically determined by `lattice` = span of the ν_j.
#[derive(Clone, Debug)]
pub struct LatticeIdeal {
    pub n: usize,
    pub generators: Vec<Vector>,
    pub lattice: Lattice,
    rep_u: IntMatrix,
    rep_u_inv: IntMatrix,
    rep_diag: Vec<BigInt>,
}

impl LatticeIdeal {
    pub fn new(n: usize, generators: Vec<Vector>) -> Self {
        for g in &generators {
            assert_eq!(g.len(), n, "generator length mismatch");
        }
        let lattice = lattice::hermite_basis(n, &generators);
        let s = matrix::smith_normal_form(&lattice.basis);
        let rep_diag = (0..s.rank).map(|i| s.d.get(i, i).clone()).collect();
        LatticeIdeal {
            n,
            generators,
            lattice,
            rep_u: s.u,
            rep_u_inv: s.u_inv,
            rep_diag,
        }
    }

    /// The ideal of a lattice, generated by Euler classes of its basis.
    pub fn from_lattice(l: &Lattice) -> Self {
        LatticeIdeal::new(l.ambient_rank, l.basis_vectors())
    }

    pub fn zero_ideal(n: usize) -> Self {
        LatticeIdeal::new(n, Vec::new())
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.lattice.is_zero()
    }

    /// Generators as polynomials 1 − α^{ν_j}.
    pub fn generator_polys(&self) -> Vec<LaurentPoly> {
        self.generators.iter().map(|nu| euler_class(nu)).collect()
    }

    /// Canonical representative of the coset u + L: smallest nonnegative
    /// residues in the Smith coordinates of L, pulled back.
    pub fn canonical_rep(&self, u: &[BigInt]) -> Vector {
        let mut w = self.rep_u.mul_vec(u);
        for (i, d) in self.rep_diag.iter().enumerate() {
            w[i] = w[i].mod_floor(d);
        }
        self.rep_u_inv.mul_vec(&w)
    }
}

/// Normal form of f modulo J: every exponent is replaced by its canonical
/// coset representative and coefficients merge. Zero iff f ∈ J; Z-linear and
/// idempotent.
pub fn reduce(f: &LaurentPoly, j: &LatticeIdeal) -> LaurentPoly {
    assert_eq!(f.n, j.n, "variable count mismatch");
    let mut out = LaurentPoly::zero(f.n);
    for (e, c) in f.terms() {
        let rep = j.canonical_rep(e);
        out = &out + &LaurentPoly::monomial(f.n, rep, c.clone());
    }
    out
}

pub fn contains(f: &LaurentPoly, j: &LatticeIdeal) -> bool {
    reduce(f, j).is_zero()
}

/// f ≡ g (mod J).
pub fn eq_mod(f: &LaurentPoly, g: &LaurentPoly, j: &LatticeIdeal) -> bool {
    contains(&(f - g), j)
}

/// Cofactors a_1,…,a_r with f = Σ a_j·(1 − α^{ν_j}) exactly, one per stored
/// generator. Each term's exponent walks to its canonical coset representative
/// along integer generator coordinates, telescoping one generator step at a
/// time: a downward step w → w−ν contributes −α^{w−ν} (from
/// α^w − α^{w−ν} = −α^{w−ν}(1−α^ν)), an upward step w → w+ν contributes +α^w
/// (from α^w − α^{w+ν} = α^w(1−α^ν)). Steps are taken in stored generator
/// order.
pub fn cofactors(f: &LaurentPoly, j: &LatticeIdeal) -> Result<Vec<LaurentPoly>, IdealError> {
    if f.n != j.n {
        return Err(IdealError::RankMismatch(f.n, j.n));
    }
    let remainder = reduce(f, j);
    if !remainder.is_zero() {
        return Err(IdealError::NotAMember(remainder));
    }
    let gen_matrix = if j.generators.is_empty() {
        IntMatrix::zeros(j.n, 0)
    } else {
        IntMatrix::from_cols(&j.generators)
    };
    let mut out = vec![LaurentPoly::zero(f.n); j.generators.len()];
    for (u, c) in f.terms() {
        let rep = j.canonical_rep(u);
        let delta: Vector = u.iter().zip(&rep).map(|(a, b)| a - b).collect();
        if delta.iter().all(|x| x.is_zero()) {
            continue;
        }
        let coords = matrix::solve(&gen_matrix, &delta)
            .expect("member's coset offset must lie in the generator span");
        let mut w = u.to_vec();
        for (jdx, x) in coords.iter().enumerate() {
            let nu = &j.generators[jdx];
            let steps: i64 = x.abs().try_into().expect("step count fits in i64");
            for _ in 0..steps {
                if x.is_positive() {
                    // Downward: w → w − ν.
                    for (wk, nk) in w.iter_mut().zip(nu) {
                        *wk -= nk;
                    }
                    out[jdx] = &out[jdx] - &LaurentPoly::monomial(f.n, w.clone(), c.clone());
                } else {
                    // Upward: w → w + ν.
                    out[jdx] = &out[jdx] + &LaurentPoly::monomial(f.n, w.clone(), c.clone());
                    for (wk, nk) in w.iter_mut().zip(nu) {
                        *wk += nk;
                    }
                }
            }
        }
        debug_assert_eq!(w, rep, "walk must end at the canonical representative");
    }
    // Verify by expansion.
    let mut expanded = LaurentPoly::zero(f.n);
    for (a, nu) in out.iter().zip(&j.generators) {
        expanded = &expanded + &(a * &euler_class(nu));
    }
    assert_eq!(&expanded, f, "cofactor expansion must reproduce the input");
    Ok(out)
}

/// Generator lists concatenate; the lattice is the span of the union.
pub fn ideal_sum(j1: &LatticeIdeal, j2: &LatticeIdeal) -> LatticeIdeal {
    assert_eq!(j1.n, j2.n, "variable count mismatch");
    let mut gens = j1.generators.clone();
    gens.extend_from_slice(&j2.generators);
    LatticeIdeal::new(j1.n, gens)
}

/// J_L ≤ J_{L′} ⟺ L ≤ L′.
pub fn ideal_leq(j1: &LatticeIdeal, j2: &LatticeIdeal) -> bool {
    lattice::lattice_leq(&j1.lattice, &j2.lattice).expect("matching ambient rank")
}

/// The ideal J_σ of a cone: generated by 1 − α^ν for ν a basis of the
/// sublattice of exponents orthogonal to every ray of σ. A full-dimensional
/// cone gives the zero ideal; the zero cone gives ⟨1 − α_1, …, 1 − α_n⟩.
pub fn cone_ideal(cone: &crate::cone::Cone) -> LatticeIdeal {
    LatticeIdeal::from_lattice(&lattice::perp_lattice(cone.n, &cone.rays))
}

/// Polynomial-ring side membership for binomial generators: x^u − x^v lies in
/// the polynomial lattice ideal of L iff u − v ∈ L.
pub fn binomial_in_poly_lattice_ideal(u: &[BigInt], v: &[BigInt], l: &Lattice) -> bool {
    assert!(
        u.iter().all(|x| !x.is_negative()) && v.iter().all(|x| !x.is_negative()),
        "binomial exponents must be nonnegative"
    );
    let diff: Vector = u.iter().zip(v).map(|(a, b)| a - b).collect();
    lattice::lattice_contains(l, &diff)
        .expect("matching ambient rank")
        .is_some()
}
