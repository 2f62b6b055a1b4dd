//! Strongly convex rational polyhedral cones: construction from ray
//! generators, facet enumeration by double description, the full face
//! lattice, membership, and pairwise intersection with face validation.

use crate::lattice::{self, Lattice};
use crate::matrix::{self, IntMatrix, Vector};
use crate::ratlp::{self, Constraint, Rel};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConeError {
    #[error("zero vector cannot generate a ray")]
    ZeroRay,
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("cone is not strongly convex: both {witness:?} and its negative lie in the cone")]
    NotStronglyConvex { witness: Vector },
    #[error("intersection {rays:?} is not a common face")]
    NotAFace { rays: Vec<Vector> },
}

/// A strongly convex rational polyhedral cone in Z^n. Rays are primitive,
/// irredundant, and sorted, so equal cones compare structurally equal.
#[derive(Clone)]
pub struct Cone {
    pub n: usize,
    pub rays: Vec<Vector>,
    dim: usize,
    /// Saturated basis of the linear span (dim columns of an n×dim matrix).
    span_basis: Vec<Vector>,
    /// Facet normals in span coordinates; ⟨m, x⟩ ≥ 0 on the cone.
    facet_normals_span: Vec<Vector>,
    /// The same normals expressed in ambient Z^n (valid on the span).
    facet_normals_ambient: Vec<Vector>,
    /// Ray-index sets of the facets, parallel to the normals.
    facet_ray_sets: Vec<BTreeSet<usize>>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rays == other.rays
    }
}
impl Eq for Cone {}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cone[n={}, dim={}, rays={:?}]", self.n, self.dim, self.rays)
    }
}

impl Cone {
    pub fn zero(n: usize) -> Cone {
        Cone {
            n,
            rays: Vec::new(),
            dim: 0,
            span_basis: Vec::new(),
            facet_normals_span: Vec::new(),
            facet_normals_ambient: Vec::new(),
            facet_ray_sets: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty()
    }

    /// Ray count equals dimension.
    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim
    }

    /// Rays form part of a Z-basis of Z^n: simplicial with all Smith diagonal
    /// entries equal to 1.
    pub fn is_smooth(&self) -> bool {
        if !self.is_simplicial() {
            return false;
        }
        if self.rays.is_empty() {
            return true;
        }
        let s = matrix::smith_normal_form(&IntMatrix::from_cols(&self.rays));
        s.rank == self.rays.len() && (0..s.rank).all(|i| s.d.get(i, i).is_one())
    }

    pub fn facet_count(&self) -> usize {
        self.facet_normals_span.len()
    }

    /// Facet normals in ambient coordinates; each satisfies ⟨m, ray⟩ ≥ 0 for
    /// every ray, with equality exactly on the corresponding facet. Only the
    /// restriction to the span of the cone is meaningful.
    pub fn facet_normals(&self) -> &[Vector] {
        &self.facet_normals_ambient
    }

    pub fn facet_ray_sets(&self) -> &[BTreeSet<usize>] {
        &self.facet_ray_sets
    }

    /// Saturated lattice of the linear span.
    pub fn span_lattice(&self) -> Lattice {
        lattice::hermite_basis(self.n, &self.span_basis)
    }

    /// All face ray-index sets, excluding the cone itself: closure of the
    /// facet ray sets under pairwise intersection.
    pub fn proper_face_ray_sets(&self) -> BTreeSet<BTreeSet<usize>> {
        let mut sets: BTreeSet<BTreeSet<usize>> =
            self.facet_ray_sets.iter().cloned().collect();
        loop {
            let mut fresh: Vec<BTreeSet<usize>> = Vec::new();
            for a in &sets {
                for b in &sets {
                    let i: BTreeSet<usize> = a.intersection(b).cloned().collect();
                    if !sets.contains(&i) {
                        fresh.push(i);
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            sets.extend(fresh);
        }
        sets
    }

    fn subcone(&self, ray_set: &BTreeSet<usize>) -> Cone {
        let rays: Vec<Vector> = ray_set.iter().map(|&i| self.rays[i].clone()).collect();
        cone_from_rays(self.n, &rays).expect("face of a valid cone is a valid cone")
    }

    /// Every face, including the zero cone and the cone itself.
    pub fn faces(&self) -> Vec<Cone> {
        let mut out: Vec<Cone> = self
            .proper_face_ray_sets()
            .iter()
            .map(|s| self.subcone(s))
            .collect();
        out.push(self.clone());
        out
    }

    pub fn faces_of_dim(&self, k: usize) -> Vec<Cone> {
        self.faces().into_iter().filter(|c| c.dim == k).collect()
    }

    /// Faces of dimension dim−1.
    pub fn facets(&self) -> Vec<Cone> {
        self.facet_ray_sets
            .iter()
            .map(|s| self.subcone(s))
            .collect()
    }

    /// Integer-point membership: inside the span and on the nonnegative side
    /// of every facet.
    pub fn contains(&self, x: &[BigInt]) -> bool {
        assert_eq!(x.len(), self.n, "ambient dimension mismatch");
        if x.iter().all(|c| c.is_zero()) {
            return true;
        }
        if self.dim == 0 {
            return false;
        }
        let span = IntMatrix::from_cols(&self.span_basis);
        // Solve over Q by checking integer solvability after clearing to the
        // saturated basis: an integer point of the rational span always has
        // integer coordinates in a saturated basis.
        let Some(coords) = matrix::solve(&span, x) else {
            return false;
        };
        self.facet_normals_span
            .iter()
            .all(|m| !matrix::dot(m, &coords).is_negative())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.rays.iter().all(|r| self.contains(r))
    }

    pub fn has_ray(&self, r: &[BigInt]) -> bool {
        self.rays.iter().any(|x| x[..] == r[..])
    }

    /// Index set of `sub`'s rays within this cone's ray list, when every ray
    /// is present.
    pub fn ray_index_set(&self, sub: &Cone) -> Option<BTreeSet<usize>> {
        let mut out = BTreeSet::new();
        for r in &sub.rays {
            let i = self.rays.iter().position(|x| x == r)?;
            out.insert(i);
        }
        Some(out)
    }

    /// Whether `face` is a face of this cone (combinatorial test over the
    /// canonical ray sets).
    pub fn is_face(&self, face: &Cone) -> bool {
        if face.n != self.n {
            return false;
        }
        if face.rays == self.rays {
            return true;
        }
        match self.ray_index_set(face) {
            None => false,
            Some(set) => self.proper_face_ray_sets().contains(&set),
        }
    }

    /// A point in the relative interior: the sum of all rays (origin for the
    /// zero cone).
    pub fn interior_point(&self) -> Vector {
        let mut out = vec![BigInt::zero(); self.n];
        for r in &self.rays {
            for (o, c) in out.iter_mut().zip(r) {
                *o += c;
            }
        }
        out
    }
}

/// Extreme rays of {x ∈ R^d : ⟨a, x⟩ ≥ 0 for all a in normals}, by incremental
/// double description with the combinatorial adjacency test. The result must
/// be pointed, which forces the normals to span R^d.
fn extreme_rays_from_inequalities(d: usize, normals: &[Vector]) -> Vec<Vector> {
    if d == 0 {
        return Vec::new();
    }
    let nonzero: Vec<Vector> = normals
        .iter()
        .filter(|a| !a.iter().all(|c| c.is_zero()))
        .cloned()
        .collect();
    // Greedy independent subset for the simplicial start.
    let mut chosen: Vec<usize> = Vec::new();
    for (i, a) in nonzero.iter().enumerate() {
        if chosen.len() == d {
            break;
        }
        let mut rows: Vec<Vector> = chosen.iter().map(|&k| nonzero[k].clone()).collect();
        rows.push(a.clone());
        if matrix::rank(&IntMatrix::from_rows(&rows)) == rows.len() {
            chosen.push(i);
        }
    }
    assert_eq!(
        chosen.len(),
        d,
        "inequality normals must span; the described cone would contain a line"
    );
    let mut order: Vec<usize> = chosen.clone();
    order.extend((0..nonzero.len()).filter(|i| !chosen.contains(i)));
    let ordered: Vec<Vector> = order.iter().map(|&i| nonzero[i].clone()).collect();

    let a0 = IntMatrix::from_rows(&ordered[0..d]);
    let adj = matrix::adjugate(&a0).expect("chosen rows are independent");
    let det = matrix::det(&a0);
    let sign = if det.is_negative() { -1i64 } else { 1i64 };
    // Columns e_k of sign·adj satisfy ⟨a_j, e_k⟩ = |det|·δ_jk ≥ 0.
    let mut gens: Vec<Vector> = (0..d)
        .map(|k| {
            let col: Vector = adj.col(k).iter().map(|c| c * BigInt::from(sign)).collect();
            lattice::primitive(&col).expect("adjugate column of a nonsingular matrix")
        })
        .collect();

    let tight = |g: &Vector, upto: usize| -> BTreeSet<usize> {
        (0..upto)
            .filter(|&j| matrix::dot(&ordered[j], g).is_zero())
            .collect()
    };

    for m in d..ordered.len() {
        let a = &ordered[m];
        let vals: Vec<BigInt> = gens.iter().map(|g| matrix::dot(a, g)).collect();
        let pos: Vec<usize> = (0..gens.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..gens.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            continue;
        }
        let tights: Vec<BTreeSet<usize>> = gens.iter().map(|g| tight(g, m)).collect();
        let mut next: Vec<Vector> = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            if !vals[i].is_negative() {
                next.push(g.clone());
            }
        }
        for &p in &pos {
            for &q in &neg {
                let common: BTreeSet<usize> =
                    tights[p].intersection(&tights[q]).cloned().collect();
                let blocked = (0..gens.len()).any(|r| {
                    r != p && r != q && common.is_subset(&tight(&gens[r], m))
                });
                if blocked {
                    continue;
                }
                let w: Vector = gens[q]
                    .iter()
                    .zip(&gens[p])
                    .map(|(qc, pc)| &vals[p] * qc - &vals[q] * pc)
                    .collect();
                let w = lattice::primitive(&w).expect("combination of extreme rays is nonzero");
                if !next.contains(&w) {
                    next.push(w);
                }
            }
        }
        gens = next;
    }
    gens.sort();
    gens.dedup();
    gens
}

/// Strong convexity certificate: a rational functional strictly positive on
/// all rays. On failure, a ray whose negative also lies in the cone.
fn check_strongly_convex(n: usize, rays: &[Vector]) -> Result<(), ConeError> {
    if rays.is_empty() {
        return Ok(());
    }
    let cons: Vec<Constraint> = rays
        .iter()
        .map(|r| Constraint::from_int(r, Rel::Ge, 1))
        .collect();
    if ratlp::feasible(n, false, &cons).is_some() {
        return Ok(());
    }
    // Witness: nonnegative combination of rays summing to zero with mass 1;
    // any ray with positive weight has its negative in the cone.
    let k = rays.len();
    let mut cons: Vec<Constraint> = Vec::new();
    for coord in 0..n {
        let coeffs: Vector = rays.iter().map(|r| r[coord].clone()).collect();
        cons.push(Constraint::from_int(&coeffs, Rel::Eq, 0));
    }
    cons.push(Constraint::from_int(&vec![BigInt::from(1); k], Rel::Eq, 1));
    let lambda = ratlp::feasible(k, true, &cons)
        .expect("a non-pointed finitely generated cone has a vanishing convex combination");
    let witness_idx = (0..k)
        .find(|&i| lambda[i].is_positive())
        .expect("combination has positive mass");
    Err(ConeError::NotStronglyConvex {
        witness: rays[witness_idx].clone(),
    })
}

pub fn cone_from_rays(n: usize, raw_rays: &[Vector]) -> Result<Cone, ConeError> {
    let mut rays: Vec<Vector> = Vec::new();
    for r in raw_rays {
        if r.len() != n {
            return Err(ConeError::AmbientMismatch(n, r.len()));
        }
        let p = lattice::primitive(r).map_err(|_| ConeError::ZeroRay)?;
        if !rays.contains(&p) {
            rays.push(p);
        }
    }
    if rays.is_empty() {
        return Ok(Cone::zero(n));
    }
    check_strongly_convex(n, &rays)?;

    let span = lattice::saturation(&lattice::hermite_basis(n, &rays));
    let d = span.rank();
    let span_basis = span.basis_vectors();
    let span_matrix = IntMatrix::from_cols(&span_basis);
    let ray_coords: Vec<Vector> = rays
        .iter()
        .map(|r| matrix::solve(&span_matrix, r).expect("ray lies in the saturated span"))
        .collect();

    // Facet normals of the cone = extreme rays of its dual, cut out by the
    // ray inequalities in span coordinates.
    let facet_normals_span = extreme_rays_from_inequalities(d, &ray_coords);

    // Drop non-extreme input rays: a ray is extreme iff its tight normals
    // span a hyperplane of the span.
    let mut keep: Vec<usize> = Vec::new();
    for (i, c) in ray_coords.iter().enumerate() {
        let tight: Vec<Vector> = facet_normals_span
            .iter()
            .filter(|m| matrix::dot(m, c).is_zero())
            .cloned()
            .collect();
        let extreme = if d == 1 {
            true
        } else {
            !tight.is_empty() && matrix::rank(&IntMatrix::from_rows(&tight)) == d - 1
        };
        if extreme {
            keep.push(i);
        }
    }
    let mut kept: Vec<(Vector, Vector)> = keep
        .into_iter()
        .map(|i| (rays[i].clone(), ray_coords[i].clone()))
        .collect();
    kept.sort();
    let rays: Vec<Vector> = kept.iter().map(|(r, _)| r.clone()).collect();
    let ray_coords: Vec<Vector> = kept.iter().map(|(_, c)| c.clone()).collect();

    let facet_ray_sets: Vec<BTreeSet<usize>> = facet_normals_span
        .iter()
        .map(|m| {
            (0..rays.len())
                .filter(|&i| matrix::dot(m, &ray_coords[i]).is_zero())
                .collect()
        })
        .collect();

    // Ambient representatives: solve spanᵀ·m = normal (surjective since the
    // span basis is saturated).
    let span_t = span_matrix.transpose();
    let facet_normals_ambient: Vec<Vector> = facet_normals_span
        .iter()
        .map(|m| matrix::solve(&span_t, m).expect("saturated span transpose is surjective"))
        .collect();

    Ok(Cone {
        n,
        rays,
        dim: d,
        span_basis,
        facet_normals_span,
        facet_normals_ambient,
        facet_ray_sets,
    })
}

/// Geometric intersection, validated to be a common face of both cones.
pub fn intersect(c1: &Cone, c2: &Cone) -> Result<Cone, ConeError> {
    assert_eq!(c1.n, c2.n, "ambient dimension mismatch");
    let n = c1.n;
    // Span of the intersection ambient: saturated intersection of the spans.
    let perp1 = lattice::perp_lattice(n, &c1.span_basis);
    let perp2 = lattice::perp_lattice(n, &c2.span_basis);
    let mut both = perp1.basis_vectors();
    both.extend(perp2.basis_vectors());
    let common_span = lattice::perp_lattice(n, &both);
    let v = common_span.rank();
    let inter = if v == 0 {
        Cone::zero(n)
    } else {
        let basis = common_span.basis_vectors();
        let b = IntMatrix::from_cols(&basis);
        let bt = b.transpose();
        let mut pulled: Vec<Vector> = Vec::new();
        for m in c1.facet_normals().iter().chain(c2.facet_normals()) {
            pulled.push(bt.mul_vec(m));
        }
        let gens_v = extreme_rays_from_inequalities(v, &pulled);
        let gens: Vec<Vector> = gens_v.iter().map(|g| b.mul_vec(g)).collect();
        cone_from_rays(n, &gens).expect("intersection of pointed cones is pointed")
    };
    if c1.is_face(&inter) && c2.is_face(&inter) {
        Ok(inter)
    } else {
        Err(ConeError::NotAFace { rays: inter.rays })
    }
}
