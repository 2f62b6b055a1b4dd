//! Piecewise Laurent polynomials on a fan, and the gluing constructions:
//! preimages across clump boundaries, across splittings of complete 2D fans,
//! across cone boundaries, and extensions over smooth cones and fans.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;
use thiserror::Error;

use crate::cone::{cone_from_rays, Cone};
use crate::fan::{Clump, Fan};
use crate::ideal::{
    cofactors, cone_ideal, contains, ideal_sum, reduce, LatticeIdeal,
};
use crate::lattice;
use crate::laurent::{euler_class, LaurentPoly};
use crate::matrix::{smith_normal_form, solve, IntMatrix, Vector};

#[derive(Debug, Error)]
pub enum PlpError {
    #[error("expected {expected} values (one per maximal cone), got {got}")]
    ValueCount { expected: usize, got: usize },
    #[error("value on cone {cone} has {got} variables, the fan is {expected}-dimensional")]
    VariableCount {
        cone: usize,
        expected: usize,
        got: usize,
    },
    #[error("values on cones {i} and {j} differ across their common face: residue {witness}")]
    IncompatiblePair {
        i: usize,
        j: usize,
        witness: LaurentPoly,
    },
    #[error("operands live on different fans")]
    FanMismatch,
    #[error("not a subfan")]
    NotASubfan,
    #[error("the subfan is empty")]
    EmptySubfan,
    #[error("not smooth")]
    NotSmooth,
    #[error("not in the image: residue {witness}")]
    NotInImage { witness: LaurentPoly },
}

/// A piecewise Laurent polynomial: one representative per maximal cone,
/// congruent across each common face modulo that face's ideal. Values are
/// representatives; equality of the underlying piecewise function is always
/// modulo the maximal-cone ideals, never syntactic.
#[derive(Clone, Debug)]
pub struct PiecewisePoly {
    pub fan: Arc<Fan>,
    /// Aligned with fan.max_cones.
    pub values: Vec<LaurentPoly>,
}

/// Ideal of σ_i ∩ σ_j. In a validated fan the intersection is the cone on
/// the shared rays.
fn common_face_ideal(fan: &Fan, i: usize, j: usize) -> LatticeIdeal {
    let common: Vec<Vector> = fan.max_cone_ray_sets[i]
        .intersection(&fan.max_cone_ray_sets[j])
        .map(|&r| fan.rays[r].clone())
        .collect();
    let face = cone_from_rays(fan.n, &common).expect("face of a fan cone");
    cone_ideal(&face)
}

/// Checks every pairwise compatibility and wraps the values.
pub fn plp_validate(fan: Arc<Fan>, values: Vec<LaurentPoly>) -> Result<PiecewisePoly, PlpError> {
    if values.len() != fan.max_cones.len() {
        return Err(PlpError::ValueCount {
            expected: fan.max_cones.len(),
            got: values.len(),
        });
    }
    for (i, v) in values.iter().enumerate() {
        if v.n != fan.n {
            return Err(PlpError::VariableCount {
                cone: i,
                expected: fan.n,
                got: v.n,
            });
        }
    }
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            let ideal = common_face_ideal(&fan, i, j);
            let w = reduce(&(&values[i] - &values[j]), &ideal);
            if !w.is_zero() {
                return Err(PlpError::IncompatiblePair { i, j, witness: w });
            }
        }
    }
    Ok(PiecewisePoly { fan, values })
}

fn same_fan(f: &PiecewisePoly, g: &PiecewisePoly) -> Result<(), PlpError> {
    if Arc::ptr_eq(&f.fan, &g.fan) || *f.fan == *g.fan {
        Ok(())
    } else {
        Err(PlpError::FanMismatch)
    }
}

pub fn plp_add(f: &PiecewisePoly, g: &PiecewisePoly) -> Result<PiecewisePoly, PlpError> {
    same_fan(f, g)?;
    let values = f.values.iter().zip(&g.values).map(|(a, b)| a + b).collect();
    Ok(PiecewisePoly {
        fan: f.fan.clone(),
        values,
    })
}

pub fn plp_mul(f: &PiecewisePoly, g: &PiecewisePoly) -> Result<PiecewisePoly, PlpError> {
    same_fan(f, g)?;
    let values = f.values.iter().zip(&g.values).map(|(a, b)| a * b).collect();
    Ok(PiecewisePoly {
        fan: f.fan.clone(),
        values,
    })
}

/// Equality modulo the maximal-cone ideals. Full-dimensional maximal cones
/// carry the zero ideal, so there the comparison is exact.
pub fn plp_eq(f: &PiecewisePoly, g: &PiecewisePoly) -> Result<bool, PlpError> {
    same_fan(f, g)?;
    Ok(f.values.iter().zip(&g.values).zip(&f.fan.max_cones).all(
        |((a, b), c)| {
            let w = reduce(&(a - b), &cone_ideal(c));
            w.is_zero()
        },
    ))
}

/// Restriction along a subfan inclusion Γ ⊆ Σ: each maximal cone of Γ takes
/// the value of a maximal cone of Σ containing it (well defined modulo the
/// smaller cone's ideal).
pub fn sharp_restrict(f: &PiecewisePoly, gamma: Arc<Fan>) -> Result<PiecewisePoly, PlpError> {
    if gamma.n != f.fan.n {
        return Err(PlpError::NotASubfan);
    }
    let mut values = Vec::with_capacity(gamma.max_cones.len());
    for g in &gamma.max_cones {
        let i = f
            .fan
            .max_cones
            .iter()
            .position(|s| s.is_face(g))
            .ok_or(PlpError::NotASubfan)?;
        values.push(f.values[i].clone());
    }
    Ok(PiecewisePoly { fan: gamma, values })
}

/// Generators of the ray ideals J_{ρ_1}, …, J_{ρ_{k+1}} of a clump, in the
/// clump's ray order: each ray contributes the canonical basis vector of its
/// rank-one orthogonal lattice.
pub(crate) fn clump_ray_ideal_generators(clump: &Clump) -> Vec<Vector> {
    clump
        .rays
        .iter()
        .map(|r| {
            let perp = lattice::perp_lattice(clump.n, std::slice::from_ref(r));
            assert_eq!(perp.rank(), clump.n - 1, "ray orthogonal lattice rank");
            perp.basis.col(0)
        })
        .collect()
}

/// Whether the pair (f, g) on the two outer rays of a clump extends to a
/// piecewise value on the whole clump: f − g must lie in the sum of the ray
/// ideals.
pub fn clump_boundary_image_test(f: &LaurentPoly, g: &LaurentPoly, clump: &Clump) -> bool {
    let sum = LatticeIdeal::new(clump.n, clump_ray_ideal_generators(clump));
    contains(&(f - g), &sum)
}

/// Telescoping preimage on a clump σ_1, …, σ_k with rays ρ_1, …, ρ_{k+1}:
/// writes f − g = Σ a_i e(ρ_i) and peels one term per wall,
/// F_1 = f − a_1 e(ρ_1), F_i = F_{i−1} − a_i e(ρ_i). The output restricts to
/// f at ρ_1 and to g at ρ_{k+1}, modulo the ray ideals.
pub fn clump_boundary_preimage(
    f: &LaurentPoly,
    g: &LaurentPoly,
    clump: &Clump,
) -> Result<PiecewisePoly, PlpError> {
    let gens = clump_ray_ideal_generators(clump);
    let sum = LatticeIdeal::new(clump.n, gens.clone());
    let diff = f - g;
    let a = cofactors(&diff, &sum).map_err(|_| PlpError::NotInImage {
        witness: reduce(&diff, &sum),
    })?;
    let k = clump.len();
    let mut values = Vec::with_capacity(k);
    let mut cur = f.clone();
    for (i, gen) in gens.iter().enumerate().take(k) {
        cur = &cur - &(&a[i] * &euler_class(gen));
        values.push(cur.clone());
    }
    let first = LatticeIdeal::new(clump.n, vec![gens[0].clone()]);
    let last = LatticeIdeal::new(clump.n, vec![gens[k].clone()]);
    assert!(
        contains(&(&values[0] - f), &first),
        "clump preimage lost its restriction at the first ray"
    );
    assert!(
        contains(&(g - &values[k - 1]), &last),
        "clump preimage lost its restriction at the last ray"
    );
    plp_validate(Arc::new(clump.to_fan()), values)
}

/// Preimage of a boundary pair over a proper splitting of a complete 2D fan
/// into clumps Δ′ and Δ″ sharing their outer rays: f sits on Δ′'s first ray,
/// g on Δ′'s last. Splits f − g = A − B with A in Δ′'s ray-ideal sum and B in
/// Δ″'s by partitioning cofactor terms by generator origin, then takes one
/// clump preimage on each side.
pub fn complete_2d_preimage(
    f: &LaurentPoly,
    g: &LaurentPoly,
    d1: &Clump,
    d2: &Clump,
) -> Result<(PiecewisePoly, PiecewisePoly), PlpError> {
    assert_eq!(
        d1.rays[0],
        d2.rays[d2.len()],
        "splitting arcs must share the first ray of Δ′"
    );
    assert_eq!(
        d1.rays[d1.len()],
        d2.rays[0],
        "splitting arcs must share the last ray of Δ′"
    );
    let gens1 = clump_ray_ideal_generators(d1);
    let gens2 = clump_ray_ideal_generators(d2);
    let mut all = gens1.clone();
    all.extend(gens2.iter().cloned());
    let sum = LatticeIdeal::new(2, all);
    let diff = f - g;
    let a = cofactors(&diff, &sum).map_err(|_| PlpError::NotInImage {
        witness: reduce(&diff, &sum),
    })?;
    let mut a_part = LaurentPoly::zero(2);
    for (t, gen) in gens1.iter().enumerate() {
        a_part = &a_part + &(&a[t] * &euler_class(gen));
    }
    // f − g = A − B; take (f′, g′) = (A, 0) on Δ′ and the negated leftover
    // pair on Δ″, whose own ray order starts where Δ′ ends.
    let first = clump_boundary_preimage(&a_part, &LaurentPoly::zero(2), d1)?;
    let neg_g = &LaurentPoly::zero(2) - g;
    let neg_f2 = &a_part - f;
    let second = clump_boundary_preimage(&neg_g, &neg_f2, d2)?;
    let j_start = LatticeIdeal::new(2, vec![gens1[0].clone()]);
    let j_end = LatticeIdeal::new(2, vec![gens1[d1.len()].clone()]);
    let w_start = reduce(
        &(&(&first.values[0] - &second.values[d2.len() - 1]) - f),
        &j_start,
    );
    let w_end = reduce(
        &(&(&first.values[d1.len() - 1] - &second.values[0]) - g),
        &j_end,
    );
    assert!(
        w_start.is_zero() && w_end.is_zero(),
        "splitting preimage lost its boundary pair"
    );
    Ok((first, second))
}

/// Exponent ν with τ^⊥∩M = (σ^⊥∩M) + Zν for τ a facet of σ: the pivot of one
/// extraction stage. The coordinates of σ^⊥ inside τ^⊥ form a saturated
/// sublattice, so their Smith form has unit diagonal and the missing basis
/// direction pulls back along U⁻¹.
pub fn facet_pivot_exponent(cone: &Cone, facet: &Cone) -> Vector {
    let bs = lattice::perp_lattice(cone.n, &cone.rays);
    let bt = lattice::perp_lattice(facet.n, &facet.rays);
    let r = bs.rank();
    assert_eq!(bt.rank(), r + 1, "not a facet");
    let nu = if r == 0 {
        bt.basis.col(0)
    } else {
        let cols: Vec<Vector> = (0..r)
            .map(|j| solve(&bt.basis, &bs.basis.col(j)).expect("σ^⊥ lies inside τ^⊥"))
            .collect();
        let coords = IntMatrix::from_cols(&cols);
        let s = smith_normal_form(&coords);
        assert_eq!(s.rank, r, "facet inclusion has full rank");
        for t in 0..r {
            assert!(
                s.d.get(t, t).magnitude().is_one(),
                "quotient by a saturated sublattice is torsion-free"
            );
        }
        bt.basis.mul_vec(&s.u_inv.col(r))
    };
    let mut gens = bs.basis.cols_to_vec();
    gens.push(nu.clone());
    let rebuilt = lattice::hermite_basis(cone.n, &gens);
    assert!(
        lattice::lattice_leq(&rebuilt, &bt).expect("equal ambient rank")
            && lattice::lattice_leq(&bt, &rebuilt).expect("equal ambient rank"),
        "pivot fails to generate the orthogonal lattice of the facet"
    );
    nu
}

/// Whether a facet tuple extends to the cone: all pairwise differences must
/// lie in the pairwise sums J_{τ_i} + J_{τ_j} (which can be strictly smaller
/// than J_{τ_i∩τ_j} when facets meet in codimension > 2).
pub fn cone_boundary_image_test(tuple: &[LaurentPoly], cone: &Cone) -> bool {
    let facets = cone.facets();
    assert_eq!(tuple.len(), facets.len(), "one value per facet");
    let ideals: Vec<LatticeIdeal> = facets.iter().map(cone_ideal).collect();
    for i in 0..facets.len() {
        for j in (i + 1)..facets.len() {
            let sum = ideal_sum(&ideals[i], &ideals[j]);
            if !contains(&(&tuple[i] - &tuple[j]), &sum) {
                return false;
            }
        }
    }
    true
}

/// Single value on σ restricting to a given tuple on the facets, built by
/// staged extraction: after stage j every later slot has been divided by
/// e(ν_j) modulo its own facet ideal, and the partial sum
/// F_1 + e(ν_1)H_2 + e(ν_1)e(ν_2)H_3 + … accumulates the answer. Residues
/// are reduced eagerly modulo the facet ideals to keep terms small.
pub fn cone_boundary_preimage(
    tuple: &[LaurentPoly],
    cone: &Cone,
) -> Result<LaurentPoly, PlpError> {
    let facets = cone.facets();
    assert!(
        !facets.is_empty(),
        "preimage needs a positive-dimensional cone"
    );
    assert_eq!(tuple.len(), facets.len(), "one value per facet");
    let ideals: Vec<LatticeIdeal> = facets.iter().map(cone_ideal).collect();
    for i in 0..facets.len() {
        for j in (i + 1)..facets.len() {
            let sum = ideal_sum(&ideals[i], &ideals[j]);
            let w = reduce(&(&tuple[i] - &tuple[j]), &sum);
            if !w.is_zero() {
                return Err(PlpError::NotInImage { witness: w });
            }
        }
    }
    let k = facets.len();
    let mut h: Vec<LaurentPoly> = tuple.to_vec();
    let mut total = h[0].clone();
    let mut prefix = LaurentPoly::one(cone.n);
    for j in 0..k.saturating_sub(1) {
        let nu = facet_pivot_exponent(cone, &facets[j]);
        let single = LatticeIdeal::new(cone.n, vec![nu.clone()]);
        let pivot = h[j].clone();
        for i in (j + 1)..k {
            let diff = &h[i] - &pivot;
            let sum = ideal_sum(&ideals[i], &single);
            let cof = cofactors(&diff, &sum).expect("pairwise residues vanish");
            h[i] = reduce(cof.last().expect("sum ideal has generators"), &ideals[i]);
        }
        prefix = &prefix * &euler_class(&nu);
        total = &total + &(&prefix * &h[j + 1]);
    }
    for (i, f_i) in tuple.iter().enumerate() {
        let w = reduce(&(&total - f_i), &ideals[i]);
        assert!(
            w.is_zero(),
            "assembled value broke the restriction to facet {i}: residue {w}"
        );
    }
    Ok(total)
}

/// A fan made of existing cones of a validated fan; pairwise face conditions
/// hold automatically for such a subcollection.
fn subfan_from_cones(n: usize, max_cones: &[Cone]) -> Fan {
    let mut rays: Vec<Vector> = Vec::new();
    for c in max_cones {
        for r in &c.rays {
            if !rays.contains(r) {
                rays.push(r.clone());
            }
        }
    }
    let max_cone_ray_sets = max_cones
        .iter()
        .map(|c| {
            c.rays
                .iter()
                .map(|r| rays.iter().position(|x| x == r).unwrap())
                .collect()
        })
        .collect();
    Fan {
        n,
        rays,
        max_cones: max_cones.to_vec(),
        max_cone_ray_sets,
    }
}

/// Extension of a piecewise value from a nonempty subfan Γ of the face fan
/// of a smooth cone σ to σ itself, working up one dimension at a time; each
/// missing face takes a preimage of its facet tuple. Faces of equal
/// dimension are processed in the deterministic face order of the cone.
pub fn extend_over_smooth_cone(f: &PiecewisePoly, cone: &Cone) -> Result<LaurentPoly, PlpError> {
    if !cone.is_smooth() {
        return Err(PlpError::NotSmooth);
    }
    let gamma = &f.fan;
    if gamma.max_cones.is_empty() {
        return Err(PlpError::EmptySubfan);
    }
    if gamma.n != cone.n {
        return Err(PlpError::NotASubfan);
    }
    for g in &gamma.max_cones {
        if !cone.is_face(g) {
            return Err(PlpError::NotASubfan);
        }
    }
    let mut values: BTreeMap<Vec<Vector>, LaurentPoly> = BTreeMap::new();
    for (gi, g) in gamma.max_cones.iter().enumerate() {
        for face in g.faces() {
            values
                .entry(face.rays)
                .or_insert_with(|| f.values[gi].clone());
        }
    }
    for k in 1..=cone.dim() {
        for face in cone.faces_of_dim(k) {
            if values.contains_key(&face.rays) {
                continue;
            }
            let tuple: Vec<LaurentPoly> = face
                .facets()
                .iter()
                .map(|t| values[&t.rays].clone())
                .collect();
            let v = cone_boundary_preimage(&tuple, &face)?;
            values.insert(face.rays.clone(), v);
        }
    }
    let out = values
        .remove(&cone.rays)
        .expect("the cone itself is processed");
    for (gi, g) in gamma.max_cones.iter().enumerate() {
        let w = reduce(&(&out - &f.values[gi]), &cone_ideal(g));
        assert!(
            w.is_zero(),
            "cone extension broke the restriction to the subfan"
        );
    }
    Ok(out)
}

/// Extension of a piecewise value from a nonempty subfan Γ to a smooth fan
/// Σ: maximal cones already inside Γ keep their value, and each remaining
/// maximal cone is extended from the already-covered part of its boundary
/// (never empty: the zero cone is covered from the start).
pub fn extend_over_smooth_fan(
    f: &PiecewisePoly,
    fan: Arc<Fan>,
) -> Result<PiecewisePoly, PlpError> {
    if !fan.is_smooth() {
        return Err(PlpError::NotSmooth);
    }
    let gamma = &f.fan;
    if gamma.max_cones.is_empty() {
        return Err(PlpError::EmptySubfan);
    }
    if gamma.n != fan.n {
        return Err(PlpError::NotASubfan);
    }
    for g in &gamma.max_cones {
        if !fan.contains_cone(g) {
            return Err(PlpError::NotASubfan);
        }
    }
    let mut values: BTreeMap<Vec<Vector>, LaurentPoly> = BTreeMap::new();
    for (gi, g) in gamma.max_cones.iter().enumerate() {
        for face in g.faces() {
            values
                .entry(face.rays)
                .or_insert_with(|| f.values[gi].clone());
        }
    }
    let mut out: Vec<Option<LaurentPoly>> = vec![None; fan.max_cones.len()];
    let mut pending: Vec<usize> = Vec::new();
    for (i, sigma) in fan.max_cones.iter().enumerate() {
        match values.get(&sigma.rays) {
            Some(v) => out[i] = Some(v.clone()),
            None => pending.push(i),
        }
    }
    for &i in &pending {
        let sigma = &fan.max_cones[i];
        let covered: Vec<Cone> = sigma
            .faces()
            .into_iter()
            .filter(|c| c.rays != sigma.rays && values.contains_key(&c.rays))
            .collect();
        let lam_max: Vec<Cone> = covered
            .iter()
            .filter(|c| !covered.iter().any(|d| d.rays != c.rays && d.is_face(c)))
            .cloned()
            .collect();
        let lam_values: Vec<LaurentPoly> =
            lam_max.iter().map(|c| values[&c.rays].clone()).collect();
        let lam = PiecewisePoly {
            fan: Arc::new(subfan_from_cones(fan.n, &lam_max)),
            values: lam_values,
        };
        let v = extend_over_smooth_cone(&lam, sigma)?;
        for face in sigma.faces() {
            values.entry(face.rays).or_insert_with(|| v.clone());
        }
        out[i] = Some(v);
    }
    let values_out: Vec<LaurentPoly> = out
        .into_iter()
        .map(|v| v.expect("every maximal cone processed"))
        .collect();
    let result = plp_validate(fan, values_out)?;
    for (gi, g) in gamma.max_cones.iter().enumerate() {
        let i = result
            .fan
            .max_cones
            .iter()
            .position(|s| s.is_face(g))
            .expect("subfan cone sits inside a maximal cone");
        let w = reduce(&(&result.values[i] - &f.values[gi]), &cone_ideal(g));
        assert!(
            w.is_zero(),
            "fan extension broke the restriction to the subfan"
        );
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::tests::{fan, hirzebruch, p2, pyramid};
    use crate::fan::{boundary_fan, clump_structure};
    use crate::ideal::{eq_mod, ideal_leq};
    use crate::laurent::parse_laurent;
    use crate::matrix::vec_bigint;

    fn lp(text: &str, n: usize) -> LaurentPoly {
        parse_laurent(text, n).expect("parse")
    }

    /// Fan whose maximal cones are the two boundary rays of the quadrant.
    fn quadrant_boundary() -> Arc<Fan> {
        Arc::new(fan(2, &[&[1, 0], &[0, 1]], &[&[0], &[1]]))
    }

    fn quadrant() -> Cone {
        crate::cone::cone_from_rays(2, &[vec_bigint(&[1, 0]), vec_bigint(&[0, 1])]).unwrap()
    }

    /// Tuple entry for the facet of the quadrant or octant spanned by the
    /// listed coordinate rays: the product of their variables.
    fn coordinate_facet_value(facet: &Cone, n: usize) -> LaurentPoly {
        let mut v = LaurentPoly::one(n);
        for r in &facet.rays {
            let exp: Vec<i64> = r
                .iter()
                .map(|c| i64::try_from(c).expect("small coordinate"))
                .collect();
            v = &v * &LaurentPoly::monomial(n, vec_bigint(&exp), 1.into());
        }
        v
    }

    #[test]
    fn validate_accepts_compatible_and_reports_witness() {
        let bd = quadrant_boundary();
        let good = plp_validate(bd.clone(), vec![lp("a1", 2), lp("a2", 2)]);
        assert!(good.is_ok());

        // two 2-cones glued along the ray (1,0): the wall ideal is ⟨1−a2⟩
        let wall = Arc::new(fan(
            2,
            &[&[1, 0], &[0, 1], &[0, -1]],
            &[&[0, 1], &[0, 2]],
        ));
        let bad = plp_validate(wall.clone(), vec![lp("a1", 2), lp("1", 2)]);
        match bad {
            Err(PlpError::IncompatiblePair { i, j, witness }) => {
                assert_eq!((i, j), (0, 1));
                assert_eq!(witness, lp("a1 - 1", 2));
            }
            other => panic!("expected incompatible pair, got {other:?}"),
        }
        let good2 = plp_validate(wall, vec![lp("a1", 2), lp("a1 + 1 - a2", 2)]);
        assert!(good2.is_ok());

        let counted = plp_validate(bd, vec![lp("a1", 2)]);
        assert!(matches!(counted, Err(PlpError::ValueCount { .. })));
    }

    #[test]
    fn add_mul_are_conewise_and_fans_must_match() {
        let f1 = Arc::new(hirzebruch(1));
        let a = plp_validate(f1.clone(), vec![lp("a1", 2); 4]).unwrap();
        let b = plp_validate(f1.clone(), vec![lp("1 - a1", 2); 4]).unwrap();
        let s = plp_add(&a, &b).unwrap();
        let p = plp_mul(&a, &b).unwrap();
        for v in &s.values {
            assert_eq!(*v, lp("1", 2));
        }
        for v in &p.values {
            assert_eq!(*v, lp("a1 - a1^2", 2));
        }
        let other = Arc::new(p2());
        let c = plp_validate(other, vec![lp("1", 2); 3]).unwrap();
        assert!(matches!(plp_add(&a, &c), Err(PlpError::FanMismatch)));
    }

    #[test]
    fn equality_is_modulo_maximal_cone_ideals() {
        let bd = quadrant_boundary();
        let f = plp_validate(bd.clone(), vec![lp("a1", 2), lp("a2", 2)]).unwrap();
        // differs by (1−a2)^2 on the ray (1,0), whose ideal is ⟨1−a2⟩
        let g = plp_validate(
            bd.clone(),
            vec![lp("a1 + 1 - 2*a2 + a2^2", 2), lp("a2", 2)],
        )
        .unwrap();
        assert!(plp_eq(&f, &g).unwrap());
        let h = plp_validate(bd, vec![lp("a1 + 1 - a1*a2", 2), lp("a2", 2)]).unwrap();
        assert!(!plp_eq(&f, &h).unwrap());
    }

    #[test]
    fn restriction_picks_a_containing_cone() {
        let f1 = Arc::new(hirzebruch(1));
        let f = plp_validate(f1.clone(), vec![lp("3", 2); 4]).unwrap();
        // the subfan of one maximal cone plus the identity restriction
        let sub = Arc::new(f1.subfan(&[0]));
        let r = sharp_restrict(&f, sub).unwrap();
        assert_eq!(r.values.len(), 1);
        assert_eq!(r.values[0], lp("3", 2));
        let idem = sharp_restrict(&f, f1.clone()).unwrap();
        assert!(plp_eq(&f, &idem).unwrap());

        let alien = Arc::new(fan(2, &[&[0, 1], &[-1, -1]], &[&[0, 1]]));
        assert!(matches!(
            sharp_restrict(&f, alien),
            Err(PlpError::NotASubfan)
        ));

        // restriction of a value on σ to ∂σ is the constant tuple
        let sigma_fan = Arc::new(fan(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]));
        let on_sigma = plp_validate(sigma_fan, vec![lp("a1*a2 - 7", 2)]).unwrap();
        let bd = Arc::new(boundary_fan(&quadrant()));
        let restricted = sharp_restrict(&on_sigma, bd).unwrap();
        for v in &restricted.values {
            assert_eq!(*v, lp("a1*a2 - 7", 2));
        }
    }

    #[test]
    fn quadrant_clump_preimage_matches_frozen_cofactors() {
        let single = fan(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]);
        let clump = clump_structure(&single).unwrap();
        assert_eq!(clump.rays[0], vec_bigint(&[1, 0]));
        let f = lp("a1", 2);
        let g = lp("a2", 2);
        assert!(clump_boundary_image_test(&f, &g, &clump));
        let pre = clump_boundary_preimage(&f, &g, &clump).unwrap();
        assert_eq!(pre.values.len(), 1);
        assert_eq!(pre.values[0], lp("a1 + a2 - 1", 2));

        let c = lp("5 - a1*a2^-1", 2);
        let same = clump_boundary_preimage(&c, &c, &clump).unwrap();
        assert_eq!(same.values[0], c);
    }

    #[test]
    fn singular_clump_rejects_pairs_outside_the_ray_ideal_sum() {
        let single = fan(2, &[&[1, 2], &[1, -1]], &[&[0, 1]]);
        let clump = clump_structure(&single).unwrap();
        let f = lp("a1", 2);
        let g = lp("a2", 2);
        assert!(!clump_boundary_image_test(&f, &g, &clump));
        match clump_boundary_preimage(&f, &g, &clump) {
            Err(PlpError::NotInImage { witness }) => assert!(!witness.is_zero()),
            other => panic!("expected NotInImage, got {other:?}"),
        }
    }

    #[test]
    fn hirzebruch_arc_preimage_round_trips() {
        // three consecutive cones of the Hirzebruch fan form a clump
        let h = hirzebruch(2);
        let part = h.subfan(&[0, 1, 2]);
        let clump = clump_structure(&part).unwrap();
        assert_eq!(clump.len(), 3);
        let f = lp("a1*a2 + 3", 2);
        let g = lp("a1^-1 + a2 + 2", 2);
        assert!(clump_boundary_image_test(&f, &g, &clump));
        let pre = clump_boundary_preimage(&f, &g, &clump).unwrap();
        let gens = clump_ray_ideal_generators(&clump);
        let j_first = LatticeIdeal::new(2, vec![gens[0].clone()]);
        let j_last = LatticeIdeal::new(2, vec![gens[clump.len()].clone()]);
        assert!(eq_mod(&pre.values[0], &f, &j_first));
        assert!(eq_mod(&pre.values[clump.len() - 1], &g, &j_last));
    }

    #[test]
    fn representative_shift_still_extends() {
        let single = fan(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]);
        let clump = clump_structure(&single).unwrap();
        // shift f by a member of J_{ρ_1} and g by a member of J_{ρ_2}
        let f = lp("a1 + (1 - a2)*a1", 2);
        let g = lp("a2 + (1 - a1)*7", 2);
        assert!(clump_boundary_image_test(&f, &g, &clump));
        let pre = clump_boundary_preimage(&f, &g, &clump).unwrap();
        // the restriction matches the unshifted pair too
        let j1 = LatticeIdeal::new(2, vec![vec_bigint(&[0, 1])]);
        let j2 = LatticeIdeal::new(2, vec![vec_bigint(&[1, 0])]);
        assert!(eq_mod(&pre.values[0], &lp("a1", 2), &j1));
        assert!(eq_mod(&pre.values[0], &lp("a2", 2), &j2));
    }

    #[test]
    fn splitting_preimage_round_trips_on_p2() {
        let fanp2 = p2();
        let (d1, d2) = fanp2.complete_2d_splitting().unwrap();
        let f = lp("a1", 2);
        let g = lp("1", 2);
        let (first, second) = complete_2d_preimage(&f, &g, &d1, &d2).unwrap();
        assert_eq!(first.values.len(), d1.len());
        assert_eq!(second.values.len(), d2.len());
        // matching pair: constant preimages from the zero-cofactor branch
        let (cf, cs) = complete_2d_preimage(&f, &f, &d1, &d2).unwrap();
        for v in &cf.values {
            assert!(v.is_zero());
        }
        for v in &cs.values {
            assert_eq!(*v, &LaurentPoly::zero(2) - &f);
        }
    }

    #[test]
    fn fake_p2_pair_is_out_of_reach() {
        let fake = fan(2, &[&[1, 2], &[1, -1], &[-2, -1]], &[&[0, 1], &[1, 2], &[2, 0]]);
        let (d1, d2) = fake.complete_2d_splitting().unwrap();
        match complete_2d_preimage(&lp("a1", 2), &lp("1", 2), &d1, &d2) {
            Err(PlpError::NotInImage { witness }) => assert!(!witness.is_zero()),
            other => panic!("expected NotInImage, got {other:?}"),
        }
    }

    #[test]
    fn facet_pivot_spans_the_quotient() {
        // singular case: σ = ray (1,1), τ = 0; the primitive normal (1,−1)
        // of σ inside τ^⊥ = Z² generates an index-2 subgroup only
        let sigma = crate::cone::cone_from_rays(2, &[vec_bigint(&[1, 1])]).unwrap();
        let zero = Cone::zero(2);
        let nu = facet_pivot_exponent(&sigma, &zero);
        let sperp = lattice::perp_lattice(2, &sigma.rays);
        let m = IntMatrix::from_cols(&[sperp.basis.col(0), nu]);
        assert!(crate::matrix::det(&m).magnitude().is_one());

        // smooth case: facets of the quadrant give unit vectors
        let q = quadrant();
        for facet in q.facets() {
            let nu = facet_pivot_exponent(&q, &facet);
            let nonzero: Vec<_> = nu.iter().filter(|c| !num_traits::Zero::is_zero(*c)).collect();
            assert_eq!(nonzero.len(), 1);
            assert_eq!(nonzero[0].magnitude(), &1u32.into());
        }
    }

    #[test]
    fn quadrant_preimage_matches_substitution_oracle() {
        let q = quadrant();
        let facets = q.facets();
        let tuple: Vec<LaurentPoly> = facets
            .iter()
            .map(|t| coordinate_facet_value(t, 2))
            .collect();
        assert!(cone_boundary_image_test(&tuple, &q));
        let f = cone_boundary_preimage(&tuple, &q).unwrap();
        // the facet spanned by e1 has ideal ⟨1−a2⟩: substituting a2 = 1
        // must recover a1, and symmetrically
        for (t, v) in facets.iter().zip(&tuple) {
            let killed: Vec<usize> = (0..2)
                .filter(|&i| {
                    t.rays
                        .iter()
                        .all(|r| num_traits::Zero::is_zero(&r[i]))
                })
                .collect();
            assert_eq!(f.substitute_one(&killed), *v);
        }
        // a1*a2 is an equally valid preimage: the difference lies in both
        // facet ideals
        let alt = lp("a1*a2", 2);
        for t in &facets {
            assert!(contains(&(&f - &alt), &cone_ideal(t)));
        }
    }

    #[test]
    fn octant_preimage_satisfies_three_congruences() {
        let oct = crate::cone::cone_from_rays(
            3,
            &[
                vec_bigint(&[1, 0, 0]),
                vec_bigint(&[0, 1, 0]),
                vec_bigint(&[0, 0, 1]),
            ],
        )
        .unwrap();
        let facets = oct.facets();
        let tuple: Vec<LaurentPoly> = facets
            .iter()
            .map(|t| coordinate_facet_value(t, 3))
            .collect();
        assert!(cone_boundary_image_test(&tuple, &oct));
        let f = cone_boundary_preimage(&tuple, &oct).unwrap();
        for (t, v) in facets.iter().zip(&tuple) {
            // substituting the killed variable recovers the facet value
            let killed: Vec<usize> = (0..3)
                .filter(|&i| {
                    t.rays
                        .iter()
                        .all(|r| num_traits::Zero::is_zero(&r[i]))
                })
                .collect();
            assert_eq!(f.substitute_one(&killed), *v);
            assert!(eq_mod(&f, v, &cone_ideal(t)));
        }
        // a1*a2*a3 is a valid preimage of the same tuple
        let alt = lp("a1*a2*a3", 3);
        for t in &facets {
            assert!(contains(&(&f - &alt), &cone_ideal(t)));
        }

        let c = lp("4 - a1", 3);
        let constant = cone_boundary_preimage(&vec![c.clone(); 3], &oct).unwrap();
        assert_eq!(constant, c);
    }

    #[test]
    fn ray_preimage_is_the_origin_value() {
        let ray = crate::cone::cone_from_rays(2, &[vec_bigint(&[1, 0])]).unwrap();
        let v = lp("a1*a2 - 3", 2);
        let f = cone_boundary_preimage(std::slice::from_ref(&v), &ray).unwrap();
        assert_eq!(f, v);
    }

    #[test]
    fn pyramid_cone_tuple_compatible_but_not_in_image() {
        let pyr = pyramid();
        // C1 is the singular non-simplicial cone over the unit square
        let c1 = pyr
            .max_cones
            .iter()
            .find(|c| c.rays.len() == 4)
            .expect("square cone");
        let facets = c1.facets();
        assert_eq!(facets.len(), 4);
        let value_for = |t: &Cone| -> LaurentPoly {
            let has = |x: i64, y: i64, z: i64| t.rays.contains(&vec_bigint(&[x, y, z]));
            if has(1, 0, 1) && has(0, 1, 1) {
                lp("1", 3)
            } else if has(0, 1, 1) && has(-1, 0, 1) {
                lp("a2*a3^-1", 3)
            } else if has(-1, 0, 1) && has(0, -1, 1) {
                lp("a1*a2", 3)
            } else {
                lp("a1*a3^-1", 3)
            }
        };
        let tuple: Vec<LaurentPoly> = facets.iter().map(value_for).collect();
        // plain compatibility holds on the boundary fan
        let bd = Arc::new(boundary_fan(c1));
        let bd_tuple: Vec<LaurentPoly> = bd.max_cones.iter().map(value_for).collect();
        assert!(plp_validate(bd, bd_tuple).is_ok());
        // but two opposite facets meet only at the apex ray direction 0,
        // and the sum of their ideals is strictly smaller than J_{τ∩τ'}
        assert!(!cone_boundary_image_test(&tuple, c1));
        match cone_boundary_preimage(&tuple, c1) {
            Err(PlpError::NotInImage { witness }) => assert!(!witness.is_zero()),
            other => panic!("expected NotInImage, got {other:?}"),
        }
    }

    #[test]
    fn smooth_facet_ideal_sums_collapse_to_intersection_ideals() {
        let smooth_cones = vec![
            quadrant(),
            crate::cone::cone_from_rays(
                3,
                &[
                    vec_bigint(&[1, 0, 0]),
                    vec_bigint(&[0, 1, 0]),
                    vec_bigint(&[0, 0, 1]),
                ],
            )
            .unwrap(),
            crate::cone::cone_from_rays(
                3,
                &[
                    vec_bigint(&[1, 0, 0]),
                    vec_bigint(&[1, 1, 0]),
                    vec_bigint(&[0, 0, -1]),
                ],
            )
            .unwrap(),
        ];
        for c in &smooth_cones {
            let facets = c.facets();
            for i in 0..facets.len() {
                for j in (i + 1)..facets.len() {
                    let sum = ideal_sum(&cone_ideal(&facets[i]), &cone_ideal(&facets[j]));
                    let meet = crate::cone::intersect(&facets[i], &facets[j]).unwrap();
                    let meet_ideal = cone_ideal(&meet);
                    assert!(ideal_leq(&sum, &meet_ideal));
                    assert!(ideal_leq(&meet_ideal, &sum));
                }
            }
        }
        // singular counterexample: two opposite facets of the pyramid cone
        let pyr = pyramid();
        let c1 = pyr
            .max_cones
            .iter()
            .find(|c| c.rays.len() == 4)
            .expect("square cone");
        let facets = c1.facets();
        let mut found_strict = false;
        for i in 0..facets.len() {
            for j in (i + 1)..facets.len() {
                let meet = crate::cone::intersect(&facets[i], &facets[j]).unwrap();
                if meet.dim() == 0 {
                    let sum = ideal_sum(&cone_ideal(&facets[i]), &cone_ideal(&facets[j]));
                    let meet_ideal = cone_ideal(&meet);
                    assert!(ideal_leq(&sum, &meet_ideal));
                    assert!(!ideal_leq(&meet_ideal, &sum));
                    found_strict = true;
                }
            }
        }
        assert!(found_strict);
    }

    #[test]
    fn extend_over_cone_round_trips() {
        let q = quadrant();
        // Γ = {0}: any value extends and keeps its coefficient sum
        let zero_fan = Arc::new(fan(2, &[], &[&[]]));
        let f0 = plp_validate(zero_fan, vec![lp("1 - a1", 2)]).unwrap();
        let ext = extend_over_smooth_cone(&f0, &q).unwrap();
        assert!(contains(
            &(&ext - &lp("1 - a1", 2)),
            &cone_ideal(&Cone::zero(2))
        ));

        // Γ = the cone itself: identity
        let sigma_fan = Arc::new(fan(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]));
        let on_sigma = plp_validate(sigma_fan, vec![lp("a1^2 - a2", 2)]).unwrap();
        assert_eq!(
            extend_over_smooth_cone(&on_sigma, &q).unwrap(),
            lp("a1^2 - a2", 2)
        );

        // Γ = ∂σ: agrees with cone_boundary_preimage modulo facet ideals
        let bd = Arc::new(boundary_fan(&q));
        let tuple: Vec<LaurentPoly> = bd
            .max_cones
            .iter()
            .map(|t| coordinate_facet_value(t, 2))
            .collect();
        let on_bd = plp_validate(bd.clone(), tuple.clone()).unwrap();
        let via_ext = extend_over_smooth_cone(&on_bd, &q).unwrap();
        let via_pre = cone_boundary_preimage(&tuple, &q).unwrap();
        for t in &bd.max_cones {
            assert!(eq_mod(&via_ext, &via_pre, &cone_ideal(t)));
        }

        // a singular cone refuses
        let sing = crate::cone::cone_from_rays(2, &[vec_bigint(&[1, 2]), vec_bigint(&[1, -1])])
            .unwrap();
        let f0 = plp_validate(Arc::new(fan(2, &[], &[&[]])), vec![lp("1", 2)]).unwrap();
        assert!(matches!(
            extend_over_smooth_cone(&f0, &sing),
            Err(PlpError::NotSmooth)
        ));
    }

    #[test]
    fn extend_over_fan_round_trips_on_hirzebruch() {
        let h = Arc::new(hirzebruch(1));
        let gamma = Arc::new(h.subfan(&[0]));
        let f = plp_validate(gamma.clone(), vec![lp("a1", 2)]).unwrap();
        let ext = extend_over_smooth_fan(&f, h.clone()).unwrap();
        // the full-dimensional cone keeps its value exactly
        assert_eq!(ext.values[0], lp("a1", 2));

        // Γ = Σ: identity
        let idem = extend_over_smooth_fan(&ext, h.clone()).unwrap();
        assert!(plp_eq(&ext, &idem).unwrap());

        // constant extends to the constant
        let c = plp_validate(gamma, vec![lp("9", 2)]).unwrap();
        let cext = extend_over_smooth_fan(&c, h.clone()).unwrap();
        for v in &cext.values {
            assert!(eq_mod(v, &lp("9", 2), &LatticeIdeal::zero_ideal(2)));
        }

        // a singular target refuses
        let wps = Arc::new(fan(
            2,
            &[&[1, 0], &[-1, 2], &[0, -1]],
            &[&[0, 1], &[1, 2], &[2, 0]],
        ));
        let g = plp_validate(Arc::new(wps.subfan(&[0])), vec![lp("1", 2)]).unwrap();
        assert!(matches!(
            extend_over_smooth_fan(&g, wps),
            Err(PlpError::NotSmooth)
        ));

        // a cone from elsewhere is not a subfan
        let alien = Arc::new(fan(2, &[&[0, 1], &[-1, -1]], &[&[0, 1]]));
        let a = plp_validate(alien, vec![lp("1", 2)]).unwrap();
        assert!(matches!(
            extend_over_smooth_fan(&a, h),
            Err(PlpError::NotASubfan)
        ));
    }
}
