//! Fans: finite collections of maximal cones meeting pairwise along common
//! faces. Construction validates the face condition; the queries classification
//! dispatches on (smooth, simplicial, complete, polytopal, singular-cone
//! structure, clump decomposition, splittings) are derived from the maximal
//! cones. Fans are immutable once built.

use crate::cone::{self, Cone, ConeError};
use crate::lattice;
use crate::matrix::{self, IntMatrix, Vector};
use crate::ratlp::{self, Constraint, Rel};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FanError {
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error("ray {ray} is the zero vector")]
    ZeroRay { ray: usize },
    #[error("ray {ray} has the wrong number of coordinates")]
    RayArity { ray: usize },
    #[error("cone {cone} references ray index {index}, out of range")]
    RayIndex { cone: usize, index: usize },
    #[error("fan has no cones")]
    EmptyFan,
    #[error("cones {i} and {j} do not meet along a common face")]
    InvalidFan { i: usize, j: usize },
    #[error("operation requires an incomplete fan")]
    CompleteFan,
    #[error("operation requires a complete fan")]
    IncompleteFan,
    #[error("polytopality is only defined here for complete fans")]
    Unsupported,
    #[error("operation requires a two-dimensional fan")]
    NotTwoDimensional,
    #[error("fan with one maximal cone admits no proper splitting")]
    SingleCone,
    #[error("fan is not a clump (connected with two-dimensional maximal cones)")]
    NotAClump,
}

/// Non-fatal ingest findings; indices refer to input positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanWarning {
    NormalizedRay { ray: usize },
    DuplicateRay { ray: usize },
    UnusedRay { ray: usize },
    DuplicateCone { cone: usize },
    NonMaximalCone { cone: usize, inside: usize },
    RedundantConeRay { cone: usize, ray: usize },
}

impl fmt::Display for FanWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FanWarning::NormalizedRay { ray } => {
                write!(f, "ray {ray} is not primitive; replaced by its primitive generator")
            }
            FanWarning::DuplicateRay { ray } => write!(f, "ray {ray} duplicates an earlier ray"),
            FanWarning::UnusedRay { ray } => {
                write!(f, "ray {ray} is not used by any maximal cone; dropped")
            }
            FanWarning::DuplicateCone { cone } => {
                write!(f, "cone {cone} duplicates an earlier cone; dropped")
            }
            FanWarning::NonMaximalCone { cone, inside } => {
                write!(f, "cone {cone} is contained in cone {inside}; dropped")
            }
            FanWarning::RedundantConeRay { cone, ray } => {
                write!(f, "cone {cone} lists ray {ray}, which is not one of its extreme rays")
            }
        }
    }
}

/// A validated fan: primitive rays and maximal cones whose pairwise
/// intersections are common faces. `max_cone_ray_sets[i]` indexes into `rays`.
#[derive(Clone, Debug)]
pub struct Fan {
    pub n: usize,
    pub rays: Vec<Vector>,
    pub max_cones: Vec<Cone>,
    pub max_cone_ray_sets: Vec<BTreeSet<usize>>,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Fan) -> bool {
        self.n == other.n && self.cone_keys() == other.cone_keys()
    }
}

impl Eq for Fan {}

/// Builds and validates a fan from raw rays and per-cone ray index lists.
/// Rays are normalized to primitive vectors and deduplicated; listed cones
/// contained in other listed cones are dropped; every surviving pair must
/// intersect in a common face.
pub fn fan_from_description(
    n: usize,
    rays_in: &[Vector],
    cones_in: &[Vec<usize>],
) -> Result<(Fan, Vec<FanWarning>), FanError> {
    if cones_in.is_empty() {
        return Err(FanError::EmptyFan);
    }
    let mut warnings = Vec::new();

    let mut rays: Vec<Vector> = Vec::new();
    let mut first_input: Vec<usize> = Vec::new();
    let mut remap: Vec<usize> = Vec::new();
    for (i, v) in rays_in.iter().enumerate() {
        if v.len() != n {
            return Err(FanError::RayArity { ray: i });
        }
        let p = lattice::primitive(v).map_err(|_| FanError::ZeroRay { ray: i })?;
        if p != *v {
            warnings.push(FanWarning::NormalizedRay { ray: i });
        }
        match rays.iter().position(|r| *r == p) {
            Some(k) => {
                warnings.push(FanWarning::DuplicateRay { ray: i });
                remap.push(k);
            }
            None => {
                rays.push(p);
                first_input.push(i);
                remap.push(rays.len() - 1);
            }
        }
    }

    struct Built {
        input_idx: usize,
        cone: Cone,
    }
    let mut built: Vec<Built> = Vec::new();
    for (ci, list) in cones_in.iter().enumerate() {
        let mut listed: Vec<(usize, Vector)> = Vec::new();
        let mut seen = BTreeSet::new();
        for &ri in list {
            if ri >= rays_in.len() {
                return Err(FanError::RayIndex { cone: ci, index: ri });
            }
            let k = remap[ri];
            if seen.insert(k) {
                listed.push((ri, rays[k].clone()));
            }
        }
        let vecs: Vec<Vector> = listed.iter().map(|(_, v)| v.clone()).collect();
        let cone = cone::cone_from_rays(n, &vecs)?;
        for (ri, v) in &listed {
            if !cone.has_ray(v) {
                warnings.push(FanWarning::RedundantConeRay { cone: ci, ray: *ri });
            }
        }
        if built.iter().any(|b| b.cone.rays == cone.rays) {
            warnings.push(FanWarning::DuplicateCone { cone: ci });
            continue;
        }
        built.push(Built { input_idx: ci, cone });
    }

    // Listed cones contained in other listed cones are not maximal.
    let mut keep = vec![true; built.len()];
    for i in 0..built.len() {
        for j in 0..built.len() {
            if i != j && keep[j] && built[j].cone.contains_cone(&built[i].cone) {
                warnings.push(FanWarning::NonMaximalCone {
                    cone: built[i].input_idx,
                    inside: built[j].input_idx,
                });
                keep[i] = false;
                break;
            }
        }
    }
    let built: Vec<Built> = built
        .into_iter()
        .zip(keep)
        .filter_map(|(b, k)| k.then_some(b))
        .collect();
    if built.is_empty() {
        return Err(FanError::EmptyFan);
    }

    for i in 0..built.len() {
        for j in (i + 1)..built.len() {
            match cone::intersect(&built[i].cone, &built[j].cone) {
                Ok(_) => {}
                Err(ConeError::NotAFace { .. }) => {
                    return Err(FanError::InvalidFan {
                        i: built[i].input_idx,
                        j: built[j].input_idx,
                    });
                }
                Err(e) => return Err(FanError::Cone(e)),
            }
        }
    }

    let used: BTreeSet<usize> = built
        .iter()
        .flat_map(|b| {
            b.cone
                .rays
                .iter()
                .map(|r| rays.iter().position(|x| x == r).expect("cone ray is a fan ray"))
                .collect::<Vec<_>>()
        })
        .collect();
    for (k, &fi) in first_input.iter().enumerate() {
        if !used.contains(&k) {
            warnings.push(FanWarning::UnusedRay { ray: fi });
        }
    }
    let final_rays: Vec<Vector> = used.iter().map(|&k| rays[k].clone()).collect();

    let max_cones: Vec<Cone> = built.into_iter().map(|b| b.cone).collect();
    let max_cone_ray_sets = max_cones
        .iter()
        .map(|c| {
            c.rays
                .iter()
                .map(|r| final_rays.iter().position(|x| x == r).unwrap())
                .collect()
        })
        .collect();
    Ok((
        Fan {
            n,
            rays: final_rays,
            max_cones,
            max_cone_ray_sets,
        },
        warnings,
    ))
}

impl Fan {
    fn cone_keys(&self) -> BTreeSet<Vec<Vector>> {
        self.max_cones.iter().map(|c| c.rays.clone()).collect()
    }

    /// Fan-ray indices aligned with `max_cones[ci].rays`.
    fn cone_fan_indices(&self, ci: usize) -> Vec<usize> {
        self.max_cones[ci]
            .rays
            .iter()
            .map(|r| self.rays.iter().position(|x| x == r).expect("fan ray"))
            .collect()
    }

    pub fn ray_index(&self, v: &[BigInt]) -> Option<usize> {
        self.rays.iter().position(|r| r[..] == v[..])
    }

    pub fn is_smooth(&self) -> bool {
        self.max_cones.iter().all(|c| c.is_smooth())
    }

    pub fn is_simplicial(&self) -> bool {
        self.max_cones.iter().all(|c| c.is_simplicial())
    }

    /// Every cone of the fan (all faces of all maximal cones), deduplicated,
    /// ordered by dimension then rays.
    pub fn all_cones(&self) -> Vec<Cone> {
        let mut seen: BTreeMap<Vec<Vector>, Cone> = BTreeMap::new();
        for c in &self.max_cones {
            for face in c.faces() {
                seen.entry(face.rays.clone()).or_insert(face);
            }
        }
        let mut out: Vec<Cone> = seen.into_values().collect();
        out.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.rays.cmp(&b.rays)));
        out
    }

    /// Whether `c` is a cone of this fan (a face of some maximal cone).
    pub fn contains_cone(&self, c: &Cone) -> bool {
        self.max_cones.iter().any(|m| m.is_face(c))
    }

    /// Facet ray sets (as fan-ray index sets) mapped to the maximal cones
    /// having that facet.
    pub fn facet_incidences(&self) -> BTreeMap<BTreeSet<usize>, Vec<usize>> {
        let mut m: BTreeMap<BTreeSet<usize>, Vec<usize>> = BTreeMap::new();
        for ci in 0..self.max_cones.len() {
            let fri = self.cone_fan_indices(ci);
            for fs in self.max_cones[ci].facet_ray_sets() {
                let key: BTreeSet<usize> = fs.iter().map(|&j| fri[j]).collect();
                m.entry(key).or_default().push(ci);
            }
        }
        m
    }

    /// Complete iff nonempty, every maximal cone is full-dimensional, and
    /// every facet of every maximal cone is shared by exactly two of them.
    pub fn is_complete(&self) -> bool {
        !self.max_cones.is_empty()
            && self.max_cones.iter().all(|c| c.dim() == self.n)
            && self.facet_incidences().values().all(|v| v.len() == 2)
    }

    /// Whether a strictly convex piecewise-linear support function exists:
    /// one rational linear functional per maximal cone, agreeing across each
    /// wall, with strict convexity across each wall. Decided by exact rational
    /// feasibility with the strict inequalities scaled to a margin of 1.
    pub fn is_polytopal(&self) -> Result<bool, FanError> {
        if !self.is_complete() {
            return Err(FanError::Unsupported);
        }
        let k = self.max_cones.len();
        let nv = k * self.n;
        let mut eq_rows: Vec<Vector> = Vec::new();
        let mut ineq_rows: Vec<Vector> = Vec::new();
        let ray_sets: Vec<BTreeSet<usize>> = (0..k)
            .map(|ci| self.cone_fan_indices(ci).into_iter().collect())
            .collect();
        for (key, inc) in self.facet_incidences() {
            let (i, j) = (inc[0], inc[1]);
            // difference functional vanishes on the wall
            for &r in &key {
                let mut row = vec![BigInt::zero(); nv];
                for (t, x) in self.rays[r].iter().enumerate() {
                    row[i * self.n + t] = x.clone();
                    row[j * self.n + t] = -x;
                }
                eq_rows.push(row);
            }
            // strict convexity across the wall, both directions
            for (a, b) in [(i, j), (j, i)] {
                for &u in ray_sets[a].difference(&key) {
                    let mut row = vec![BigInt::zero(); nv];
                    for (t, x) in self.rays[u].iter().enumerate() {
                        row[a * self.n + t] = x.clone();
                        row[b * self.n + t] = -x;
                    }
                    ineq_rows.push(row);
                }
            }
        }
        // substitute out the equalities via an integer kernel basis
        let kmat = if eq_rows.is_empty() {
            IntMatrix::identity(nv)
        } else {
            let basis = matrix::kernel_basis(&IntMatrix::from_rows(&eq_rows));
            if basis.is_empty() {
                return Ok(ineq_rows.is_empty());
            }
            IntMatrix::from_cols(&basis)
        };
        let t = kmat.cols;
        let constraints: Vec<Constraint> = ineq_rows
            .iter()
            .map(|row| {
                let coeffs: Vector = (0..t)
                    .map(|j| (0..nv).map(|i| &row[i] * kmat.get(i, j)).sum())
                    .collect();
                Constraint::from_int(&coeffs, Rel::Ge, 1)
            })
            .collect();
        Ok(ratlp::feasible(t, false, &constraints).is_some())
    }

    /// Flags every singular cone of the fan: isolated (all its intersections
    /// with other cones are smooth) and distant (it meets every other singular
    /// cone only at the origin). The fan-level flags are vacuously true for
    /// smooth fans.
    pub fn singularity_report(&self) -> SingularityReport {
        let mut all: BTreeMap<BTreeSet<usize>, Cone> = BTreeMap::new();
        for ci in 0..self.max_cones.len() {
            let fri = self.cone_fan_indices(ci);
            let c = &self.max_cones[ci];
            for face in c.faces() {
                let key: BTreeSet<usize> = face
                    .rays
                    .iter()
                    .map(|r| fri[c.rays.iter().position(|x| x == r).unwrap()])
                    .collect();
                all.entry(key).or_insert(face);
            }
        }
        let max_keys: BTreeSet<&BTreeSet<usize>> = self.max_cone_ray_sets.iter().collect();
        let singular: Vec<(&BTreeSet<usize>, &Cone)> = all
            .iter()
            .filter(|(_, c)| !c.is_smooth())
            .collect();
        let mut entries = Vec::new();
        for (key, c) in &singular {
            // a cone properly contained in another fan cone intersects it in
            // itself, so only maximal cones can be isolated
            let isolated = max_keys.contains(key)
                && c.faces().iter().all(|f| f.rays == c.rays || f.is_smooth());
            let distant = singular
                .iter()
                .all(|(k2, _)| k2 == key || k2.is_disjoint(key));
            entries.push(SingularCone {
                rays: c.rays.clone(),
                ray_set: (*key).clone(),
                dim: c.dim(),
                isolated,
                distant,
            });
        }
        entries.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.rays.cmp(&b.rays)));
        let all_isolated = entries.iter().all(|e| e.isolated);
        let all_distant = entries.iter().all(|e| e.distant);
        SingularityReport {
            singular_cones: entries,
            all_isolated,
            all_distant,
        }
    }

    /// Subfan on a subset of the maximal cones (validity is inherited).
    /// The given order of the cones is kept.
    pub fn subfan(&self, max_cone_indices: &[usize]) -> Fan {
        let cones: Vec<Cone> = max_cone_indices
            .iter()
            .map(|&i| self.max_cones[i].clone())
            .collect();
        let used: BTreeSet<usize> = max_cone_indices
            .iter()
            .flat_map(|&i| self.cone_fan_indices(i))
            .collect();
        let rays: Vec<Vector> = used.iter().map(|&r| self.rays[r].clone()).collect();
        let max_cone_ray_sets = cones
            .iter()
            .map(|c| {
                c.rays
                    .iter()
                    .map(|r| rays.iter().position(|x| x == r).unwrap())
                    .collect()
            })
            .collect();
        Fan {
            n: self.n,
            rays,
            max_cones: cones,
            max_cone_ray_sets,
        }
    }

    /// Maximal cones of a complete 2D fan in counterclockwise cyclic order,
    /// starting at the cone whose counterclockwise first ray is the
    /// lexicographically smallest ray of the fan.
    pub fn ccw_max_cone_order(&self) -> Result<Vec<usize>, FanError> {
        if self.n != 2 {
            return Err(FanError::NotTwoDimensional);
        }
        if !self.is_complete() {
            return Err(FanError::IncompleteFan);
        }
        let mut order: Vec<usize> = (0..self.max_cones.len()).collect();
        order.sort_by(|&i, &j| {
            angle_cmp(&ccw_pair(&self.max_cones[i]).0, &ccw_pair(&self.max_cones[j]).0)
        });
        let rstar = self.rays.iter().min().expect("complete fan has rays");
        let pos = order
            .iter()
            .position(|&i| ccw_pair(&self.max_cones[i]).0 == *rstar)
            .expect("every ray starts exactly one maximal cone");
        order.rotate_left(pos);
        for w in 0..order.len() {
            let e = ccw_pair(&self.max_cones[order[w]]).1;
            let s = ccw_pair(&self.max_cones[order[(w + 1) % order.len()]]).0;
            assert_eq!(e, s, "complete 2D fan must be a cyclic chain");
        }
        Ok(order)
    }

    /// Splits a complete 2D fan into two clumps meeting in exactly two rays.
    /// Deterministic choice: cut the counterclockwise cyclic order at the
    /// lexicographically smallest ray, into arcs of ⌈k/2⌉ and ⌊k/2⌋ cones.
    pub fn complete_2d_splitting(&self) -> Result<(Clump, Clump), FanError> {
        if self.n != 2 {
            return Err(FanError::NotTwoDimensional);
        }
        if self.max_cones.len() == 1 {
            return Err(FanError::SingleCone);
        }
        let order = self.ccw_max_cone_order()?;
        let m = order.len().div_ceil(2);
        let first: Vec<Cone> = order[..m].iter().map(|&i| self.max_cones[i].clone()).collect();
        let second: Vec<Cone> = order[m..].iter().map(|&i| self.max_cones[i].clone()).collect();
        Ok((clump_from_chain(first), clump_from_chain(second)))
    }

    /// Every proper splitting of a complete 2D fan into two clumps: one per
    /// unordered pair of cut positions in the cyclic order.
    pub fn all_proper_splittings(&self) -> Result<Vec<(Clump, Clump)>, FanError> {
        let order = self.ccw_max_cone_order()?;
        let k = order.len();
        let mut out = Vec::new();
        for i in 0..k {
            for j in (i + 1)..k {
                let a: Vec<Cone> = order[i..j].iter().map(|&x| self.max_cones[x].clone()).collect();
                let b: Vec<Cone> = order[j..]
                    .iter()
                    .chain(order[..i].iter())
                    .map(|&x| self.max_cones[x].clone())
                    .collect();
                out.push((clump_from_chain(a), clump_from_chain(b)));
            }
        }
        Ok(out)
    }

    /// Partitions an incomplete 2D fan into its maximal clumps (components of
    /// the maximal cones under shared-ray adjacency). Within each clump the
    /// two-dimensional cones are in counterclockwise chain order.
    pub fn clump_decomposition(&self) -> Result<Vec<Fan>, FanError> {
        if self.n != 2 {
            return Err(FanError::NotTwoDimensional);
        }
        if self.is_complete() {
            return Err(FanError::CompleteFan);
        }
        let k = self.max_cones.len();
        let mut comp = vec![usize::MAX; k];
        let mut ncomp = 0;
        for i in 0..k {
            if comp[i] != usize::MAX {
                continue;
            }
            comp[i] = ncomp;
            let mut stack = vec![i];
            while let Some(a) = stack.pop() {
                for b in 0..k {
                    if comp[b] == usize::MAX
                        && !self.max_cone_ray_sets[a].is_disjoint(&self.max_cone_ray_sets[b])
                    {
                        comp[b] = ncomp;
                        stack.push(b);
                    }
                }
            }
            ncomp += 1;
        }
        let mut out = Vec::new();
        for c in 0..ncomp {
            let members: Vec<usize> = (0..k).filter(|&i| comp[i] == c).collect();
            out.push(self.subfan(&self.chain_order(&members)));
        }
        Ok(out)
    }

    /// Orders a connected set of maximal cones into a counterclockwise chain
    /// when they are two-dimensional; smaller-dimensional components are
    /// singletons and kept as given.
    fn chain_order(&self, members: &[usize]) -> Vec<usize> {
        if members.len() == 1 && self.max_cones[members[0]].dim() != 2 {
            return members.to_vec();
        }
        assert!(
            members.iter().all(|&i| self.max_cones[i].dim() == 2),
            "mixed-dimension component"
        );
        let starts: BTreeMap<Vector, usize> = members
            .iter()
            .map(|&i| (ccw_pair(&self.max_cones[i]).0, i))
            .collect();
        let ends: BTreeSet<Vector> = members
            .iter()
            .map(|&i| ccw_pair(&self.max_cones[i]).1)
            .collect();
        let head = members
            .iter()
            .copied()
            .find(|&i| !ends.contains(&ccw_pair(&self.max_cones[i]).0))
            .expect("incomplete fan component is a path");
        let mut order = vec![head];
        let mut cur = head;
        while let Some(&next) = starts.get(&ccw_pair(&self.max_cones[cur]).1) {
            order.push(next);
            cur = next;
        }
        assert_eq!(order.len(), members.len(), "component must form one chain");
        order
    }
}

#[derive(Clone, Debug)]
pub struct SingularCone {
    pub rays: Vec<Vector>,
    pub ray_set: BTreeSet<usize>,
    pub dim: usize,
    pub isolated: bool,
    pub distant: bool,
}

#[derive(Clone, Debug)]
pub struct SingularityReport {
    pub singular_cones: Vec<SingularCone>,
    pub all_isolated: bool,
    pub all_distant: bool,
}

impl SingularityReport {
    pub fn is_smooth(&self) -> bool {
        self.singular_cones.is_empty()
    }
}

/// An incomplete 2D fan whose maximal cones are two-dimensional and form one
/// counterclockwise chain σ_1, …, σ_k. `rays[0]` and `rays[k]` are the two
/// boundary rays; `rays[i]` for 0 < i < k is the shared ray σ_i ∩ σ_{i+1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clump {
    pub n: usize,
    pub cones: Vec<Cone>,
    pub rays: Vec<Vector>,
}

impl Clump {
    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    /// The clump as a fan, maximal cones in chain order.
    pub fn to_fan(&self) -> Fan {
        let rays: Vec<Vector> = {
            let mut seen = BTreeSet::new();
            self.rays
                .iter()
                .filter(|r| seen.insert((*r).clone()))
                .cloned()
                .collect()
        };
        let max_cone_ray_sets = self
            .cones
            .iter()
            .map(|c| {
                c.rays
                    .iter()
                    .map(|r| rays.iter().position(|x| x == r).unwrap())
                    .collect()
            })
            .collect();
        Fan {
            n: self.n,
            rays,
            max_cones: self.cones.clone(),
            max_cone_ray_sets,
        }
    }
}

/// Chain structure of a fan that is a single clump.
pub fn clump_structure(fan: &Fan) -> Result<Clump, FanError> {
    if fan.n != 2 {
        return Err(FanError::NotTwoDimensional);
    }
    if fan.is_complete() {
        return Err(FanError::CompleteFan);
    }
    if !fan.max_cones.iter().all(|c| c.dim() == 2) {
        return Err(FanError::NotAClump);
    }
    let members: Vec<usize> = (0..fan.max_cones.len()).collect();
    let sets = &fan.max_cone_ray_sets;
    // connectivity of the maximal cones under shared-ray adjacency
    let mut reached = vec![false; members.len()];
    reached[0] = true;
    let mut stack = vec![0usize];
    while let Some(a) = stack.pop() {
        for b in 0..members.len() {
            if !reached[b] && !sets[a].is_disjoint(&sets[b]) {
                reached[b] = true;
                stack.push(b);
            }
        }
    }
    if !reached.iter().all(|&r| r) {
        return Err(FanError::NotAClump);
    }
    let order = fan.chain_order(&members);
    let cones: Vec<Cone> = order.iter().map(|&i| fan.max_cones[i].clone()).collect();
    Ok(clump_from_chain(cones))
}

fn clump_from_chain(cones: Vec<Cone>) -> Clump {
    assert!(!cones.is_empty(), "clump needs at least one cone");
    let n = cones[0].n;
    let (s, mut end) = ccw_pair(&cones[0]);
    let mut rays = vec![s];
    for c in &cones[1..] {
        let (s, e) = ccw_pair(c);
        assert_eq!(s, end, "chain cones must share consecutive rays");
        rays.push(s);
        end = e;
    }
    rays.push(end);
    Clump { n, cones, rays }
}

/// The boundary fan of a positive-dimensional cone: its facets are the
/// maximal cones (all proper faces arise as their faces).
pub fn boundary_fan(cone: &Cone) -> Fan {
    assert!(cone.dim() > 0, "the zero cone has an empty boundary");
    let facets = cone.facets();
    let mut rays: Vec<Vector> = Vec::new();
    for f in &facets {
        for r in &f.rays {
            if !rays.contains(r) {
                rays.push(r.clone());
            }
        }
    }
    rays.sort();
    let max_cone_ray_sets = facets
        .iter()
        .map(|c| {
            c.rays
                .iter()
                .map(|r| rays.iter().position(|x| x == r).unwrap())
                .collect()
        })
        .collect();
    Fan {
        n: cone.n,
        rays,
        max_cones: facets,
        max_cone_ray_sets,
    }
}

fn cross2(a: &[BigInt], b: &[BigInt]) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn half_turn(v: &[BigInt]) -> u8 {
    if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
        0
    } else {
        1
    }
}

/// Total order on nonzero 2D vectors by angle in [0, 2π), measured from the
/// positive x-axis.
pub fn angle_cmp(a: &[BigInt], b: &[BigInt]) -> Ordering {
    half_turn(a).cmp(&half_turn(b)).then_with(|| {
        let c = cross2(a, b);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Counterclockwise (start, end) rays of a two-dimensional cone in the plane.
fn ccw_pair(c: &Cone) -> (Vector, Vector) {
    assert_eq!(c.n, 2, "planar cones only");
    assert_eq!(c.dim(), 2, "chain cones must be two-dimensional");
    let a = c.rays[0].clone();
    let b = c.rays[1].clone();
    if cross2(&a, &b).is_positive() {
        (a, b)
    } else {
        (b, a)
    }
}
