//! Shared randomized constructions for the acceptance suite: seeded RNG,
//! random complete 2D fans, smooth cones and fans, random Laurent
//! polynomials, and the brute-force window cokernel oracle.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fank_core::cone::{cone_from_rays, Cone};
use fank_core::fan::{fan_from_description, Fan};
use fank_core::ideal::LatticeIdeal;
use fank_core::lattice::{self, Lattice};
use fank_core::laurent::LaurentPoly;
use fank_core::matrix::{self, vec_bigint, IntMatrix, Vector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

fn small(b: &BigInt) -> i64 {
    i64::try_from(b).expect("coordinate fits in i64")
}

fn cross(a: &[BigInt], b: &[BigInt]) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Rays sorted counterclockwise starting from the positive x half-plane.
fn angle_sorted(mut rays: Vec<Vector>) -> Vec<Vector> {
    let lower = |v: &Vector| -> u8 {
        let y = v[1].sign();
        if y == num_bigint::Sign::Plus || (y == num_bigint::Sign::NoSign && v[0].is_positive()) {
            0
        } else {
            1
        }
    };
    rays.sort_by(|a, b| {
        lower(a)
            .cmp(&lower(b))
            .then_with(|| BigInt::zero().cmp(&cross(a, b)))
    });
    rays
}

/// Random complete 2D fan from primitive rays with coordinates in [−5, 5]
/// passing `keep`; maximal cones are the consecutive ray pairs.
pub fn random_complete_2d_fan(rng: &mut ChaCha8Rng, keep: &dyn Fn(i64, i64) -> bool) -> Fan {
    loop {
        let want = rng.gen_range(3..=8);
        let mut rays: Vec<Vector> = Vec::new();
        for _ in 0..200 {
            if rays.len() >= want {
                break;
            }
            let x = rng.gen_range(-5..=5i64);
            let y = rng.gen_range(-5..=5i64);
            if (x, y) == (0, 0) {
                continue;
            }
            let p = lattice::primitive(&vec_bigint(&[x, y])).expect("nonzero");
            // primitivization may leave the constrained sublattice
            if !keep(small(&p[0]), small(&p[1])) {
                continue;
            }
            if !rays.contains(&p) {
                rays.push(p);
            }
        }
        if rays.len() < 3 {
            continue;
        }
        let rays = angle_sorted(rays);
        let k = rays.len();
        if !(0..k).all(|i| cross(&rays[i], &rays[(i + 1) % k]).is_positive()) {
            continue;
        }
        let cones: Vec<Vec<usize>> = (0..k).map(|i| vec![i, (i + 1) % k]).collect();
        let (fan, warnings) = fan_from_description(2, &rays, &cones).expect("valid by construction");
        assert!(warnings.is_empty(), "rays were primitive and distinct");
        return fan;
    }
}

/// Random complete 2D fan whose rays span a sublattice of the given index
/// m ∈ {2, 3, 4}.
pub fn random_indexed_2d_fan(rng: &mut ChaCha8Rng, m: i64) -> Fan {
    let keep: Box<dyn Fn(i64, i64) -> bool> = match m {
        2 => Box::new(|x: i64, y: i64| (x + y).rem_euclid(2) == 0),
        3 => Box::new(|x: i64, y: i64| (x - y).rem_euclid(3) == 0),
        4 => {
            if rng.gen_bool(0.5) {
                Box::new(|x: i64, y: i64| (x - y).rem_euclid(4) == 0)
            } else {
                Box::new(|x: i64, y: i64| x.abs() == 2 && y.rem_euclid(2) == 1)
            }
        }
        _ => panic!("only indices 2, 3, 4 are generated"),
    };
    loop {
        let fan = random_complete_2d_fan(rng, keep.as_ref());
        let span = lattice::spans_ambient(2, &fan.rays);
        if span.index == Some(bi(m)) {
            return fan;
        }
    }
}

pub fn random_laurent(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_terms: usize,
    emax: i64,
    cmax: i64,
) -> LaurentPoly {
    let t = rng.gen_range(1..=max_terms);
    let mut f = LaurentPoly::zero(n);
    for _ in 0..t {
        let exp: Vector = (0..n).map(|_| bi(rng.gen_range(-emax..=emax))).collect();
        let c = bi(rng.gen_range(-cmax..=cmax));
        f = &f + &LaurentPoly::monomial(n, exp, c);
    }
    f
}

/// Product of random elementary row operations and sign flips; |det| = 1.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize, steps: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n == 1 {
        return u;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let q = bi(rng.gen_range(-2..=2i64));
        for c in 0..n {
            let v = u.get(i, c) + &q * u.get(j, c);
            u.set(i, c, v);
        }
        if rng.gen_bool(0.3) {
            for c in 0..n {
                let v = -u.get(i, c);
                u.set(i, c, v);
            }
        }
    }
    u
}

/// Inverse of a matrix with determinant ±1, still integral.
pub fn inverse_unimodular(a: &IntMatrix) -> IntMatrix {
    let adj = matrix::adjugate(a).expect("square matrix");
    let d = matrix::det(a);
    assert!(d.abs() == bi(1), "matrix must be unimodular");
    if d == bi(-1) {
        let mut out = adj.clone();
        for i in 0..out.rows {
            for j in 0..out.cols {
                let v = -out.get(i, j);
                out.set(i, j, v);
            }
        }
        out
    } else {
        adj
    }
}

/// Random smooth cone of dimension d in Z^n: a unimodular image of the first
/// d coordinate rays.
pub fn random_smooth_cone(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Cone {
    let u = random_unimodular(rng, n, 4);
    let rays: Vec<Vector> = (0..d).map(|i| u.col(i)).collect();
    let cone = cone_from_rays(n, &rays).expect("independent columns");
    assert!(cone.is_smooth(), "basis columns give a smooth cone");
    cone
}

/// Random smooth complete fan in dimension 2 or 3: the coordinate-orthant
/// fan, a few stellar subdivisions at ray sums, then a unimodular change of
/// coordinates.
pub fn random_smooth_complete_fan(rng: &mut ChaCha8Rng, n: usize, subdivisions: usize) -> Fan {
    assert!(n == 2 || n == 3, "generator covers dimensions 2 and 3");
    let mut cones: Vec<Vec<Vector>> = Vec::new();
    for mask in 0..(1u32 << n) {
        let mut rs = Vec::new();
        for i in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[i] = if mask & (1 << i) != 0 { bi(-1) } else { bi(1) };
            rs.push(e);
        }
        cones.push(rs);
    }
    for _ in 0..subdivisions {
        let idx = rng.gen_range(0..cones.len());
        let old = cones.swap_remove(idx);
        let mut s = vec![BigInt::zero(); n];
        for r in &old {
            for (sk, rk) in s.iter_mut().zip(r) {
                *sk += rk;
            }
        }
        // the barycenter of a unimodular basis is primitive and subdividing
        // at it keeps every piece unimodular
        for i in 0..old.len() {
            let mut c = old.clone();
            c[i] = s.clone();
            cones.push(c);
        }
    }
    let u = random_unimodular(rng, n, 3);
    let mut rays: Vec<Vector> = Vec::new();
    let mut cone_idx: Vec<Vec<usize>> = Vec::new();
    for c in &cones {
        let mut ix = Vec::new();
        for r in c {
            let tr = u.mul_vec(r);
            let p = match rays.iter().position(|x| *x == tr) {
                Some(p) => p,
                None => {
                    rays.push(tr);
                    rays.len() - 1
                }
            };
            ix.push(p);
        }
        cone_idx.push(ix);
    }
    let (fan, warnings) = fan_from_description(n, &rays, &cone_idx).expect("subdivided orthants");
    assert!(warnings.is_empty());
    assert!(fan.is_smooth() && fan.is_complete());
    fan
}

/// Exponent of a monomial-valued piecewise polynomial per maximal cone, from
/// a random integer weight per ray: on each cone the exponent pairs to the
/// ray weights under the dual basis, so differences vanish on shared faces.
pub fn random_monomial_plp_exponents(rng: &mut ChaCha8Rng, fan: &Fan) -> Vec<Vector> {
    let weights: Vec<BigInt> = fan.rays.iter().map(|_| bi(rng.gen_range(-2..=2))).collect();
    fan.max_cones
        .iter()
        .map(|c| {
            let r = IntMatrix::from_cols(&c.rays);
            let inv = inverse_unimodular(&r);
            let mut m = vec![BigInt::zero(); fan.n];
            for (i, ray) in c.rays.iter().enumerate() {
                let k = fan.ray_index(ray).expect("cone rays are fan rays");
                for (mj, rj) in m.iter_mut().zip(&inv.row(i)) {
                    *mj += &weights[k] * rj;
                }
            }
            m
        })
        .collect()
}

/// Primitive generator of the rank-one lattice orthogonal to a 2D ray.
pub fn ray_normal(r: &Vector) -> Vector {
    let perp = lattice::perp_lattice(2, std::slice::from_ref(r));
    assert_eq!(perp.rank(), 1);
    perp.basis.col(0)
}

pub fn random_lattice(rng: &mut ChaCha8Rng, n: usize, max_gens: usize, emax: i64) -> Lattice {
    let g = rng.gen_range(0..=max_gens);
    let gens: Vec<Vector> = (0..g)
        .map(|_| (0..n).map(|_| bi(rng.gen_range(-emax..=emax))).collect())
        .collect();
    lattice::hermite_basis(n, &gens)
}

/// Brute-force odd-rank oracle over the exponent window [−3, 3]²: the
/// dimension of the compatible boundary pairs on one proper splitting,
/// minus the span of the window-supported image generators (constants on
/// both boundary rays, plus one-sided bumps whose exponent jump lies in one
/// clump's ray-normal lattice). Entirely independent of the span-index
/// formula used by the classifier.
pub fn window_coker_rank(fan: &Fan) -> usize {
    let (d1, d2) = fan.complete_2d_splitting().expect("complete 2D fan");
    let nu_a = ray_normal(&d1.rays[0]);
    let nu_b = ray_normal(&d1.rays[d1.len()]);
    let normals = |rays: &[Vector]| -> Vec<Vector> { rays.iter().map(ray_normal).collect() };
    let l1 = lattice::hermite_basis(2, &normals(&d1.rays));
    let l2 = lattice::hermite_basis(2, &normals(&d2.rays));
    let ja = LatticeIdeal::new(2, vec![nu_a]);
    let jb = LatticeIdeal::new(2, vec![nu_b]);

    let mut window: Vec<Vector> = Vec::new();
    for x in -3..=3i64 {
        for y in -3..=3i64 {
            window.push(vec_bigint(&[x, y]));
        }
    }
    let mut ca: BTreeMap<Vector, usize> = BTreeMap::new();
    let mut cb: BTreeMap<Vector, usize> = BTreeMap::new();
    for u in &window {
        let next = ca.len();
        ca.entry(ja.canonical_rep(u)).or_insert(next);
        let next = cb.len();
        cb.entry(jb.canonical_rep(u)).or_insert(next);
    }
    let cols = ca.len() + cb.len();

    let mut rows: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for u in &window {
        let mut row = vec![BigInt::zero(); cols];
        row[ca[&ja.canonical_rep(u)]] += 1;
        row[ca.len() + cb[&jb.canonical_rep(u)]] += 1;
        rows.insert(row);
    }
    for i in 0..window.len() {
        for j in (i + 1)..window.len() {
            let diff: Vector = window[i]
                .iter()
                .zip(&window[j])
                .map(|(a, b)| a - b)
                .collect();
            let in_l1 = lattice::lattice_contains(&l1, &diff)
                .expect("rank 2")
                .is_some();
            let in_l2 = lattice::lattice_contains(&l2, &diff)
                .expect("rank 2")
                .is_some();
            if !in_l1 && !in_l2 {
                continue;
            }
            let iu = cb[&jb.canonical_rep(&window[i])];
            let iv = cb[&jb.canonical_rep(&window[j])];
            if iu == iv {
                continue;
            }
            let mut row = vec![BigInt::zero(); cols];
            row[ca.len() + iu] += 1;
            row[ca.len() + iv] -= 1;
            rows.insert(row);
        }
    }
    let row_vec: Vec<Vector> = rows.into_iter().collect();
    let image_rank = matrix::rank(&IntMatrix::from_rows(&row_vec));
    (cols - 1) - image_rank
}
