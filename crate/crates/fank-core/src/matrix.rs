//! Exact integer linear algebra: Smith normal form with tracked unimodular
//! transforms, row Hermite normal form, determinants, ranks, kernels, and
//! integer solving. All arithmetic is arbitrary precision; no floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub type Vector = Vec<BigInt>;

/// Builds a `Vec<BigInt>` from machine integers; test and construction helper.
pub fn vec_bigint(v: &[i64]) -> Vector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Dense row-major matrix over Z.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vector]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().cloned().collect(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vector]) -> Self {
        IntMatrix::from_rows(cols).transpose()
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vector> = rows.iter().map(|r| vec_bigint(r)).collect();
        IntMatrix::from_rows(&rows)
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vector {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vector {
        assert_eq!(self.cols, x.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &x[j]).sum())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == IntMatrix::identity(self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn rows_to_vec(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn cols_to_vec(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// U·A·V = D with U, V unimodular and D diagonal, d_1 | d_2 | …, all d_i ≥ 0.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub d: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// Diagonal entries d_1, …, d_min(rows,cols).
    pub fn diagonal(&self) -> Vector {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }
}

/// Elementary-operation worker keeping m = u·a·v in sync with u⁻¹ and v⁻¹.
struct SmithWorker {
    m: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SmithWorker {
    fn new(a: &IntMatrix) -> Self {
        SmithWorker {
            m: a.clone(),
            u: IntMatrix::identity(a.rows),
            u_inv: IntMatrix::identity(a.rows),
            v: IntMatrix::identity(a.cols),
            v_inv: IntMatrix::identity(a.cols),
        }
    }

    fn row_swap(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        for j in 0..self.m.cols {
            let (a, b) = (self.m.get(i, j).clone(), self.m.get(k, j).clone());
            self.m.set(i, j, b);
            self.m.set(k, j, a);
        }
        for j in 0..self.u.cols {
            let (a, b) = (self.u.get(i, j).clone(), self.u.get(k, j).clone());
            self.u.set(i, j, b);
            self.u.set(k, j, a);
        }
        for r in 0..self.u_inv.rows {
            let (a, b) = (self.u_inv.get(r, i).clone(), self.u_inv.get(r, k).clone());
            self.u_inv.set(r, i, b);
            self.u_inv.set(r, k, a);
        }
    }

    /// row_i += q · row_k (in m and u); u⁻¹ gets col_k −= q · col_i.
    fn row_addmul(&mut self, i: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.m.cols {
            let v = self.m.get(i, j) + q * self.m.get(k, j);
            self.m.set(i, j, v);
        }
        for j in 0..self.u.cols {
            let v = self.u.get(i, j) + q * self.u.get(k, j);
            self.u.set(i, j, v);
        }
        for r in 0..self.u_inv.rows {
            let v = self.u_inv.get(r, k) - q * self.u_inv.get(r, i);
            self.u_inv.set(r, k, v);
        }
    }

    fn row_neg(&mut self, i: usize) {
        for j in 0..self.m.cols {
            let v = -self.m.get(i, j);
            self.m.set(i, j, v);
        }
        for j in 0..self.u.cols {
            let v = -self.u.get(i, j);
            self.u.set(i, j, v);
        }
        for r in 0..self.u_inv.rows {
            let v = -self.u_inv.get(r, i);
            self.u_inv.set(r, i, v);
        }
    }

    fn col_swap(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        for i in 0..self.m.rows {
            let (a, b) = (self.m.get(i, j).clone(), self.m.get(i, k).clone());
            self.m.set(i, j, b);
            self.m.set(i, k, a);
        }
        for i in 0..self.v.rows {
            let (a, b) = (self.v.get(i, j).clone(), self.v.get(i, k).clone());
            self.v.set(i, j, b);
            self.v.set(i, k, a);
        }
        for c in 0..self.v_inv.cols {
            let (a, b) = (self.v_inv.get(j, c).clone(), self.v_inv.get(k, c).clone());
            self.v_inv.set(j, c, b);
            self.v_inv.set(k, c, a);
        }
    }

    /// col_j += q · col_k (in m and v); v⁻¹ gets row_k −= q · row_j.
    fn col_addmul(&mut self, j: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.m.rows {
            let v = self.m.get(i, j) + q * self.m.get(i, k);
            self.m.set(i, j, v);
        }
        for i in 0..self.v.rows {
            let v = self.v.get(i, j) + q * self.v.get(i, k);
            self.v.set(i, j, v);
        }
        for c in 0..self.v_inv.cols {
            let v = self.v_inv.get(k, c) - q * self.v_inv.get(j, c);
            self.v_inv.set(k, c, v);
        }
    }

}

/// Smallest-absolute-value nonzero entry of the trailing submatrix at (t,t).
fn find_pivot(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows {
        for j in t..m.cols {
            let e = m.get(i, j);
            if e.is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some((bi, bj)) => {
                    if e.abs() < m.get(bi, bj).abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let mut w = SmithWorker::new(a);
    let t_max = a.rows.min(a.cols);
    let mut rank = 0;
    for t in 0..t_max {
        if find_pivot(&w.m, t).is_none() {
            break;
        }
        'outer: loop {
            let (pi, pj) = find_pivot(&w.m, t).expect("pivot vanished");
            w.row_swap(t, pi);
            w.col_swap(t, pj);
            let pivot = w.m.get(t, t).clone();
            for i in (t + 1)..w.m.rows {
                if !w.m.get(i, t).is_zero() {
                    let q = w.m.get(i, t).div_floor(&pivot);
                    w.row_addmul(i, t, &(-q));
                    if !w.m.get(i, t).is_zero() {
                        continue 'outer;
                    }
                }
            }
            for j in (t + 1)..w.m.cols {
                if !w.m.get(t, j).is_zero() {
                    let q = w.m.get(t, j).div_floor(&pivot);
                    w.col_addmul(j, t, &(-q));
                    if !w.m.get(t, j).is_zero() {
                        continue 'outer;
                    }
                }
            }
            for i in (t + 1)..w.m.rows {
                for j in (t + 1)..w.m.cols {
                    if !w.m.get(i, j).mod_floor(&pivot).is_zero() {
                        w.row_addmul(t, i, &BigInt::one());
                        continue 'outer;
                    }
                }
            }
            break;
        }
        if w.m.get(t, t).is_negative() {
            w.row_neg(t);
        }
        rank += 1;
    }
    SmithDecomposition {
        u: w.u,
        u_inv: w.u_inv,
        v: w.v,
        v_inv: w.v_inv,
        d: w.m,
        rank,
    }
}

/// Row-style Hermite normal form of A (pivots positive, pivot columns strictly
/// increasing, entries above each pivot reduced to [0, pivot)). Returns the
/// nonzero rows; this is the canonical basis of the row span.
pub fn hermite_rows(a: &IntMatrix) -> Vec<Vector> {
    let mut m = a.clone();
    let mut r = 0;
    for j in 0..m.cols {
        if r == m.rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..m.rows {
                if m.get(i, j).is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(i),
                    Some(b) => {
                        if m.get(i, j).abs() < m.get(b, j).abs() {
                            best = Some(i);
                        }
                    }
                }
            }
            let Some(p) = best else { break };
            if p != r {
                for c in 0..m.cols {
                    let (x, y) = (m.get(r, c).clone(), m.get(p, c).clone());
                    m.set(r, c, y);
                    m.set(p, c, x);
                }
            }
            let pivot = m.get(r, j).clone();
            let mut cleared = true;
            for i in (r + 1)..m.rows {
                if !m.get(i, j).is_zero() {
                    let q = m.get(i, j).div_floor(&pivot);
                    for c in 0..m.cols {
                        let v = m.get(i, c) - &q * m.get(r, c);
                        m.set(i, c, v);
                    }
                    if !m.get(i, j).is_zero() {
                        cleared = false;
                    }
                }
            }
            if cleared {
                break;
            }
        }
        if m.get(r, j).is_zero() {
            continue;
        }
        if m.get(r, j).is_negative() {
            for c in 0..m.cols {
                let v = -m.get(r, c);
                m.set(r, c, v);
            }
        }
        let pivot = m.get(r, j).clone();
        for i in 0..r {
            let q = m.get(i, j).div_floor(&pivot);
            if !q.is_zero() {
                for c in 0..m.cols {
                    let v = m.get(i, c) - &q * m.get(r, c);
                    m.set(i, c, v);
                }
            }
        }
        r += 1;
    }
    (0..r).map(|i| m.row(i)).collect()
}

/// Rank over Q, by fraction-free elimination with gcd row scaling.
pub fn rank(a: &IntMatrix) -> usize {
    let mut m = a.clone();
    let mut r = 0;
    for j in 0..m.cols {
        if r == m.rows {
            break;
        }
        let mut best: Option<usize> = None;
        for i in r..m.rows {
            if m.get(i, j).is_zero() {
                continue;
            }
            match best {
                None => best = Some(i),
                Some(b) => {
                    if m.get(i, j).abs() < m.get(b, j).abs() {
                        best = Some(i);
                    }
                }
            }
        }
        let Some(p) = best else { continue };
        if p != r {
            for c in 0..m.cols {
                let (x, y) = (m.get(r, c).clone(), m.get(p, c).clone());
                m.set(r, c, y);
                m.set(p, c, x);
            }
        }
        let pivot = m.get(r, j).clone();
        for i in (r + 1)..m.rows {
            let e = m.get(i, j).clone();
            if e.is_zero() {
                continue;
            }
            let mut g = BigInt::zero();
            for c in 0..m.cols {
                let v = &pivot * m.get(i, c) - &e * m.get(r, c);
                g = g.gcd(&v);
                m.set(i, c, v);
            }
            if !g.is_zero() && !g.is_one() {
                for c in 0..m.cols {
                    let v = m.get(i, c) / &g;
                    m.set(i, c, v);
                }
            }
        }
        r += 1;
    }
    r
}

/// Determinant by the Bareiss fraction-free algorithm. Panics if not square.
pub fn det(a: &IntMatrix) -> BigInt {
    assert_eq!(a.rows, a.cols, "det of non-square matrix");
    let n = a.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..(n - 1) {
        if m.get(k, k).is_zero() {
            let swap = ((k + 1)..n).find(|&i| !m.get(i, k).is_zero());
            match swap {
                None => return BigInt::zero(),
                Some(i) => {
                    for c in 0..n {
                        let (x, y) = (m.get(k, c).clone(), m.get(i, c).clone());
                        m.set(k, c, y);
                        m.set(i, c, x);
                    }
                    sign = -sign;
                }
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j);
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division not exact");
                m.set(i, j, q);
            }
            m.set(i, k, BigInt::zero());
        }
        prev = m.get(k, k).clone();
    }
    sign * m.get(n - 1, n - 1).clone()
}

/// Basis of the integer kernel {x ∈ Z^cols : A·x = 0}; saturated because the
/// vectors are columns of the unimodular V from the Smith decomposition.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vector> {
    let s = smith_normal_form(a);
    (s.rank..a.cols).map(|j| s.v.col(j)).collect()
}

/// One integer solution x of A·x = b, if one exists.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vector> {
    assert_eq!(a.rows, b.len(), "dimension mismatch");
    let s = smith_normal_form(a);
    let ub = s.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.cols];
    for (i, ubi) in ub.iter().enumerate() {
        if i < s.rank {
            let d = s.d.get(i, i);
            let (q, r) = ubi.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ubi.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// Adjugate of a nonsingular square matrix: adj(A)·A = A·adj(A) = det(A)·I.
pub fn adjugate(a: &IntMatrix) -> Option<IntMatrix> {
    assert_eq!(a.rows, a.cols, "adjugate of non-square matrix");
    let n = a.rows;
    let d = det(a);
    if d.is_zero() {
        return None;
    }
    let det_rat = BigRational::from(d);
    // Gauss-Jordan inverse over Q, scaled back by det.
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from(a.get(i, j).clone())
                    } else if j - n == i {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero()).expect("nonsingular");
        m.swap(k, p);
        let pivot = m[k][k].clone();
        for j in 0..2 * n {
            m[k][j] = &m[k][j] / &pivot;
        }
        for i in 0..n {
            if i != k && !m[i][k].is_zero() {
                let f = m[i][k].clone();
                for j in 0..2 * n {
                    m[i][j] = &m[i][j] - &f * &m[k][j];
                }
            }
        }
    }
    let mut adj = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let scaled = &m[i][n + j] * &det_rat;
            debug_assert!(scaled.is_integer(), "adjugate entry not integral");
            adj.set(i, j, scaled.to_integer());
        }
    }
    Some(adj)
}

/// Dot product over Z.
pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    assert_eq!(a.len(), b.len(), "dimension mismatch");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
