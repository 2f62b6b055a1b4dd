//! Exact rational linear feasibility: phase-1 simplex over BigRational with
//! Bland's rule, so termination is guaranteed and no floating point appears.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Ge,
    Le,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub rel: Rel,
    pub rhs: BigRational,
}

impl Constraint {
    pub fn from_int(coeffs: &[BigInt], rel: Rel, rhs: i64) -> Self {
        Constraint {
            coeffs: coeffs
                .iter()
                .map(|c| BigRational::from(c.clone()))
                .collect(),
            rel,
            rhs: BigRational::from(BigInt::from(rhs)),
        }
    }
}

/// Some satisfying assignment of the system, or None if infeasible.
/// `nonneg_vars` constrains every variable to be ≥ 0; otherwise variables are
/// free (internally split into positive and negative parts).
pub fn feasible(
    num_vars: usize,
    nonneg_vars: bool,
    constraints: &[Constraint],
) -> Option<Vec<BigRational>> {
    let s = if nonneg_vars { num_vars } else { 2 * num_vars };
    let m = constraints.len();
    let extra = constraints
        .iter()
        .filter(|c| matches!(c.rel, Rel::Ge | Rel::Le))
        .count();
    let total = s + extra + m;
    let zero = BigRational::zero();
    let one = BigRational::one();

    let mut t: Vec<Vec<BigRational>> = vec![vec![zero.clone(); total + 1]; m];
    let mut e = 0;
    for (i, c) in constraints.iter().enumerate() {
        assert_eq!(c.coeffs.len(), num_vars, "constraint arity mismatch");
        for j in 0..num_vars {
            if nonneg_vars {
                t[i][j] = c.coeffs[j].clone();
            } else {
                t[i][2 * j] = c.coeffs[j].clone();
                t[i][2 * j + 1] = -&c.coeffs[j];
            }
        }
        match c.rel {
            Rel::Ge => {
                t[i][s + e] = -&one;
                e += 1;
            }
            Rel::Le => {
                t[i][s + e] = one.clone();
                e += 1;
            }
            Rel::Eq => {}
        }
        t[i][total] = c.rhs.clone();
        if t[i][total].is_negative() {
            for v in t[i].iter_mut() {
                *v = -&*v;
            }
        }
        // Artificial basis column, set after any sign flip.
        t[i][s + extra + i] = one.clone();
    }

    // Reduced costs for minimizing the artificial sum, with artificials basic.
    let mut obj = vec![zero.clone(); total + 1];
    for j in 0..=total {
        let cost = if (s + extra..total).contains(&j) {
            one.clone()
        } else {
            zero.clone()
        };
        let col_sum: BigRational = t.iter().map(|row| row[j].clone()).sum();
        obj[j] = cost - col_sum;
    }

    let mut basis: Vec<usize> = (0..m).map(|i| s + extra + i).collect();
    loop {
        // Bland: entering = smallest index with negative reduced cost.
        let Some(jin) = (0..total).find(|&j| obj[j].is_negative()) else {
            break;
        };
        // Leaving: minimum ratio; ties broken by smallest basis variable.
        let mut pick: Option<(BigRational, usize, usize)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[jin].is_positive() {
                let ratio = &row[total] / &row[jin];
                let better = match &pick {
                    None => true,
                    Some((r, bv, _)) => ratio < *r || (ratio == *r && basis[i] < *bv),
                };
                if better {
                    pick = Some((ratio, basis[i], i));
                }
            }
        }
        let (_, _, piv) = pick.expect("phase-1 objective is bounded below by zero");
        let scale = t[piv][jin].clone();
        for v in t[piv].iter_mut() {
            *v = &*v / &scale;
        }
        for i in 0..m {
            if i != piv && !t[i][jin].is_zero() {
                let f = t[i][jin].clone();
                for j in 0..=total {
                    let sub = &f * &t[piv][j];
                    t[i][j] = &t[i][j] - &sub;
                }
            }
        }
        if !obj[jin].is_zero() {
            let f = obj[jin].clone();
            for j in 0..=total {
                let sub = &f * &t[piv][j];
                obj[j] = &obj[j] - &sub;
            }
        }
        basis[piv] = jin;
    }

    // Optimum of the artificial sum is −obj[total]; zero means feasible.
    if !obj[total].is_zero() {
        return None;
    }
    let mut values = vec![zero.clone(); total];
    for (i, &b) in basis.iter().enumerate() {
        values[b] = t[i][total].clone();
    }
    let x: Vec<BigRational> = (0..num_vars)
        .map(|j| {
            if nonneg_vars {
                values[j].clone()
            } else {
                &values[2 * j] - &values[2 * j + 1]
            }
        })
        .collect();
    debug_assert!(satisfies(&x, constraints), "simplex returned a non-solution");
    Some(x)
}

/// Checks a point against a constraint system.
pub fn satisfies(x: &[BigRational], constraints: &[Constraint]) -> bool {
    constraints.iter().all(|c| {
        let lhs: BigRational = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        match c.rel {
            Rel::Ge => lhs >= c.rhs,
            Rel::Le => lhs <= c.rhs,
            Rel::Eq => lhs == c.rhs,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::vec_bigint;

    fn c(coeffs: &[i64], rel: Rel, rhs: i64) -> Constraint {
        Constraint::from_int(&vec_bigint(coeffs), rel, rhs)
    }

    #[test]
    fn feasible_free_vars() {
        let cons = vec![
            c(&[1, 0], Rel::Ge, 1),
            c(&[0, 1], Rel::Ge, 1),
            c(&[1, 1], Rel::Eq, 3),
        ];
        let x = feasible(2, false, &cons).expect("feasible");
        assert!(satisfies(&x, &cons));
    }

    #[test]
    fn infeasible_interval() {
        let cons = vec![c(&[1], Rel::Ge, 2), c(&[1], Rel::Le, 1)];
        assert!(feasible(1, false, &cons).is_none());
    }

    #[test]
    fn negative_solution_found() {
        let cons = vec![c(&[1], Rel::Le, -5)];
        let x = feasible(1, false, &cons).expect("feasible");
        assert!(satisfies(&x, &cons));
    }

    #[test]
    fn pointedness_style_systems() {
        // Rays (1,0),(0,1): no nonnegative combination sums to zero with mass 1.
        let cons = vec![
            c(&[1, 0], Rel::Eq, 0),
            c(&[0, 1], Rel::Eq, 0),
            c(&[1, 1], Rel::Eq, 1),
        ];
        assert!(feasible(2, true, &cons).is_none());
        // Rays (1,0),(−1,0): the combination (1/2, 1/2) works.
        let cons = vec![
            c(&[1, -1], Rel::Eq, 0),
            c(&[0, 0], Rel::Eq, 0),
            c(&[1, 1], Rel::Eq, 1),
        ];
        let x = feasible(2, true, &cons).expect("feasible");
        assert!(satisfies(&x, &cons));
        assert!(!x[0].is_negative() && !x[1].is_negative());
    }

    #[test]
    fn redundant_and_degenerate_rows() {
        let cons = vec![
            c(&[1, 1], Rel::Ge, 2),
            c(&[2, 2], Rel::Ge, 4),
            c(&[1, 1], Rel::Le, 2),
            c(&[1, -1], Rel::Eq, 0),
        ];
        let x = feasible(2, false, &cons).expect("feasible");
        assert!(satisfies(&x, &cons));
        assert_eq!(x[0], x[1]);
    }
}
