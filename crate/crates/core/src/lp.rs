//! Exact rational phase-1 simplex for LP feasibility.
//!
//! Decides whether {x ≥ 0 : Ax = b} is nonempty and returns a rational
//! feasible point when it is. Pivoting is Bland's rule on both the entering
//! and the leaving side, so the run terminates and the output is deterministic
//! for identical input. Dense tableau; all problems here are desk scale.

use num_traits::{Signed, Zero};

use crate::exact::RatMat;
use crate::scalar::{rat_zero, Rat};

/// Finds x ≥ 0 with Ax = b exactly, or None when the system is infeasible.
pub fn feasible_point(a: &RatMat, b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.nrows();
    let cols = a.ncols();
    assert_eq!(b.len(), rows, "rhs length mismatch");

    // Tableau [A | I | b] with artificial basis, rhs made nonnegative.
    let width = cols + rows + 1;
    let mut t = vec![vec![rat_zero(); width]; rows];
    for i in 0..rows {
        let flip = b[i].is_negative();
        for j in 0..cols {
            t[i][j] = if flip { -a[(i, j)].clone() } else { a[(i, j)].clone() };
        }
        t[i][cols + i] = Rat::from_integer(1.into());
        t[i][width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    // Phase-1 objective: minimize the sum of artificials. Reduced-cost row
    // after pricing out the artificial basis.
    let mut obj = vec![rat_zero(); width];
    for j in 0..width {
        if (cols..cols + rows).contains(&j) {
            continue;
        }
        let mut s = rat_zero();
        for row in &t {
            s += &row[j];
        }
        obj[j] = -s;
    }

    loop {
        // Bland entering rule: smallest variable index with negative reduced cost.
        let Some(enter) = (0..cols + rows).find(|&j| obj[j].is_negative()) else {
            break;
        };
        // Ratio test; ties resolved by smallest basic variable index.
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..rows {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &best {
                    None => true,
                    Some(cur) => {
                        ratio < *cur
                            || (ratio == *cur
                                && basis[i] < basis[leave.expect("leave set with best")])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        // The phase-1 objective is bounded below, so a pivot row always exists.
        let li = leave.expect("phase-1 objective is bounded");
        pivot(&mut t, &mut obj, li, enter);
        basis[li] = enter;
    }

    // Feasible iff the artificial total is zero, i.e. every basic artificial
    // sits at value zero and contributes nothing.
    let residual: Rat = basis
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= cols)
        .map(|(i, _)| t[i][width - 1].clone())
        .fold(rat_zero(), |s, v| s + v);
    if !residual.is_zero() {
        return None;
    }
    let mut x = vec![rat_zero(); cols];
    for (i, &v) in basis.iter().enumerate() {
        if v < cols {
            x[v] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<Rat>], obj: &mut [Rat], row: usize, col: usize) {
    let width = t[0].len();
    let inv = t[row][col].recip();
    for j in 0..width {
        let v = &t[row][j] * &inv;
        t[row][j] = v;
    }
    for i in 0..t.len() {
        if i != row && !t[i][col].is_zero() {
            let f = t[i][col].clone();
            for j in 0..width {
                let sub = &f * &t[row][j];
                t[i][j] -= sub;
            }
        }
    }
    if !obj[col].is_zero() {
        let f = obj[col].clone();
        for j in 0..width {
            let sub = &f * &t[row][j];
            obj[j] -= sub;
        }
    }
}
