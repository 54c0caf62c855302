//! Exact Gaussian elimination over `ℚ(ω)`. The pivot is always the first
//! nonzero entry in column order; no numerical pivoting is needed.

use crate::error::{invalid, Result};
use crate::exactnum::Cyclo;

/// Reduces `m` to row echelon form in place and returns the pivot values
/// together with the number of row swaps performed.
fn echelon(m: &mut [Vec<Cyclo>]) -> (Vec<Cyclo>, usize) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            swaps += 1;
        }
        let inv = m[r][c].inv().expect("pivot is nonzero");
        let (top, bottom) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let factor = &row[c] * &inv;
            for k in c..cols {
                if !pivot_row[k].is_zero() {
                    row[k] -= &(&factor * &pivot_row[k]);
                }
            }
        }
        pivots.push(m[r][c].clone());
        r += 1;
    }
    (pivots, swaps)
}

/// Rank of a matrix given as rows.
pub fn rank(mut m: Vec<Vec<Cyclo>>) -> usize {
    echelon(&mut m).0.len()
}

/// Determinant of a square matrix; `order` is used for the empty matrix.
pub fn determinant(mut m: Vec<Vec<Cyclo>>, order: u32) -> Result<Cyclo> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return invalid("determinant of a non-square matrix");
    }
    if n == 0 {
        return Ok(Cyclo::one(order));
    }
    let (pivots, swaps) = echelon(&mut m);
    if pivots.len() < n {
        return Ok(Cyclo::zero(m[0][0].order()));
    }
    let mut det = pivots
        .iter()
        .skip(1)
        .fold(pivots[0].clone(), |acc, p| &acc * p);
    if swaps % 2 == 1 {
        det = -det;
    }
    Ok(det)
}
