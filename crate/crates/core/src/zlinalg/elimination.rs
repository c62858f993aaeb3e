use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{content, normalize_primitive, IntegerMatrix, LinalgError};

// Below this many entries the rayon fan-out costs more than it saves.
const PAR_THRESHOLD: usize = 4096;

struct Bareiss {
    rank: usize,
    pivot_cols: Vec<usize>,
    // Last pivot, which is the determinant up to sign for a full-rank square input.
    last_pivot: BigInt,
    swaps: usize,
}

/// Fraction-free elimination in place. Every intermediate entry is a minor of
/// the input, so the divisions by the previous pivot are exact even when
/// columns without a pivot are skipped.
fn bareiss(rows: &mut [Vec<BigInt>], cols: usize) -> Bareiss {
    let n = rows.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivot_cols = Vec::new();
    let mut swaps = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            rows.swap(p, r);
            swaps += 1;
        }
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let piv = &pivot_row[c];
        let update = |row: &mut Vec<BigInt>| {
            let f = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let mut x = piv * &row[j];
                if !f.is_zero() && !pivot_row[j].is_zero() {
                    x -= &f * &pivot_row[j];
                }
                row[j] = if prev.is_one() { x } else { x / &prev };
            }
        };
        if tail.len() * (cols - c) >= PAR_THRESHOLD {
            tail.par_iter_mut().for_each(update);
        } else {
            tail.iter_mut().for_each(update);
        }
        prev = rows[r][c].clone();
        pivot_cols.push(c);
        r += 1;
    }
    Bareiss {
        rank: r,
        pivot_cols,
        last_pivot: prev,
        swaps,
    }
}

pub fn rank_exact(a: &IntegerMatrix) -> usize {
    // Eliminate along the shorter side.
    let m = if a.rows() > a.cols() {
        a.transpose()
    } else {
        a.clone()
    };
    let cols = m.cols();
    let mut rows = m.into_rows();
    bareiss(&mut rows, cols).rank
}

/// Pivot columns of a row echelon form of `a`, in increasing order.
pub fn row_rank_profile(a: &IntegerMatrix) -> Vec<usize> {
    let cols = a.cols();
    let mut rows = a.clone().into_rows();
    bareiss(&mut rows, cols).pivot_cols
}

pub fn determinant(a: &IntegerMatrix) -> Result<BigInt, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut rows = a.clone().into_rows();
    let b = bareiss(&mut rows, n);
    if b.rank < n {
        return Ok(BigInt::zero());
    }
    Ok(if b.swaps % 2 == 1 {
        -b.last_pivot
    } else {
        b.last_pivot
    })
}

/// Basis of the rational right nullspace {x : A x = 0}, as primitive integer
/// vectors with first nonzero entry positive. One vector per free column, in
/// increasing column order.
pub fn nullspace(a: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    let cols = a.cols();
    let mut rows: Vec<Vec<BigInt>> = a.clone().into_rows();
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let n = rows.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n)
            .filter(|&i| !rows[i][c].is_zero())
            .min_by(|&i, &j| rows[i][c].magnitude().cmp(rows[j][c].magnitude()))
        else {
            continue;
        };
        rows.swap(p, r);
        let pivot_row = rows[r].clone();
        let piv = pivot_row[c].clone();
        let update = |(i, row): (usize, &mut Vec<BigInt>)| {
            if i == r || row[c].is_zero() {
                return;
            }
            let g = piv.gcd(&row[c]);
            let mul_self = &piv / &g;
            let mul_piv = &row[c] / &g;
            for j in 0..cols {
                let mut x = &mul_self * &row[j];
                if !pivot_row[j].is_zero() {
                    x -= &mul_piv * &pivot_row[j];
                }
                row[j] = x;
            }
            let g = content(row);
            if !g.is_zero() && !g.is_one() {
                row.iter_mut().for_each(|x| *x = &*x / &g);
            }
        };
        if n * cols >= PAR_THRESHOLD {
            rows.par_iter_mut().enumerate().for_each(update);
        } else {
            rows.iter_mut().enumerate().for_each(update);
        }
        pivots.push(c);
        r += 1;
    }
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; cols];
        pivots.iter().for_each(|&c| v[c] = true);
        v
    };
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let l = pivots
                .iter()
                .enumerate()
                .filter(|(i, _)| !rows[*i][f].is_zero())
                .fold(BigInt::one(), |acc, (i, &c)| acc.lcm(&rows[i][c]));
            let mut x = vec![BigInt::zero(); cols];
            x[f] = l.clone();
            for (i, &c) in pivots.iter().enumerate() {
                if !rows[i][f].is_zero() {
                    x[c] = -(&rows[i][f] * &l) / &rows[i][c];
                }
            }
            normalize_primitive(x)
        })
        .collect()
}

/// Whether `v` is a rational combination of the rows of `a`.
pub fn in_row_span(a: &IntegerMatrix, v: &[BigInt]) -> Result<bool, LinalgError> {
    let extended = a.with_row(v)?;
    Ok(rank_exact(&extended) == rank_exact(a))
}
