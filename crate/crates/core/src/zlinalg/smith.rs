use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::IntegerMatrix;

/// `u · a · v = d` with `u`, `v` unimodular and `d` diagonal in Smith form.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries of `d`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Nonzero invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .filter(|x| !x.is_zero() && *x != BigInt::from(1))
            .collect()
    }
}

/// Summary that survives serialisation without the transforms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantFactors {
    pub rank: usize,
    pub factors: Vec<String>,
}

impl From<&SmithDecomposition> for InvariantFactors {
    fn from(s: &SmithDecomposition) -> Self {
        Self {
            rank: s.rank(),
            factors: s.diagonal().iter().map(ToString::to_string).collect(),
        }
    }
}

fn row_sub(rows: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src = rows[source].clone();
    for (x, y) in rows[target].iter_mut().zip(&src) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

fn col_sub(rows: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in rows.iter_mut() {
        if !row[source].is_zero() {
            let delta = q * &row[source];
            row[target] -= delta;
        }
    }
}

fn col_swap(rows: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a != b {
        rows.iter_mut().for_each(|r| r.swap(a, b));
    }
}

pub fn smith_normal_form(a: &IntegerMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone().into_rows();
    let mut u = IntegerMatrix::identity(m).into_rows();
    let mut v = IntegerMatrix::identity(n).into_rows();
    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if d[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[i][j].magnitude() < d[bi][bj].magnitude()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, d, v, m, n);
            };
            d.swap(t, pi);
            u.swap(t, pi);
            col_swap(&mut d, t, pj);
            col_swap(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if !d[i][t].is_zero() {
                    let q = d[i][t].div_floor(&d[t][t]);
                    row_sub(&mut d, i, t, &q);
                    row_sub(&mut u, i, t, &q);
                    clean &= d[i][t].is_zero();
                }
            }
            for j in t + 1..n {
                if !d[t][j].is_zero() {
                    let q = d[t][j].div_floor(&d[t][t]);
                    col_sub(&mut d, j, t, &q);
                    col_sub(&mut v, j, t, &q);
                    clean &= d[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[i][j].is_multiple_of(&d[t][t])));
            match bad {
                Some(i) => {
                    // Pull the offending row into the pivot row and reduce again.
                    row_sub(&mut d, t, i, &BigInt::from(-1));
                    row_sub(&mut u, t, i, &BigInt::from(-1));
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            d[t].iter_mut().for_each(|x| *x = -&*x);
            u[t].iter_mut().for_each(|x| *x = -&*x);
        }
    }
    finish(u, d, v, m, n)
}

fn finish(
    u: Vec<Vec<BigInt>>,
    d: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    m: usize,
    n: usize,
) -> SmithDecomposition {
    let build = |rows: Vec<Vec<BigInt>>, r: usize, c: usize| {
        let flat: Vec<BigInt> = rows.into_iter().flatten().collect();
        IntegerMatrix::new(r, c, flat).expect("consistent shape")
    };
    SmithDecomposition {
        u: build(u, m, m),
        d: build(d, m, n),
        v: build(v, n, n),
    }
}
