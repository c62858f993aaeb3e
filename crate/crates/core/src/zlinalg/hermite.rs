use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntegerMatrix;

/// Result of unimodular row reduction: `transform · input = echelon`.
#[derive(Debug, Clone)]
pub struct EchelonForm {
    pub echelon: IntegerMatrix,
    pub transform: IntegerMatrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

fn axpy_rows(rows: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    let (t, s) = if target < source {
        let (lo, hi) = rows.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(target);
        (&mut hi[0], &lo[source])
    };
    for (x, y) in t.iter_mut().zip(s) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

fn negate_row(row: &mut [BigInt]) {
    row.iter_mut().for_each(|x| *x = -&*x);
}

/// Unimodular row echelon form over Z, pivoting on the smallest entry of each
/// column. Pivots are positive and entries above each pivot lie in `[0, pivot)`,
/// so the echelon part is the row Hermite normal form.
pub fn row_echelon_with_transform(a: &IntegerMatrix) -> EchelonForm {
    let (n, cols) = (a.rows(), a.cols());
    let mut h = a.clone().into_rows();
    let mut u = IntegerMatrix::identity(n).into_rows();
    let mut r = 0;
    let mut pivot_cols = Vec::new();
    for c in 0..cols {
        if r == n {
            break;
        }
        loop {
            let Some(p) = (r..n)
                .filter(|&i| !h[i][c].is_zero())
                .min_by(|&i, &j| h[i][c].magnitude().cmp(h[j][c].magnitude()))
            else {
                break;
            };
            h.swap(p, r);
            u.swap(p, r);
            let mut done = true;
            for i in r + 1..n {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                axpy_rows(&mut h, i, r, &q);
                axpy_rows(&mut u, i, r, &q);
                if !h[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(r).is_some_and(|row| !row[c].is_zero()) {
            if h[r][c].is_negative() {
                negate_row(&mut h[r]);
                negate_row(&mut u[r]);
            }
            for i in 0..r {
                let q = h[i][c].div_floor(&h[r][c]);
                if !q.is_zero() {
                    axpy_rows(&mut h, i, r, &q);
                    axpy_rows(&mut u, i, r, &q);
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
    }
    EchelonForm {
        echelon: IntegerMatrix::from_rows(h).expect("rectangular"),
        transform: IntegerMatrix::from_rows(u).expect("rectangular"),
        rank: r,
        pivot_cols,
    }
    .fix_empty(cols, n)
}

impl EchelonForm {
    // `from_rows` cannot recover the column count of a matrix with no rows.
    fn fix_empty(mut self, cols: usize, n: usize) -> Self {
        if n == 0 {
            self.echelon = IntegerMatrix::empty(cols);
            self.transform = IntegerMatrix::zeros(0, 0);
        }
        self
    }
}

/// Row Hermite normal form with the zero rows dropped.
pub fn hermite_normal_form(a: &IntegerMatrix) -> IntegerMatrix {
    let e = row_echelon_with_transform(a);
    let keep: Vec<usize> = (0..e.rank).collect();
    e.echelon.select_rows(&keep)
}

/// Basis of the lattice {λ : λᵀA = 0}, canonicalised to Hermite normal form
/// so the output depends only on the lattice. Each basis vector is primitive
/// with positive leading entry.
pub fn kernel_basis(a: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    let e = row_echelon_with_transform(a);
    let n = a.rows();
    if e.rank == n {
        return Vec::new();
    }
    let idx: Vec<usize> = (e.rank..n).collect();
    let raw = e.transform.select_rows(&idx);
    hermite_normal_form(&raw).into_rows()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zlinalg::to_bigints;

    fn m(rows: &[Vec<i64>]) -> IntegerMatrix {
        IntegerMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&m(&[vec![1, 0], vec![0, 1]])).is_empty());
        assert_eq!(
            kernel_basis(&m(&[vec![1, 0], vec![2, 0]])),
            vec![to_bigints(&[2, -1])]
        );
        assert_eq!(
            kernel_basis(&m(&[vec![1, 0], vec![0, 1], vec![1, 1]])),
            vec![to_bigints(&[1, 1, -1])]
        );
    }

    #[test]
    fn kernel_is_saturated() {
        // Rational kernel is spanned by (1,1,-1); a non-saturated method would
        // be allowed to return a multiple.
        let a = m(&[vec![2, 4], vec![4, 2], vec![6, 6]]);
        assert_eq!(kernel_basis(&a), vec![to_bigints(&[1, 1, -1])]);
    }

    #[test]
    fn echelon_transform_identity() {
        let a = m(&[vec![4, 6, 2], vec![6, 9, 3], vec![2, 1, 0]]);
        let e = row_echelon_with_transform(&a);
        assert_eq!(e.transform.mul(&a).unwrap(), e.echelon);
        assert_eq!(e.rank, 2);
        let det = crate::zlinalg::determinant(&e.transform).unwrap();
        assert_eq!(det.abs(), BigInt::from(1));
    }

    #[test]
    fn hnf_is_reduced() {
        let h = hermite_normal_form(&m(&[vec![3, 1], vec![1, 0]]));
        assert_eq!(h, m(&[vec![1, 0], vec![0, 1]]));
        let h = hermite_normal_form(&m(&[vec![2, 3], vec![0, 5]]));
        assert_eq!(h, m(&[vec![2, 3], vec![0, 5]]));
    }
}
