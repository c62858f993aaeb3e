// Brute-force references, written without the library's elimination code.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn random_rows<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| rng.random_range(-bound..=bound))
                .collect()
        })
        .collect()
}

/// Reduced row echelon form over Q by textbook Gauss-Jordan.
pub fn rref(rows: &[Vec<BigInt>], cols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] = &m[i][j] - t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(rows: &[Vec<BigInt>], cols: usize) -> usize {
    rref(rows, cols).1.len()
}

pub fn in_span(rows: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let cols = v.len();
    let mut ext = rows.to_vec();
    ext.push(v.to_vec());
    rank(&ext, cols) == rank(rows, cols)
}

/// Rational basis of {λ : Σ λᵢ rowᵢ = 0}, from the RREF of the transpose.
pub fn left_kernel(rows: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigRational>> {
    let n = rows.len();
    let t: Vec<Vec<BigInt>> = (0..cols)
        .map(|j| (0..n).map(|i| rows[i][j].clone()).collect())
        .collect();
    let (m, pivots) = rref(&t, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigInt::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d = &d * &a[c][c];
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] = &a[i][j] - t;
            }
        }
    }
    d.to_integer()
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// gcd of all k×k minors of a k×n matrix; 1 iff the rows are a basis of a
/// saturated sublattice.
pub fn maximal_minor_gcd(rows: &[Vec<BigInt>], cols: usize) -> BigInt {
    let k = rows.len();
    let mut g = BigInt::zero();
    for s in subsets(cols, k) {
        let minor: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| s.iter().map(|&j| r[j].clone()).collect())
            .collect();
        g = num_integer::Integer::gcd(&g, &det(&minor));
    }
    g.abs()
}

/// Exhaustive search for a full-support relation on the rows: combinations
/// of a rational kernel basis with coefficients in {0..=n}^d. Each
/// coordinate that is not identically zero on the kernel vanishes on a
/// hyperplane, and n hyperplanes cannot cover that grid, so the search is
/// complete.
pub fn has_full_support_relation(rows: &[Vec<BigInt>], cols: usize) -> bool {
    let n = rows.len();
    let basis = left_kernel(rows, cols);
    let d = basis.len();
    if d == 0 {
        return false;
    }
    let mut coeff = vec![0usize; d];
    loop {
        let full = (0..n).all(|i| {
            let mut s = BigRational::zero();
            for (b, &c) in basis.iter().zip(&coeff) {
                s += &b[i] * BigRational::from_integer(BigInt::from(c));
            }
            !s.is_zero()
        });
        if full {
            return true;
        }
        let mut pos = 0;
        loop {
            if pos == d {
                return false;
            }
            coeff[pos] += 1;
            if coeff[pos] <= n {
                break;
            }
            coeff[pos] = 0;
            pos += 1;
        }
    }
}
