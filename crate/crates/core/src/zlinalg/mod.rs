//! Exact integer linear algebra over `BigInt`.

mod elimination;
mod hermite;
mod matrix;
mod smith;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub use elimination::{determinant, in_row_span, nullspace, rank_exact, row_rank_profile};
pub use hermite::{hermite_normal_form, kernel_basis, row_echelon_with_transform, EchelonForm};
pub use matrix::IntegerMatrix;
pub use smith::{smith_normal_form, InvariantFactors, SmithDecomposition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{rows}x{cols} matrix needs {} entries, got {len}", rows * cols)]
    Shape {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("cannot {op} {}x{} by {}x{}", left.0, left.1, right.0, right.1)]
    Mismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("vector has length {found}, expected {expected}")]
    VectorLength { expected: usize, found: usize },
    #[error("determinant needs a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
}

/// Divides out the content of `v` and makes the first nonzero entry positive.
/// The zero vector is returned unchanged.
pub fn normalize_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = content(&v);
    if g.is_zero() {
        return v;
    }
    let negate = v
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(Signed::is_negative);
    for x in &mut v {
        *x = &*x / &g;
        if negate {
            *x = -&*x;
        }
    }
    v
}

/// Nonnegative gcd of all entries; zero for the zero vector.
pub fn content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for x in v {
        if !x.is_zero() {
            g = g.gcd(x);
            if g == BigInt::from(1) {
                break;
            }
        }
    }
    g
}

pub fn to_bigints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
