#[path = "support/oracles.rs"]
mod oracles;

use conifold::zlinalg::{
    determinant, hermite_normal_form, in_row_span, kernel_basis, nullspace, rank_exact,
    row_echelon_with_transform, smith_normal_form, IntegerMatrix,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix_strategy(max: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r)
    })
}

/// Rank-deficient matrices come up rarely from uniform entries, so build
/// some as products of thin factors.
fn low_rank_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=7usize, 1..=7usize, 1..=3usize).prop_flat_map(|(r, c, k)| {
        (
            prop::collection::vec(prop::collection::vec(-3i64..=3, k), r),
            prop::collection::vec(prop::collection::vec(-3i64..=3, c), k),
        )
            .prop_map(move |(a, b)| {
                (0..r)
                    .map(|i| {
                        (0..c)
                            .map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum())
                            .collect()
                    })
                    .collect()
            })
    })
}

fn m(rows: &[Vec<i64>]) -> IntegerMatrix {
    IntegerMatrix::from_i64_rows(rows).unwrap()
}

fn is_unimodular(u: &IntegerMatrix) -> bool {
    determinant(u).map(|d| d.abs().is_one()).unwrap_or(false)
}

proptest! {
    #[test]
    fn rank_matches_rational_oracle(rows in prop_oneof![matrix_strategy(8, 5), low_rank_strategy()]) {
        let cols = rows[0].len();
        prop_assert_eq!(rank_exact(&m(&rows)), oracles::rank(&oracles::big(&rows), cols));
    }

    #[test]
    fn kernel_basis_is_saturated_left_kernel(rows in prop_oneof![matrix_strategy(6, 4), low_rank_strategy()]) {
        let a = m(&rows);
        let cols = rows[0].len();
        let basis = kernel_basis(&a);
        let r = oracles::rank(&oracles::big(&rows), cols);
        prop_assert_eq!(basis.len(), rows.len() - r);
        for v in &basis {
            prop_assert!(a.left_apply(v).unwrap().iter().all(Zero::is_zero));
        }
        if !basis.is_empty() {
            prop_assert!(oracles::maximal_minor_gcd(&basis, rows.len()).is_one());
        }
    }

    #[test]
    fn nullspace_is_right_kernel(rows in prop_oneof![matrix_strategy(6, 4), low_rank_strategy()]) {
        let a = m(&rows);
        let cols = rows[0].len();
        let ns = nullspace(&a);
        prop_assert_eq!(ns.len(), cols - oracles::rank(&oracles::big(&rows), cols));
        let at = a.transpose();
        for v in &ns {
            prop_assert!(at.left_apply(v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn row_span_matches_oracle(rows in low_rank_strategy(), coeffs in prop::collection::vec(-2i64..=2, 7), noise in prop::collection::vec(-1i64..=1, 7)) {
        let cols = rows[0].len();
        let a = m(&rows);
        let mut v: Vec<BigInt> = vec![BigInt::zero(); cols];
        for (row, c) in rows.iter().zip(&coeffs) {
            for (x, y) in v.iter_mut().zip(row) {
                *x += BigInt::from(c * y);
            }
        }
        prop_assert!(in_row_span(&a, &v).unwrap());
        for (x, n) in v.iter_mut().zip(&noise) {
            *x += BigInt::from(*n);
        }
        prop_assert_eq!(in_row_span(&a, &v).unwrap(), oracles::in_span(&oracles::big(&rows), &v));
    }

    #[test]
    fn determinant_matches_oracle(n in 1usize..=6, seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let rows = oracles::random_rows(&mut rng, n, n, 5);
        prop_assert_eq!(determinant(&m(&rows)).unwrap(), oracles::det(&oracles::big(&rows)));
    }

    #[test]
    fn hermite_form_properties(rows in prop_oneof![matrix_strategy(6, 5), low_rank_strategy()]) {
        let a = m(&rows);
        let e = row_echelon_with_transform(&a);
        prop_assert!(is_unimodular(&e.transform));
        prop_assert_eq!(e.transform.mul(&a).unwrap(), e.echelon.clone());
        let h = hermite_normal_form(&a);
        prop_assert_eq!(h.rows(), rank_exact(&a));
        // Pivots strictly move right, are positive, and dominate the entries above.
        let mut last = None;
        for i in 0..h.rows() {
            let p = (0..h.cols()).find(|&j| !h[(i, j)].is_zero()).unwrap();
            prop_assert!(last.is_none_or(|l| p > l));
            prop_assert!(h[(i, p)].is_positive());
            for r in 0..i {
                prop_assert!(!h[(r, p)].is_negative() && h[(r, p)] < h[(i, p)]);
            }
            last = Some(p);
        }
    }

    #[test]
    fn smith_form_properties(rows in prop_oneof![matrix_strategy(5, 5), low_rank_strategy()]) {
        let a = m(&rows);
        let s = smith_normal_form(&a);
        prop_assert!(is_unimodular(&s.u) && is_unimodular(&s.v));
        prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d.clone());
        let diag = s.diagonal();
        let r = s.rank();
        prop_assert_eq!(r, rank_exact(&a));
        for w in diag[..r].windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert!(diag[..r].iter().all(|d| d.is_positive()));
        prop_assert!(diag[r..].iter().all(Zero::is_zero));
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                prop_assert!(i == j || s.d[(i, j)].is_zero());
            }
        }
    }
}

#[test]
fn smith_example_against_minors() {
    // d1 = gcd of entries, d1·d2 = gcd of 2x2 minors.
    let a = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let s = smith_normal_form(&a);
    assert_eq!(
        s.diagonal(),
        vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
    );
    assert_eq!(
        s.torsion(),
        vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
    );
}

#[test]
fn shape_errors() {
    assert!(IntegerMatrix::from_i64_rows(&[vec![1, 2], vec![3]]).is_err());
    assert!(determinant(&m(&[vec![1, 2]])).is_err());
    assert!(in_row_span(&m(&[vec![1, 2]]), &[BigInt::one()]).is_err());
}

#[test]
fn wide_and_tall_agree() {
    let rows = vec![
        vec![1, 2, 3, 4, 5, 6, 7],
        vec![2, 4, 6, 8, 10, 12, 14],
        vec![0, 1, 0, 1, 0, 1, 0],
    ];
    let a = m(&rows);
    assert_eq!(rank_exact(&a), 2);
    assert_eq!(rank_exact(&a.transpose()), 2);
}

#[test]
fn big_entries_stay_exact() {
    let x: BigInt = "98765432109876543210987654321".parse().unwrap();
    let a = IntegerMatrix::new(
        2,
        2,
        vec![x.clone(), x.clone() + 1, x.clone() * 2, x.clone() * 2 + 2],
    )
    .unwrap();
    assert_eq!(rank_exact(&a), 1);
    let k = kernel_basis(&a);
    assert_eq!(k.len(), 1);
    let v = if k[0][1].is_negative() {
        k[0].iter().map(|x| -x).collect()
    } else {
        k[0].clone()
    };
    assert_eq!(v, vec![BigInt::from(-2), BigInt::one()]);
}
