//! Good homology relations among configurations of 3-cycles.

mod search;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::zlinalg::{self, normalize_primitive, IntegerMatrix, LinalgError};

pub use search::{search_good_subsets, SearchOptions, SearchReport, SizeResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationsError {
    #[error("subset must be nonempty")]
    EmptySubset,
    #[error("cycle index {index} out of range for {count} cycles")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("duplicate cycle index {0} in subset")]
    DuplicateIndex(usize),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("size range {lo}..={hi} is invalid for {count} cycles")]
    SizeRange { lo: usize, hi: usize, count: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Labeled 3-cycles: one class row per cycle, optional pairing matrix and a
/// symmetric irreflexive disjointness relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleConfiguration {
    labels: Vec<String>,
    classes: IntegerMatrix,
    pairing: Option<IntegerMatrix>,
    adjacency: Vec<Vec<usize>>,
    dense: Vec<bool>,
}

impl CycleConfiguration {
    /// `disjoint` is an adjacency list; each unordered pair may be listed on
    /// either or both sides.
    pub fn new(
        labels: Vec<String>,
        classes: IntegerMatrix,
        pairing: Option<IntegerMatrix>,
        disjoint: Vec<Vec<usize>>,
    ) -> Result<Self, RelationsError> {
        let n = labels.len();
        if classes.rows() != n {
            return Err(RelationsError::Invalid(format!(
                "{} labels but {} class rows",
                n,
                classes.rows()
            )));
        }
        if disjoint.len() != n && !(disjoint.is_empty()) {
            return Err(RelationsError::Invalid(format!(
                "disjointness list has {} entries for {} cycles",
                disjoint.len(),
                n
            )));
        }
        let mut dense = vec![false; n * n];
        for (i, nbrs) in disjoint.iter().enumerate() {
            for &j in nbrs {
                if j >= n {
                    return Err(RelationsError::IndexOutOfRange { index: j, count: n });
                }
                if i == j {
                    return Err(RelationsError::Invalid(format!(
                        "cycle {i} declared disjoint from itself"
                    )));
                }
                dense[i * n + j] = true;
                dense[j * n + i] = true;
            }
        }
        if let Some(p) = &pairing {
            if p.rows() != n || p.cols() != n {
                return Err(RelationsError::Invalid(format!(
                    "pairing is {}x{}, expected {n}x{n}",
                    p.rows(),
                    p.cols()
                )));
            }
            if !p.is_antisymmetric() {
                return Err(RelationsError::Invalid(
                    "pairing is not antisymmetric".into(),
                ));
            }
            for i in 0..n {
                for j in i + 1..n {
                    if dense[i * n + j] && !p[(i, j)].is_zero() {
                        return Err(RelationsError::Invalid(format!(
                            "cycles {i} and {j} are disjoint but pair to {}",
                            p[(i, j)]
                        )));
                    }
                }
            }
        }
        let adjacency = (0..n)
            .map(|i| (0..n).filter(|&j| dense[i * n + j]).collect())
            .collect();
        Ok(Self {
            labels,
            classes,
            pairing,
            adjacency,
            dense,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn classes(&self) -> &IntegerMatrix {
        &self.classes
    }

    pub fn pairing(&self) -> Option<&IntegerMatrix> {
        self.pairing.as_ref()
    }

    /// Sorted adjacency list of the disjointness relation.
    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn disjoint(&self, i: usize, j: usize) -> bool {
        self.dense[i * self.len() + j]
    }

    pub fn pairwise_disjoint(&self, s: &[usize]) -> bool {
        s.iter()
            .enumerate()
            .all(|(a, &i)| s[a + 1..].iter().all(|&j| self.disjoint(i, j)))
    }

    fn check_indices(&self, s: &[usize]) -> Result<(), RelationsError> {
        let mut seen = BTreeSet::new();
        for &i in s {
            if i >= self.len() {
                return Err(RelationsError::IndexOutOfRange {
                    index: i,
                    count: self.len(),
                });
            }
            if !seen.insert(i) {
                return Err(RelationsError::DuplicateIndex(i));
            }
        }
        Ok(())
    }
}

/// Integer relation Σ λᵢ·classes[subset[i]] = 0 with every λᵢ nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodRelation {
    pub subset: Vec<usize>,
    #[serde(with = "crate::format::bigint_vec")]
    pub coefficients: Vec<BigInt>,
}

impl GoodRelation {
    /// Independent re-check by direct summation.
    pub fn verify(&self, config: &CycleConfiguration) -> bool {
        if self.subset.len() != self.coefficients.len()
            || self.subset.is_empty()
            || config.check_indices(&self.subset).is_err()
            || self.coefficients.iter().any(Zero::is_zero)
        {
            return false;
        }
        let sub = config.classes.select_rows(&self.subset);
        sub.left_apply(&self.coefficients)
            .map(|v| v.iter().all(Zero::is_zero))
            .unwrap_or(false)
    }
}

pub fn span_dim(config: &CycleConfiguration, s: &[usize]) -> Result<usize, RelationsError> {
    config.check_indices(s)?;
    Ok(zlinalg::rank_exact(&config.classes.select_rows(s)))
}

/// Literal form of the criterion: each class lies in the rational span of
/// the others in `s`.
pub fn is_good_subset_by_span(
    config: &CycleConfiguration,
    s: &[usize],
) -> Result<bool, RelationsError> {
    if s.is_empty() {
        return Err(RelationsError::EmptySubset);
    }
    config.check_indices(s)?;
    for (a, &i) in s.iter().enumerate() {
        let others: Vec<usize> = s
            .iter()
            .enumerate()
            .filter(|(b, _)| *b != a)
            .map(|(_, &j)| j)
            .collect();
        let v = config.classes.row(i);
        let sub = config.classes.select_rows(&others);
        if others.is_empty() {
            if v.iter().any(|x| !x.is_zero()) {
                return Ok(false);
            }
        } else if !zlinalg::in_row_span(&sub, v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Same answer as [`is_good_subset_by_span`], computed from the supports of a
/// rational basis of relations on `s` in one elimination.
pub fn is_good_subset(config: &CycleConfiguration, s: &[usize]) -> Result<bool, RelationsError> {
    if s.is_empty() {
        return Err(RelationsError::EmptySubset);
    }
    config.check_indices(s)?;
    let sub = config.classes.select_rows(s);
    let basis = zlinalg::nullspace(&sub.transpose());
    Ok(full_support_union(&basis, s.len()))
}

fn full_support_union(basis: &[Vec<BigInt>], len: usize) -> bool {
    (0..len).all(|i| basis.iter().any(|v| !v[i].is_zero()))
}

// Lexicographic multiplier enumeration stops after this many candidates.
const MULTIPLIER_BUDGET: usize = 20_000;

/// Deterministic full-support relation on `s`, or `None` when `s` is not good.
pub fn good_relation(
    config: &CycleConfiguration,
    s: &[usize],
) -> Result<Option<GoodRelation>, RelationsError> {
    if s.is_empty() {
        return Err(RelationsError::EmptySubset);
    }
    config.check_indices(s)?;
    let sub = config.classes.select_rows(s);
    let basis = zlinalg::kernel_basis(&sub);
    if basis.is_empty() || !full_support_union(&basis, s.len()) {
        return Ok(None);
    }
    let coefficients = full_support_combination(&basis);
    Ok(Some(GoodRelation {
        subset: s.to_vec(),
        coefficients,
    }))
}

/// Smallest multiplier vector in {1,2,..}^t (shortlex over the maximum
/// multiplier, then lexicographic) whose combination of `basis` has no zero
/// entry. Falls back to powers of a base exceeding twice the largest entry,
/// which cannot cancel.
pub(crate) fn full_support_combination(basis: &[Vec<BigInt>]) -> Vec<BigInt> {
    let t = basis.len();
    let len = basis[0].len();
    let combine = |mult: &[u64]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); len];
        for (b, &m) in basis.iter().zip(mult) {
            let m = BigInt::from(m);
            for (o, x) in out.iter_mut().zip(b) {
                if !x.is_zero() {
                    *o += &m * x;
                }
            }
        }
        out
    };
    let mut tried = 0usize;
    let mut max_mult = 1u64;
    'outer: while tried < MULTIPLIER_BUDGET {
        // All vectors in {1..max_mult}^t that use max_mult at least once.
        let mut mult = vec![1u64; t];
        loop {
            if mult.contains(&max_mult) {
                let v = combine(&mult);
                if v.iter().all(|x| !x.is_zero()) {
                    return normalize_primitive(v);
                }
                tried += 1;
                if tried >= MULTIPLIER_BUDGET {
                    break 'outer;
                }
            }
            if !next_lex(&mut mult, max_mult) {
                break;
            }
        }
        max_mult += 1;
    }
    let bound = basis
        .iter()
        .flatten()
        .map(Signed::abs)
        .max()
        .unwrap_or_else(BigInt::one);
    let base = bound * 2 + 1;
    let mut out = vec![BigInt::zero(); len];
    let mut power = BigInt::one();
    for b in basis {
        for (o, x) in out.iter_mut().zip(b) {
            *o += &power * x;
        }
        power *= &base;
    }
    normalize_primitive(out)
}

fn next_lex(mult: &mut [u64], max: u64) -> bool {
    for pos in (0..mult.len()).rev() {
        if mult[pos] < max {
            mult[pos] += 1;
            mult[pos + 1..].iter_mut().for_each(|m| *m = 1);
            return true;
        }
    }
    false
}
