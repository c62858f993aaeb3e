use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{good_relation, CycleConfiguration, GoodRelation, RelationsError};
use crate::zlinalg::{self, content, IntegerMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub min_size: usize,
    pub max_size: usize,
    pub seed: u64,
    /// Local-search move budget per size.
    pub max_moves: usize,
    /// Configurations with at most this many cycles are searched exhaustively.
    pub exhaustive_limit: usize,
}

impl SearchOptions {
    pub fn new(min_size: usize, max_size: usize, seed: u64) -> Self {
        Self {
            min_size,
            max_size,
            seed,
            max_moves: 100_000,
            exhaustive_limit: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeResult {
    pub size: usize,
    pub found: bool,
    pub subset: Vec<usize>,
    pub labels: Vec<String>,
    pub span: Option<usize>,
    pub relation: Option<GoodRelation>,
    /// Local-search moves spent; zero for exhaustive search or direct extension.
    pub moves: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub method: String,
    pub seed: u64,
    pub cycle_count: usize,
    pub total_rank: usize,
    pub results: Vec<SizeResult>,
}

/// Relation lattice of the whole configuration, one column per basis relation.
/// The relations supported on S are the combinations vanishing off S, which
/// gives span and coloops of S from a small elimination.
struct RelationSpace {
    n: usize,
    basis: IntegerMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Score {
    span: usize,
    neg_coloops: isize,
}

impl RelationSpace {
    fn new(config: &CycleConfiguration) -> Self {
        let rel = zlinalg::nullspace(&config.classes().transpose());
        let n = config.len();
        let m = rel.len();
        let mut entries = Vec::with_capacity(n * m);
        for i in 0..n {
            for r in &rel {
                entries.push(r[i].clone());
            }
        }
        Self {
            n,
            basis: IntegerMatrix::new(n, m, entries).expect("shape"),
        }
    }

    fn rank(&self) -> usize {
        self.n - self.basis.cols()
    }

    fn score(&self, members: &[bool]) -> Score {
        let k = members.iter().filter(|&&b| b).count();
        let outside: Vec<usize> = (0..self.n).filter(|&i| !members[i]).collect();
        let combos = zlinalg::nullspace(&self.basis.select_rows(&outside));
        let mut coloops = 0isize;
        for i in (0..self.n).filter(|&i| members[i]) {
            let row = self.basis.row(i);
            let involved = combos.iter().any(|c| {
                let dot: BigInt = row.iter().zip(c).map(|(a, b)| a * b).sum();
                !dot.is_zero()
            });
            if !involved {
                coloops += 1;
            }
        }
        Score {
            span: k - combos.len(),
            neg_coloops: -coloops,
        }
    }
}

/// Incremental independence test on class rows by fraction-free reduction.
struct IncrementalSpan {
    pivots: Vec<(usize, Vec<BigInt>)>,
}

impl IncrementalSpan {
    fn new() -> Self {
        Self { pivots: Vec::new() }
    }

    fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for (c, row) in &self.pivots {
            if v[*c].is_zero() {
                continue;
            }
            let a = row[*c].clone();
            let b = v[*c].clone();
            for (x, y) in v.iter_mut().zip(row) {
                *x = &a * &*x - &b * y;
            }
            let g = content(&v);
            if !g.is_zero() {
                v.iter_mut().for_each(|x| *x = &*x / &g);
            }
        }
        v
    }

    /// Adds `v` if independent; returns whether it was.
    fn insert(&mut self, v: &[BigInt]) -> bool {
        let r = self.reduce(v);
        match r.iter().position(|x| !x.is_zero()) {
            Some(c) => {
                self.pivots.push((c, r));
                true
            }
            None => false,
        }
    }

    fn independent(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().any(|x| !x.is_zero())
    }
}

pub fn search_good_subsets(
    config: &CycleConfiguration,
    options: &SearchOptions,
) -> Result<SearchReport, RelationsError> {
    let n = config.len();
    if options.min_size == 0 || options.min_size > options.max_size || options.max_size > n {
        return Err(RelationsError::SizeRange {
            lo: options.min_size,
            hi: options.max_size,
            count: n,
        });
    }
    let space = RelationSpace::new(config);
    let exhaustive = n <= options.exhaustive_limit;
    let mut results = Vec::new();
    let mut previous: Option<Vec<usize>> = None;
    for k in options.min_size..=options.max_size {
        let (best, moves) = if exhaustive {
            (exhaustive_best(config, &space, k), 0)
        } else {
            heuristic_best(config, &space, k, options, previous.as_deref())
        };
        results.push(finish(config, k, best.clone(), moves)?);
        previous = best.map(|(s, _)| s);
    }
    Ok(SearchReport {
        method: if exhaustive {
            "exhaustive"
        } else {
            "heuristic"
        }
        .to_string(),
        seed: options.seed,
        cycle_count: n,
        total_rank: space.rank(),
        results,
    })
}

fn finish(
    config: &CycleConfiguration,
    k: usize,
    best: Option<(Vec<usize>, usize)>,
    moves: usize,
) -> Result<SizeResult, RelationsError> {
    let Some((subset, span)) = best else {
        return Ok(SizeResult {
            size: k,
            found: false,
            subset: Vec::new(),
            labels: Vec::new(),
            span: None,
            relation: None,
            moves,
        });
    };
    let relation = good_relation(config, &subset)?;
    let ok =
        relation.as_ref().is_some_and(|r| r.verify(config)) && config.pairwise_disjoint(&subset);
    if !ok {
        return Err(RelationsError::Invalid(format!(
            "search produced a subset of size {k} that fails re-verification"
        )));
    }
    Ok(SizeResult {
        size: k,
        found: true,
        labels: subset.iter().map(|&i| config.labels()[i].clone()).collect(),
        subset,
        span: Some(span),
        relation,
        moves,
    })
}

fn members_of(n: usize, s: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    s.iter().for_each(|&i| m[i] = true);
    m
}

fn is_good(score: Score) -> bool {
    score.neg_coloops == 0
}

/// Lexicographically first subset of maximal span among the pairwise disjoint
/// good k-subsets.
fn exhaustive_best(
    config: &CycleConfiguration,
    space: &RelationSpace,
    k: usize,
) -> Option<(Vec<usize>, usize)> {
    fn rec(
        config: &CycleConfiguration,
        space: &RelationSpace,
        k: usize,
        start: usize,
        cur: &mut Vec<usize>,
        best: &mut Option<(Vec<usize>, usize)>,
    ) {
        if cur.len() == k {
            let score = space.score(&members_of(config.len(), cur));
            if is_good(score) && best.as_ref().is_none_or(|(_, s)| score.span > *s) {
                *best = Some((cur.clone(), score.span));
            }
            return;
        }
        for i in start..config.len() {
            if config.len() - i < k - cur.len() {
                break;
            }
            if cur.iter().all(|&j| config.disjoint(i, j)) {
                cur.push(i);
                rec(config, space, k, i + 1, cur, best);
                cur.pop();
            }
        }
    }
    let mut best = None;
    rec(config, space, k, 0, &mut Vec::new(), &mut best);
    best
}

fn span_bound(space: &RelationSpace, k: usize) -> usize {
    space.rank().min(k - 1)
}

/// Matroid greedy in label order: independent disjoint cycles first, then
/// dependent ones, until k are chosen.
fn greedy_seed(config: &CycleConfiguration, k: usize) -> Option<Vec<usize>> {
    let n = config.len();
    let mut span = IncrementalSpan::new();
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..n {
        if chosen.len() == k {
            break;
        }
        if chosen.iter().all(|&j| config.disjoint(i, j))
            && span.independent(config.classes().row(i))
        {
            span.insert(config.classes().row(i));
            chosen.push(i);
        }
    }
    for i in 0..n {
        if chosen.len() == k {
            break;
        }
        if !chosen.contains(&i) && chosen.iter().all(|&j| config.disjoint(i, j)) {
            chosen.push(i);
        }
    }
    (chosen.len() == k).then(|| {
        chosen.sort_unstable();
        chosen
    })
}

fn heuristic_best(
    config: &CycleConfiguration,
    space: &RelationSpace,
    k: usize,
    options: &SearchOptions,
    previous: Option<&[usize]>,
) -> (Option<(Vec<usize>, usize)>, usize) {
    let n = config.len();
    let target = span_bound(space, k);

    // A good set stays good when an element of its span is added, so the
    // previous size's answer usually extends directly.
    if let Some(prev) = previous {
        let mut best_ext: Option<(Vec<usize>, usize)> = None;
        for e in 0..n {
            if prev.contains(&e) || !prev.iter().all(|&j| config.disjoint(e, j)) {
                continue;
            }
            let mut s = prev.to_vec();
            s.push(e);
            s.sort_unstable();
            let score = space.score(&members_of(n, &s));
            if is_good(score) && best_ext.as_ref().is_none_or(|(_, sp)| score.span > *sp) {
                best_ext = Some((s, score.span));
                if score.span == target {
                    break;
                }
            }
        }
        if let Some((s, span)) = &best_ext {
            if *span == target {
                return (Some((s.clone(), *span)), 0);
            }
        }
    }

    let Some(seed_set) = greedy_seed(config, k) else {
        return (None, 0);
    };
    let mut rng =
        ChaCha8Rng::seed_from_u64(options.seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut members = members_of(n, &seed_set);
    let mut current: Vec<usize> = seed_set;
    let mut score = space.score(&members);
    let mut best: Option<(Vec<usize>, usize)> =
        is_good(score).then(|| (current.clone(), score.span));
    let mut moves = 0;
    while moves < options.max_moves {
        if best.as_ref().is_some_and(|(_, s)| *s == target) {
            break;
        }
        moves += 1;
        let out_pos = rng.random_range(0..current.len());
        let out = current[out_pos];
        let candidates: Vec<usize> = (0..n)
            .filter(|&e| !members[e] && current.iter().all(|&j| j == out || config.disjoint(e, j)))
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let inn = candidates[rng.random_range(0..candidates.len())];
        members[out] = false;
        members[inn] = true;
        let new_score = space.score(&members);
        if new_score >= score || rng.random_bool(0.01) {
            current[out_pos] = inn;
            score = new_score;
            if is_good(score) && best.as_ref().is_none_or(|(_, s)| score.span > *s) {
                let mut s = current.clone();
                s.sort_unstable();
                best = Some((s, score.span));
            }
        } else {
            members[out] = true;
            members[inn] = false;
        }
    }
    (best, moves)
}
