use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::cells::{cycles_disjoint, generate_cycles, QuinticCycle};
use super::pairing::{pairing_matrix, vanishing_classes, PerturbationRule, VanishingClasses};
use crate::relations::{
    search_good_subsets, CycleConfiguration, RelationsError, SearchOptions, SearchReport,
};
use crate::surgery::{conifold_transition, SixManifoldTopology};
use crate::zlinalg::{rank_exact, IntegerMatrix};

/// b₃ of the quintic threefold.
pub const PAIRING_RANK_TARGET: usize = 204;
pub const VANISHING_SPAN_TARGET: usize = 101;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleAttempt {
    pub rule: PerturbationRule,
    pub rank: usize,
    pub antisymmetric: bool,
}

pub struct QuinticModel {
    pub cycles: Vec<QuinticCycle>,
    pub rule: PerturbationRule,
    pub pairing: IntegerMatrix,
    pub rank: usize,
    pub attempts: Vec<RuleAttempt>,
    pub vanishing: VanishingClasses,
}

/// Builds the pairing with the default push-off and falls back through the
/// other sign patterns only if the rank target or antisymmetry fails.
pub fn build_model() -> QuinticModel {
    let cycles = generate_cycles();
    let mut attempts = Vec::new();
    let mut first: Option<(PerturbationRule, IntegerMatrix, usize)> = None;
    for rule in PerturbationRule::candidates() {
        let p = pairing_matrix(&cycles, &rule);
        let rank = rank_exact(&p);
        let antisymmetric = p.is_antisymmetric();
        attempts.push(RuleAttempt {
            rule,
            rank,
            antisymmetric,
        });
        let hit = antisymmetric && rank == PAIRING_RANK_TARGET;
        if hit || first.is_none() {
            first = Some((rule, p, rank));
        }
        if hit {
            break;
        }
    }
    let (rule, pairing, rank) = first.expect("at least one rule");
    let vanishing = vanishing_classes(&pairing);
    QuinticModel {
        cycles,
        rule,
        pairing,
        rank,
        attempts,
        vanishing,
    }
}

/// The 125 vanishing cycles: classes against the 625 spanning cycles,
/// pairwise disjoint.
pub fn vanishing_configuration(model: &QuinticModel) -> Result<CycleConfiguration, RelationsError> {
    let v = &model.vanishing;
    let n = v.nodes.len();
    let labels = v.nodes.iter().map(|g| format!("V_{g}")).collect();
    let pairing = model
        .pairing
        .select_rows(&v.cycle_indices)
        .select_cols(&v.cycle_indices);
    let disjoint = (0..n)
        .map(|i| (0..n).filter(|&j| j != i).collect())
        .collect();
    CycleConfiguration::new(labels, v.classes.clone(), Some(pairing), disjoint)
}

/// The 625 spheres followed by the 125 vanishing cycles. Classes are pairing
/// rows against the 625 spheres; a vanishing cycle pairs like its sphere g·L¹.
/// Sphere pairs are disjoint when their cells are; vanishing cycles are
/// disjoint from each other and not declared disjoint from any sphere.
pub fn full_configuration(model: &QuinticModel) -> Result<CycleConfiguration, RelationsError> {
    let n_l = model.cycles.len();
    let v = &model.vanishing;
    let n = n_l + v.nodes.len();
    let mut labels: Vec<String> = model.cycles.iter().map(|c| c.label.to_string()).collect();
    labels.extend(v.nodes.iter().map(|g| format!("V_{g}")));
    let source: Vec<usize> = (0..n_l).chain(v.cycle_indices.iter().copied()).collect();
    let classes = model.pairing.select_rows(&source);
    let pairing = classes.select_cols(&source);
    let mut disjoint: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n_l {
        for j in i + 1..n_l {
            if cycles_disjoint(&model.cycles[i], &model.cycles[j]) {
                disjoint[i].push(j);
            }
        }
    }
    for i in n_l..n {
        disjoint[i].extend(i + 1..n);
    }
    CycleConfiguration::new(labels, classes, Some(pairing), disjoint)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReproduceOptions {
    pub seed: u64,
    pub min_size: usize,
    pub max_size: usize,
    pub max_moves: usize,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            min_size: 102,
            max_size: 125,
            max_moves: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub k: usize,
    pub found: bool,
    pub span: Option<usize>,
    pub b2: Option<u64>,
    pub b3: Option<u64>,
    pub euler: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropositionReport {
    pub perturbation: PerturbationRule,
    pub attempts: Vec<RuleAttempt>,
    pub cycle_count: usize,
    pub pairing_rank: usize,
    pub pairing_rank_target: usize,
    pub vanishing_count: usize,
    pub vanishing_rank: usize,
    pub vanishing_pairwise_zero: bool,
    pub search: SearchReport,
    pub table: Vec<TableRow>,
    pub observations: Vec<String>,
}

impl PropositionReport {
    pub fn rank_target_met(&self) -> bool {
        self.pairing_rank == self.pairing_rank_target
    }

    /// Every size in range found with span exactly 101, giving b₃ = 2 and
    /// b₂ = k - 100.
    pub fn table_target_met(&self) -> bool {
        !self.table.is_empty()
            && self.table.iter().all(|r| {
                r.found
                    && r.span == Some(VANISHING_SPAN_TARGET)
                    && r.b3 == Some(2)
                    && r.b2 == Some(r.k as u64 - 100)
            })
    }
}

pub fn reproduce_proposition(
    model: &QuinticModel,
    options: &ReproduceOptions,
) -> Result<PropositionReport, RelationsError> {
    let config = vanishing_configuration(model)?;
    let vanishing_rank = rank_exact(config.classes());
    let vanishing_pairwise_zero = config.pairing().is_some_and(IntegerMatrix::is_zero);
    let mut search_opts = SearchOptions::new(options.min_size, options.max_size, options.seed);
    search_opts.max_moves = options.max_moves;
    let search = search_good_subsets(&config, &search_opts)?;
    let quintic = SixManifoldTopology::quintic();
    let table = search
        .results
        .iter()
        .map(|r| {
            let after = r.span.and_then(|span| {
                conifold_transition(&quintic, r.size as u64, span as u64, true).ok()
            });
            TableRow {
                k: r.size,
                found: r.found,
                span: r.span,
                b2: after.map(|t| t.b2),
                b3: after.map(|t| t.b3),
                euler: after.map(|t| t.euler),
            }
        })
        .collect();
    let max_span = search.results.iter().filter_map(|r| r.span).max();
    let observations = vec![
        format!(
            "largest span among the good disjoint subsets found: {}",
            max_span.map_or("none".to_string(), |s| s.to_string())
        ),
        format!(
            "the 125 vanishing classes have rank {vanishing_rank}, which bounds the span of any subset of them"
        ),
        "no claim is made about disjoint spheres outside this configuration".to_string(),
    ];
    Ok(PropositionReport {
        perturbation: model.rule,
        attempts: model.attempts.clone(),
        cycle_count: model.cycles.len(),
        pairing_rank: model.rank,
        pairing_rank_target: PAIRING_RANK_TARGET,
        vanishing_count: config.len(),
        vanishing_rank,
        vanishing_pairwise_zero,
        search,
        table,
        observations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealSolutionCheck {
    pub lambda: f64,
    pub has_solution: bool,
    /// Positive point (t,1,1,1) on the branch locus when one exists.
    pub witness: Option<[f64; 4]>,
    /// |G(witness)| for the normalized branch equation G.
    pub residual: Option<f64>,
}

/// Positive real solutions of 5⁵(Σxᵢ⁵)⁴ = 4⁴λ⁵(Πxᵢ)⁵ exist iff λ ≥ 5, by
/// AM-GM. For λ ≥ 5 a witness (t,1,1,1) with t ∈ (0,1] is found by bisection
/// on G(t) = ((t⁵+3)/4)⁴ - (λ/5)⁵t⁵, which is positive near 0 and
/// nonpositive at 1.
pub fn real_solution_check(lambda: f64) -> RealSolutionCheck {
    if !(lambda >= 5.0) {
        return RealSolutionCheck {
            lambda,
            has_solution: false,
            witness: None,
            residual: None,
        };
    }
    let g = |t: f64| ((t.powi(5) + 3.0) / 4.0).powi(4) - (lambda / 5.0).powi(5) * t.powi(5);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if g(hi).is_zero() {
        lo = hi;
    }
    for _ in 0..200 {
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = hi;
    RealSolutionCheck {
        lambda,
        has_solution: true,
        witness: Some([t, 1.0, 1.0, 1.0]),
        residual: Some(g(t).abs()),
    }
}
