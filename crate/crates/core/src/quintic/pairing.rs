use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cells::{cycle_index, cycles_disjoint, GroupElement, QuinticCycle};
use crate::zlinalg::IntegerMatrix;

/// Push-off used to make two cycles transverse: coordinate j of the second
/// cycle is rotated by e^{±i·directions[j]·ε} in the chart xⱼ/x₅.
/// All +1 is the rotation of x₅ alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationRule {
    pub directions: [i8; 4],
}

impl Default for PerturbationRule {
    fn default() -> Self {
        Self { directions: [1; 4] }
    }
}

impl PerturbationRule {
    /// Default rule first, then the remaining sign patterns in binary order.
    pub fn candidates() -> Vec<Self> {
        (0u8..16)
            .map(|mask| Self {
                directions: std::array::from_fn(|j| if mask >> j & 1 == 0 { 1 } else { -1 }),
            })
            .collect()
    }
}

// Angles are in units of π/20, so rays (odd multiples of π/5) sit at 4(2e+1)
// and a push-off moves them by one unit.
const FULL_TURN: i32 = 40;

fn ray_angle(phase: u8) -> i32 {
    4 * (2 * phase as i32 + 1)
}

/// Local intersection sign at the origin of two oriented V-shaped paths in a
/// coordinate plane, each entering along its first ray and leaving along the
/// second. They cross iff the four rays interleave; the sign is +1 for the
/// counterclockwise order p₀ q₀ p₁ q₁.
fn crossing(p: (i32, i32), q: (i32, i32)) -> i32 {
    let rel = |x: i32| (x - p.0).rem_euclid(FULL_TURN);
    let (p1, q0, q1) = (rel(p.1), rel(q.0), rel(q.1));
    match (q0 < p1, q1 < p1) {
        (true, false) => 1,
        (false, true) => -1,
        _ => 0,
    }
}

fn linking(a: &[u8; 4], b: &[u8; 4], rule: &PerturbationRule, side: i32) -> i32 {
    (0..4)
        .map(|j| {
            let s = side * rule.directions[j] as i32;
            let p = (ray_angle(a[j]), ray_angle(a[j] + 1));
            let q = (ray_angle(b[j]) + s, ray_angle(b[j] + 1) + s);
            crossing(p, q)
        })
        .product()
}

/// Signed intersection of two cycles. Cycles without a common vertex are
/// disjoint and pair to zero. Otherwise the second cycle is pushed off to each
/// side; the pushed copies meet the first only over the common vertex stratum,
/// where the count factors into planar crossings, and the intersection number
/// is the difference of the two counts.
pub fn pairing_entry(a: &QuinticCycle, b: &QuinticCycle, rule: &PerturbationRule) -> i64 {
    if cycles_disjoint(a, b) {
        return 0;
    }
    let (sa, sb) = (a.shift(), b.shift());
    (linking(&sa, &sb, rule, 1) - linking(&sa, &sb, rule, -1)) as i64
}

/// Pairing as a function of shift vectors, without the cell-level
/// disjointness test; used for the bulk matrix.
fn pairing_from_shifts(sa: &[u8; 4], sb: &[u8; 4], rule: &PerturbationRule) -> i64 {
    (linking(sa, sb, rule, 1) - linking(sa, sb, rule, -1)) as i64
}

pub fn pairing_matrix(cycles: &[QuinticCycle], rule: &PerturbationRule) -> IntegerMatrix {
    let shifts: Vec<[u8; 4]> = cycles.iter().map(QuinticCycle::shift).collect();
    let n = cycles.len();
    let entries: Vec<BigInt> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            BigInt::from(pairing_from_shifts(&shifts[i], &shifts[j], rule))
        })
        .collect();
    IntegerMatrix::new(n, n, entries).expect("square")
}

/// Class of the vanishing cycle at each node g·[1:…:1], as the pairing row of
/// the translate g·L¹, one row per normalized group element.
#[derive(Debug, Clone)]
pub struct VanishingClasses {
    pub nodes: Vec<GroupElement>,
    pub cycle_indices: Vec<usize>,
    pub classes: IntegerMatrix,
}

pub fn vanishing_classes(pairing: &IntegerMatrix) -> VanishingClasses {
    let nodes = GroupElement::all();
    let cycle_indices: Vec<usize> = nodes.iter().map(|g| cycle_index(1, g)).collect();
    VanishingClasses {
        classes: pairing.select_rows(&cycle_indices),
        nodes,
        cycle_indices,
    }
}
