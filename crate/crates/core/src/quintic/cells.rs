use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const ORDER: u8 = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuinticError {
    #[error("group element exponents sum to {0} mod 5, expected 0")]
    NotInGroup(u8),
    #[error("exponent {0} out of range 0..5")]
    Exponent(u8),
}

/// Element of (Z/5)³ acting by xⱼ ↦ αⁱʲxⱼ, stored as five exponents with
/// zero sum. Exponent vectors differing by a diagonal act identically on
/// projective space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement([u8; 5]);

impl GroupElement {
    pub fn new(exponents: [u8; 5]) -> Result<Self, QuinticError> {
        if let Some(&e) = exponents.iter().find(|&&e| e >= ORDER) {
            return Err(QuinticError::Exponent(e));
        }
        let s = exponents.iter().map(|&e| e as u32).sum::<u32>() % ORDER as u32;
        if s != 0 {
            return Err(QuinticError::NotInGroup(s as u8));
        }
        Ok(Self(exponents))
    }

    pub fn identity() -> Self {
        Self([0; 5])
    }

    pub fn exponents(&self) -> [u8; 5] {
        self.0
    }

    pub fn compose(&self, other: &Self) -> Self {
        let mut e = [0; 5];
        for (j, x) in e.iter_mut().enumerate() {
            *x = (self.0[j] + other.0[j]) % ORDER;
        }
        Self(e)
    }

    /// Representative with last exponent zero.
    pub fn normalized(&self) -> Self {
        let c = self.0[4];
        let mut e = self.0;
        e.iter_mut().for_each(|x| *x = (*x + ORDER - c) % ORDER);
        Self(e)
    }

    /// The 125 normalized elements, ordered by (i₁, i₂, i₃).
    pub fn all() -> Vec<Self> {
        let mut out = Vec::with_capacity(125);
        for i1 in 0..ORDER {
            for i2 in 0..ORDER {
                for i3 in 0..ORDER {
                    let i4 = (3 * ORDER - i1 - i2 - i3) % ORDER;
                    out.push(Self([i1, i2, i3, i4, 0]));
                }
            }
        }
        out
    }

    /// Position in [`GroupElement::all`].
    pub fn index(&self) -> usize {
        let e = self.normalized().0;
        (e[0] as usize * 25) + (e[1] as usize * 5) + e[2] as usize
    }

    /// Generators (1,-1,0,0,0), (0,1,-1,0,0), (0,0,1,-1,0).
    pub fn generators() -> [Self; 3] {
        [
            Self([1, 4, 0, 0, 0]),
            Self([0, 1, 4, 0, 0]),
            Self([0, 0, 1, 4, 0]),
        ]
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in self.0 {
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Per-coordinate condition on x₁..x₄: zero, or xⱼ ∈ αᵐ·(0,∞).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Constraint {
    Zero,
    Ray(u8),
}

/// Cell of the cycle complex: base-cell constraints translated by `g`, on the
/// x₅ root with branch index `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PhaseCell {
    pub k: u8,
    pub constraints: [Constraint; 4],
    pub g: GroupElement,
}

impl PhaseCell {
    /// Projective dimension; -1 for the empty cell.
    pub fn dimension(&self) -> i32 {
        self.constraints
            .iter()
            .filter(|c| matches!(c, Constraint::Ray(_)))
            .count() as i32
            - 1
    }

    /// Phase index of coordinate j measured against the x₅ root: the ray of
    /// xⱼ/x₅ is e^{iπ(2e+1)/5}·(0,∞). Positive rescaling fixes these phases,
    /// so they compare points on different branches.
    pub fn relative_phase(&self, j: usize) -> Option<u8> {
        match self.constraints[j] {
            Constraint::Zero => None,
            Constraint::Ray(m) => {
                let e = self.g.exponents();
                Some((m + e[j] + 2 * ORDER - e[4] - self.k % ORDER) % ORDER)
            }
        }
    }

    /// Codimension-one faces with the simplicial boundary signs: dropping the
    /// t-th nonzero coordinate contributes (-1)^t.
    pub fn faces(&self) -> Vec<(PhaseCell, i64)> {
        let mut out = Vec::new();
        let mut t = 0;
        for j in 0..4 {
            if let Constraint::Ray(_) = self.constraints[j] {
                let mut f = *self;
                f.constraints[j] = Constraint::Zero;
                if f.dimension() >= 0 {
                    out.push((f, if t % 2 == 0 { 1 } else { -1 }));
                }
                t += 1;
            }
        }
        out
    }
}

/// Branch of the x₅ root after acting by `g`: the phase e^{(2k-1)πi/5} picks
/// up α^{i₅}.
pub fn branch_transport(k: u8, g: &GroupElement) -> u8 {
    (k + g.exponents()[4]) % ORDER
}

/// Whether the open cell `c` meets the closure of `d`: every nonzero
/// coordinate of `c` must sit on the same relative ray in `d`.
fn meets_closure(c: &PhaseCell, d: &PhaseCell) -> bool {
    (0..4).all(|j| match c.relative_phase(j) {
        None => true,
        Some(e) => d.relative_phase(j) == Some(e),
    })
}

/// True when neither cell meets the closure of the other. A face therefore
/// counts as meeting every cell it bounds, while cells that disagree on a
/// ray, or one of which is zero where the other is not and is not its face,
/// are disjoint.
pub fn cells_disjoint(c1: &PhaseCell, c2: &PhaseCell) -> bool {
    if c1.dimension() < 0 || c2.dimension() < 0 {
        return true;
    }
    !meets_closure(c1, c2) && !meets_closure(c2, c1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleLabel {
    pub k: u8,
    pub g: GroupElement,
}

impl fmt::Display for CycleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}_{}", self.k, self.g)
    }
}

/// Signed union of the 16 three-cells Δ_α, α ∈ {0,1}⁴, translated by g.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuinticCycle {
    pub label: CycleLabel,
    pub cells: Vec<(PhaseCell, i64)>,
}

impl QuinticCycle {
    pub fn new(k: u8, g: GroupElement) -> Self {
        let g = g.normalized();
        let mut cells = Vec::with_capacity(16);
        for mask in 0u8..16 {
            let mut constraints = [Constraint::Ray(0); 4];
            for (j, c) in constraints.iter_mut().enumerate() {
                *c = Constraint::Ray((mask >> j) & 1);
            }
            let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            cells.push((PhaseCell { k, constraints, g }, sign));
        }
        Self {
            label: CycleLabel { k, g },
            cells,
        }
    }

    /// Relative phases of the ray(0) slots; the cycle is determined by them.
    pub fn shift(&self) -> [u8; 4] {
        let base = PhaseCell {
            k: self.label.k,
            constraints: [Constraint::Ray(0); 4],
            g: self.label.g,
        };
        std::array::from_fn(|j| base.relative_phase(j).expect("ray"))
    }

    /// Chain boundary of the signed top cells, with zero coefficients dropped.
    pub fn boundary(&self) -> BTreeMap<PhaseCell, i64> {
        let mut acc: BTreeMap<PhaseCell, i64> = BTreeMap::new();
        for (cell, sign) in &self.cells {
            for (face, s) in cell.faces() {
                *acc.entry(face).or_default() += sign * s;
            }
        }
        acc.retain(|_, v| *v != 0);
        acc
    }

    /// All cells of the closure, grouped by dimension 0..=3.
    pub fn closure(&self) -> [BTreeSet<PhaseCell>; 4] {
        let mut by_dim: [BTreeSet<PhaseCell>; 4] = Default::default();
        let mut frontier: Vec<PhaseCell> = self.cells.iter().map(|(c, _)| *c).collect();
        while let Some(c) = frontier.pop() {
            if by_dim[c.dimension() as usize].insert(c) {
                frontier.extend(c.faces().into_iter().map(|(f, _)| f));
            }
        }
        by_dim
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.closure()
            .iter()
            .enumerate()
            .map(|(d, s)| {
                if d % 2 == 0 {
                    s.len() as i64
                } else {
                    -(s.len() as i64)
                }
            })
            .sum()
    }

    pub fn vertices(&self) -> Vec<PhaseCell> {
        self.closure()[0].iter().copied().collect()
    }

    pub fn act(&self, h: &GroupElement) -> Self {
        Self::new(self.label.k, self.label.g.compose(h))
    }
}

/// Closed cycles meet iff their closures share a point, which happens iff
/// they share a vertex.
pub fn cycles_disjoint(a: &QuinticCycle, b: &QuinticCycle) -> bool {
    let vb = b.vertices();
    a.vertices()
        .iter()
        .all(|x| vb.iter().all(|y| cells_disjoint(x, y)))
}

/// The 625 cycles indexed by branch k and group element, k-major.
pub fn generate_cycles() -> Vec<QuinticCycle> {
    let gs = GroupElement::all();
    (0..ORDER)
        .flat_map(|k| gs.iter().map(move |g| QuinticCycle::new(k, *g)))
        .collect()
}

pub fn cycle_index(k: u8, g: &GroupElement) -> usize {
    k as usize * 125 + g.index()
}
