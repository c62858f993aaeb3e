//! Betti-number and flag bookkeeping for conifold transitions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurgeryError {
    #[error("no good relation: no symplectic structure on any resolution")]
    NoGoodRelation,
    #[error("span dimension r={r} exceeds b3/2={half}")]
    SpanExceedsHalfB3 { r: u64, half: u64 },
    #[error("span dimension r={r} exceeds sphere count n={n}")]
    SpanExceedsCount { r: u64, n: u64 },
    #[error("reverse transition needs b2 and b4 at least n-r={need}, have b2={b2}, b4={b4}")]
    NotEnoughCurves { need: u64, b2: u64, b4: u64 },
    #[error("inconsistent topology: {0}")]
    Inconsistent(String),
    #[error("arithmetic overflow")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SixManifoldTopology {
    pub b2: u64,
    pub b3: u64,
    pub b4: u64,
    pub euler: i64,
    pub simply_connected: bool,
    pub c1_zero: bool,
    pub has_null_homologous_surgered_sphere: bool,
}

impl SixManifoldTopology {
    /// Simply connected closed 6-manifold with b4 = b2 and the Euler
    /// characteristic forced by Poincaré duality.
    pub fn simply_connected(b2: u64, b3: u64, c1_zero: bool) -> Result<Self, SurgeryError> {
        let euler = 2 + 2 * i64::try_from(b2).map_err(|_| SurgeryError::Overflow)?
            - i64::try_from(b3).map_err(|_| SurgeryError::Overflow)?;
        let t = Self {
            b2,
            b3,
            b4: b2,
            euler,
            simply_connected: true,
            c1_zero,
            has_null_homologous_surgered_sphere: false,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn quintic() -> Self {
        Self {
            b2: 1,
            b3: 204,
            b4: 1,
            euler: -200,
            simply_connected: true,
            c1_zero: true,
            has_null_homologous_surgered_sphere: false,
        }
    }

    pub fn validate(&self) -> Result<(), SurgeryError> {
        if self.b3 % 2 != 0 {
            return Err(SurgeryError::Inconsistent(format!("b3={} is odd", self.b3)));
        }
        if self.simply_connected {
            if self.b2 != self.b4 {
                return Err(SurgeryError::Inconsistent(format!(
                    "b2={} differs from b4={}",
                    self.b2, self.b4
                )));
            }
            let expected = 2 + 2 * self.b2 as i128 - self.b3 as i128;
            if expected != self.euler as i128 {
                return Err(SurgeryError::Inconsistent(format!(
                    "euler={} but 2+2b2-b3={expected}",
                    self.euler
                )));
            }
        }
        Ok(())
    }
}

/// The data of one transition: n spheres spanning r dimensions of H3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transition {
    pub n: u64,
    pub r: u64,
    pub good: bool,
    /// Whether one of the surgered spheres is null-homologous.
    pub null_homologous_sphere: bool,
}

impl Transition {
    pub fn new(n: u64, r: u64, good: bool) -> Self {
        Self {
            n,
            r,
            good,
            null_homologous_sphere: false,
        }
    }
}

pub fn conifold_transition(
    x: &SixManifoldTopology,
    n: u64,
    r: u64,
    good: bool,
) -> Result<SixManifoldTopology, SurgeryError> {
    apply_transition(x, &Transition::new(n, r, good))
}

pub fn apply_transition(
    x: &SixManifoldTopology,
    t: &Transition,
) -> Result<SixManifoldTopology, SurgeryError> {
    if !t.good {
        return Err(SurgeryError::NoGoodRelation);
    }
    if t.r > t.n {
        return Err(SurgeryError::SpanExceedsCount { r: t.r, n: t.n });
    }
    if t.r > x.b3 / 2 {
        return Err(SurgeryError::SpanExceedsHalfB3 {
            r: t.r,
            half: x.b3 / 2,
        });
    }
    let added = t.n - t.r;
    let two_n = i64::try_from(t.n)
        .ok()
        .and_then(|n| n.checked_mul(2))
        .ok_or(SurgeryError::Overflow)?;
    Ok(SixManifoldTopology {
        b2: x.b2.checked_add(added).ok_or(SurgeryError::Overflow)?,
        b3: x.b3 - 2 * t.r,
        b4: x.b4.checked_add(added).ok_or(SurgeryError::Overflow)?,
        euler: x.euler.checked_add(two_n).ok_or(SurgeryError::Overflow)?,
        simply_connected: x.simply_connected,
        c1_zero: x.c1_zero,
        has_null_homologous_surgered_sphere: x.has_null_homologous_surgered_sphere
            || t.null_homologous_sphere,
    })
}

/// Formal inverse of [`conifold_transition`]: contracting n curves whose
/// classes satisfy n - r relations and smoothing the nodes.
pub fn reverse_transition(
    y: &SixManifoldTopology,
    n: u64,
    r: u64,
) -> Result<SixManifoldTopology, SurgeryError> {
    if r > n {
        return Err(SurgeryError::SpanExceedsCount { r, n });
    }
    let need = n - r;
    if y.b2 < need || y.b4 < need {
        return Err(SurgeryError::NotEnoughCurves {
            need,
            b2: y.b2,
            b4: y.b4,
        });
    }
    let two_n = i64::try_from(n)
        .ok()
        .and_then(|n| n.checked_mul(2))
        .ok_or(SurgeryError::Overflow)?;
    Ok(SixManifoldTopology {
        b2: y.b2 - need,
        b3: r
            .checked_mul(2)
            .and_then(|x| y.b3.checked_add(x))
            .ok_or(SurgeryError::Overflow)?,
        b4: y.b4 - need,
        euler: y.euler.checked_sub(two_n).ok_or(SurgeryError::Overflow)?,
        ..*y
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionFlags {
    /// Simply connected with c1 = 0 and b3 = 0, which no Kähler Calabi-Yau can be.
    pub non_kahler_by_b3: bool,
    /// A null-homologous sphere was surgered, so the new curve class kills
    /// the Lefschetz map H4 -> H2.
    pub hard_lefschetz_violated: bool,
    /// Qualitative: each added curve has positive area.
    pub c2_omega_increases: bool,
}

pub fn obstruction_flags(
    y: &SixManifoldTopology,
    producing: Option<&Transition>,
) -> ObstructionFlags {
    ObstructionFlags {
        non_kahler_by_b3: y.simply_connected && y.c1_zero && y.b3 == 0,
        hard_lefschetz_violated: y.has_null_homologous_surgered_sphere,
        c2_omega_increases: producing.is_some_and(|t| t.n >= 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quintic_examples() {
        let q = SixManifoldTopology::quintic();
        q.validate().unwrap();
        let y = conifold_transition(&q, 102, 101, true).unwrap();
        assert_eq!((y.b2, y.b3, y.b4, y.euler), (2, 2, 2, 4));
        let y = conifold_transition(&q, 125, 101, true).unwrap();
        assert_eq!((y.b2, y.b3, y.euler), (25, 2, 50));
        assert_eq!(conifold_transition(&q, 0, 0, true).unwrap(), q);
    }

    #[test]
    fn gates() {
        let q = SixManifoldTopology::quintic();
        let err = conifold_transition(&q, 3, 1, false).unwrap_err();
        assert!(err.to_string().starts_with("no good relation"));
        assert!(matches!(
            conifold_transition(&q, 200, 103, true),
            Err(SurgeryError::SpanExceedsHalfB3 { .. })
        ));
    }

    #[test]
    fn reverse_examples() {
        let y = SixManifoldTopology::simply_connected(2, 2, true).unwrap();
        let x = reverse_transition(&y, 102, 101).unwrap();
        assert_eq!((x.b2, x.b3, x.euler), (1, 204, -200));
        assert_eq!(reverse_transition(&y, 0, 0).unwrap(), y);
        assert!(reverse_transition(&y, 10, 0).is_err());
    }

    #[test]
    fn flag_examples() {
        let t = SixManifoldTopology::simply_connected(5, 0, true).unwrap();
        assert!(obstruction_flags(&t, None).non_kahler_by_b3);
        let q = SixManifoldTopology::quintic();
        let tr = Transition::new(102, 101, true);
        let y = apply_transition(&q, &tr).unwrap();
        let f = obstruction_flags(&y, Some(&tr));
        assert!(!f.non_kahler_by_b3 && f.c2_omega_increases && !f.hard_lefschetz_violated);
        let tr = Transition {
            null_homologous_sphere: true,
            ..Transition::new(1, 0, true)
        };
        let y = apply_transition(&q, &tr).unwrap();
        assert!(obstruction_flags(&y, Some(&tr)).hard_lefschetz_violated);
        assert!(!obstruction_flags(&q, None).c2_omega_increases);
    }
}
