//! Lagrangian 3-spheres in fibre products of two elliptic fibrations over P¹,
//! built over arcs between critical values. Everything is combinatorial:
//! base points are Gaussian integers, fibre homology is Z², and arcs carry
//! their crossing data explicitly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::relations::{CycleConfiguration, RelationsError};
use crate::zlinalg::IntegerMatrix;

pub type Class = [i64; 2];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiberedError {
    #[error("critical value {0} listed twice")]
    DuplicateCriticalValue(BasePoint),
    #[error("vanishing class {class:?} at {point} is neither primitive nor flagged trivial")]
    NotPrimitive { point: BasePoint, class: Class },
    #[error("trivial vanishing cycle at {0} must have class (0,0)")]
    TrivialWithClass(BasePoint),
    #[error("arc endpoint {point} is not a critical value of fibration {which}")]
    EndpointNotCritical { point: BasePoint, which: u8 },
    #[error("arc endpoint {0} is a common critical value (a node of the fibre product)")]
    EndpointIsNode(BasePoint),
    #[error("monodromy path point {0} is not a critical value")]
    PathNotCritical(BasePoint),
    #[error("not a sphere: collapsing circles do not span H1(T2)")]
    NotASphere,
    #[error("non-transverse configuration")]
    NonTransverse,
    #[error("crossing {label:?}: {reason}")]
    Crossing { label: String, reason: String },
    #[error("unit {0:?} is not a Gaussian unit")]
    NotAUnit((i64, i64)),
    #[error("integer overflow")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasePoint {
    pub re: i64,
    pub im: i64,
}

impl BasePoint {
    pub fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }
}

impl std::fmt::Display for BasePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{:+}i", self.re, self.im)
    }
}

/// Determinant pairing on H₁(T²) = Z².
pub fn det(a: Class, b: Class) -> Result<i64, FiberedError> {
    let v = a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128;
    i64::try_from(v).map_err(|_| FiberedError::Overflow)
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

pub fn is_primitive(v: Class) -> bool {
    gcd(v[0], v[1]) == 1
}

/// Dehn twist action c ↦ c + ⟨c,v⟩·v. The zero class acts trivially.
pub fn picard_lefschetz_transport(c: Class, v: Class) -> Result<Class, FiberedError> {
    let k = det(c, v)?;
    let add = |x: i64, y: i64| {
        k.checked_mul(y)
            .and_then(|t| x.checked_add(t))
            .ok_or(FiberedError::Overflow)
    };
    Ok([add(c[0], v[0])?, add(c[1], v[1])?])
}

pub type Monodromy = [[i64; 2]; 2];

/// Matrix of transport around critical values with the given classes, in
/// order (the first twist is applied first).
pub fn monodromy_matrix(classes: &[Class]) -> Result<Monodromy, FiberedError> {
    let mut e1 = [1, 0];
    let mut e2 = [0, 1];
    for &v in classes {
        e1 = picard_lefschetz_transport(e1, v)?;
        e2 = picard_lefschetz_transport(e2, v)?;
    }
    Ok([[e1[0], e2[0]], [e1[1], e2[1]]])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalValue {
    pub point: BasePoint,
    pub vanishing_class: Class,
    pub homotopically_trivial: bool,
}

impl CriticalValue {
    pub fn nodal(point: BasePoint, class: Class) -> Self {
        Self {
            point,
            vanishing_class: class,
            homotopically_trivial: false,
        }
    }

    pub fn trivial(point: BasePoint) -> Self {
        Self {
            point,
            vanishing_class: [0, 0],
            homotopically_trivial: true,
        }
    }
}

/// Elliptic fibration with one node in each singular fibre.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFibration", into = "RawFibration")]
pub struct EllipticFibration {
    critical: BTreeMap<BasePoint, CriticalValue>,
    order: Vec<BasePoint>,
}

#[derive(Serialize, Deserialize)]
struct RawFibration {
    critical_values: Vec<CriticalValue>,
}

impl TryFrom<RawFibration> for EllipticFibration {
    type Error = FiberedError;
    fn try_from(r: RawFibration) -> Result<Self, FiberedError> {
        Self::new(r.critical_values)
    }
}

impl From<EllipticFibration> for RawFibration {
    fn from(f: EllipticFibration) -> Self {
        Self {
            critical_values: f.critical_values(),
        }
    }
}

impl EllipticFibration {
    pub fn new(values: Vec<CriticalValue>) -> Result<Self, FiberedError> {
        let mut critical = BTreeMap::new();
        let mut order = Vec::new();
        for cv in values {
            if cv.homotopically_trivial {
                if cv.vanishing_class != [0, 0] {
                    return Err(FiberedError::TrivialWithClass(cv.point));
                }
            } else if !is_primitive(cv.vanishing_class) {
                return Err(FiberedError::NotPrimitive {
                    point: cv.point,
                    class: cv.vanishing_class,
                });
            }
            if critical.insert(cv.point, cv).is_some() {
                return Err(FiberedError::DuplicateCriticalValue(cv.point));
            }
            order.push(cv.point);
        }
        Ok(Self { critical, order })
    }

    pub fn critical_values(&self) -> Vec<CriticalValue> {
        self.order.iter().map(|p| self.critical[p]).collect()
    }

    pub fn get(&self, p: &BasePoint) -> Option<&CriticalValue> {
        self.critical.get(p)
    }

    pub fn is_critical(&self, p: &BasePoint) -> bool {
        self.critical.contains_key(p)
    }

    /// Total monodromy of a loop around all critical values, in listed order.
    pub fn total_monodromy(&self) -> Result<Monodromy, FiberedError> {
        let classes: Vec<Class> = self
            .critical_values()
            .iter()
            .map(|c| c.vanishing_class)
            .collect();
        monodromy_matrix(&classes)
    }

    /// Pull back along a base automorphism: critical values move, fibres do not.
    pub fn compose_with(&self, phi: &BaseAutomorphism) -> Result<Self, FiberedError> {
        Self::new(
            self.critical_values()
                .into_iter()
                .map(|cv| CriticalValue {
                    point: phi.apply(cv.point),
                    ..cv
                })
                .collect(),
        )
    }
}

/// z ↦ u·z + b with u ∈ {±1, ±i}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseAutomorphism {
    pub unit: (i64, i64),
    pub shift: BasePoint,
}

impl BaseAutomorphism {
    pub fn new(unit: (i64, i64), shift: BasePoint) -> Result<Self, FiberedError> {
        if unit.0 * unit.0 + unit.1 * unit.1 != 1 {
            return Err(FiberedError::NotAUnit(unit));
        }
        Ok(Self { unit, shift })
    }

    pub fn apply(&self, z: BasePoint) -> BasePoint {
        let (a, b) = self.unit;
        BasePoint::new(
            a * z.re - b * z.im + self.shift.re,
            a * z.im + b * z.re + self.shift.im,
        )
    }

    pub fn fixes(&self, z: BasePoint) -> bool {
        self.apply(z) == z
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibreProduct {
    /// Common critical values; each is a conifold node of the fibre product.
    pub nodes: Vec<BasePoint>,
    pub smooth: bool,
}

pub fn validate_fibre_product(f1: &EllipticFibration, f2: &EllipticFibration) -> FibreProduct {
    let nodes: Vec<BasePoint> = f1
        .order
        .iter()
        .filter(|p| f2.is_critical(p))
        .copied()
        .collect();
    FibreProduct {
        smooth: nodes.is_empty(),
        nodes,
    }
}

/// Transverse crossing of this arc with another arc. `path` lists the critical
/// values encircled when transporting from the arc's reference point to the
/// crossing. The other arc records the same label with the opposite sign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub label: String,
    pub sign: i8,
    #[serde(default)]
    pub path: Vec<BasePoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseArc {
    /// Critical value of the first fibration.
    pub a: BasePoint,
    /// Critical value of the second fibration.
    pub b: BasePoint,
    #[serde(default)]
    pub crossings: Vec<Crossing>,
    /// Critical values encircled between `a` and the reference point.
    #[serde(default)]
    pub monodromy_path: Vec<BasePoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberedSphere {
    pub arc: BaseArc,
    /// Transported H₁ classes of the circles collapsing at a and at b.
    pub class_at_reference: (Class, Class),
}

fn transport_along(
    c: (Class, Class),
    path: &[BasePoint],
    f1: &EllipticFibration,
    f2: &EllipticFibration,
) -> Result<(Class, Class), FiberedError> {
    let (mut c1, mut c2) = c;
    for p in path {
        let (v1, v2) = (f1.get(p), f2.get(p));
        if v1.is_none() && v2.is_none() {
            return Err(FiberedError::PathNotCritical(*p));
        }
        if let Some(v) = v1 {
            c1 = picard_lefschetz_transport(c1, v.vanishing_class)?;
        }
        if let Some(v) = v2 {
            c2 = picard_lefschetz_transport(c2, v.vanishing_class)?;
        }
    }
    Ok((c1, c2))
}

pub fn build_sphere(
    f1: &EllipticFibration,
    f2: &EllipticFibration,
    arc: BaseArc,
) -> Result<FiberedSphere, FiberedError> {
    let va = f1.get(&arc.a).ok_or(FiberedError::EndpointNotCritical {
        point: arc.a,
        which: 1,
    })?;
    let vb = f2.get(&arc.b).ok_or(FiberedError::EndpointNotCritical {
        point: arc.b,
        which: 2,
    })?;
    for p in [arc.a, arc.b] {
        if f1.is_critical(&p) && f2.is_critical(&p) {
            return Err(FiberedError::EndpointIsNode(p));
        }
    }
    let classes = transport_along(
        (va.vanishing_class, vb.vanishing_class),
        &arc.monodromy_path,
        f1,
        f2,
    )?;
    let (c1, c2) = classes;
    if c1 != [0, 0] && c2 != [0, 0] && det(c1, c2)? == 0 {
        return Err(FiberedError::NotASphere);
    }
    Ok(FiberedSphere {
        arc,
        class_at_reference: classes,
    })
}

/// Σ over shared crossings of sign · ⟨c₁,c₁′⟩ · ⟨c₂,c₂′⟩, with both class
/// pairs transported to the crossing.
pub fn sphere_pairing(
    s1: &FiberedSphere,
    s2: &FiberedSphere,
    f1: &EllipticFibration,
    f2: &EllipticFibration,
) -> Result<i64, FiberedError> {
    let (x, y) = (&s1.arc, &s2.arc);
    if x.a == y.a || x.b == y.b || x.a == y.b || x.b == y.a {
        return Err(FiberedError::NonTransverse);
    }
    let mut total: i64 = 0;
    for cx in &x.crossings {
        let Some(cy) = y.crossings.iter().find(|c| c.label == cx.label) else {
            continue;
        };
        if cx.sign.abs() != 1 || cy.sign != -cx.sign {
            return Err(FiberedError::Crossing {
                label: cx.label.clone(),
                reason: format!("signs {} and {} are not opposite units", cx.sign, cy.sign),
            });
        }
        let (a1, a2) = transport_along(s1.class_at_reference, &cx.path, f1, f2)?;
        let (b1, b2) = transport_along(s2.class_at_reference, &cy.path, f1, f2)?;
        let term = det(a1, b1)?
            .checked_mul(det(a2, b2)?)
            .and_then(|t| t.checked_mul(cx.sign as i64))
            .ok_or(FiberedError::Overflow)?;
        total = total.checked_add(term).ok_or(FiberedError::Overflow)?;
    }
    Ok(total)
}

/// Sufficient condition for the sphere to bound: the first fibration's
/// vanishing cycle at a is homotopically trivial, the second fibration's
/// class is trivial there too, and the fibre product has no nodes. Returns
/// false whenever these hypotheses are not all met.
pub fn is_null_homologous(
    s: &FiberedSphere,
    f1: &EllipticFibration,
    f2: &EllipticFibration,
) -> bool {
    let first_trivial = f1.get(&s.arc.a).is_some_and(|c| c.homotopically_trivial);
    let second_trivial = s.class_at_reference.1 == [0, 0]
        && f2.get(&s.arc.b).is_some_and(|c| c.homotopically_trivial);
    first_trivial && second_trivial && validate_fibre_product(f1, f2).smooth
}

/// Spheres as a cycle configuration: classes are pairing rows against the
/// family, and spheres with distinct endpoints and no shared crossing are
/// disjoint.
pub fn spheres_configuration(
    spheres: &[FiberedSphere],
    f1: &EllipticFibration,
    f2: &EllipticFibration,
) -> Result<CycleConfiguration, FiberedError> {
    let n = spheres.len();
    let mut pairing = IntegerMatrix::zeros(n, n);
    let mut disjoint = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            let (x, y) = (&spheres[i].arc, &spheres[j].arc);
            let endpoints_shared = x.a == y.a || x.b == y.b || x.a == y.b || x.b == y.a;
            let crosses = x
                .crossings
                .iter()
                .any(|c| y.crossings.iter().any(|d| d.label == c.label));
            if endpoints_shared {
                continue;
            }
            let p = sphere_pairing(&spheres[i], &spheres[j], f1, f2)?;
            pairing.set(i, j, p.into());
            pairing.set(j, i, (-p).into());
            if !crosses {
                disjoint[i].push(j);
            }
        }
    }
    let labels = spheres
        .iter()
        .map(|s| format!("S[{}->{}]", s.arc.a, s.arc.b))
        .collect();
    CycleConfiguration::new(labels, pairing.clone(), Some(pairing), disjoint).map_err(|e| match e {
        RelationsError::Invalid(m) => FiberedError::Crossing {
            label: String::new(),
            reason: m,
        },
        other => FiberedError::Crossing {
            label: String::new(),
            reason: other.to_string(),
        },
    })
}

/// Fibration pair plus arcs, as read from a file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberedInput {
    pub schema_version: u32,
    pub f1: EllipticFibration,
    pub f2: EllipticFibration,
    pub arcs: Vec<BaseArc>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberedAnalysis {
    pub fibre_product: FibreProduct,
    pub total_monodromy: (Monodromy, Monodromy),
    pub spheres: Vec<FiberedSphere>,
    pub null_homologous: Vec<bool>,
    pub configuration: CycleConfiguration,
}

pub fn analyze(input: &FiberedInput) -> Result<FiberedAnalysis, FiberedError> {
    let (f1, f2) = (&input.f1, &input.f2);
    let spheres = input
        .arcs
        .iter()
        .map(|a| build_sphere(f1, f2, a.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    let null_homologous = spheres
        .iter()
        .map(|s| is_null_homologous(s, f1, f2))
        .collect();
    Ok(FiberedAnalysis {
        fibre_product: validate_fibre_product(f1, f2),
        total_monodromy: (f1.total_monodromy()?, f2.total_monodromy()?),
        configuration: spheres_configuration(&spheres, f1, f2)?,
        spheres,
        null_homologous,
    })
}
