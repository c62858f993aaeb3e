use std::ops::{Mul, Neg, Sub};

use nalgebra::{Matrix2, Vector4};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::LocalModelError;

/// Validation slack for unit and orthogonality preconditions on inputs.
const INPUT_TOL: f64 = 1e-9;

/// Monodromy of the flop on π₃(S³×S²) in the basis (S³, S²).
pub const PI3_MONODROMY: [[i64; 2]; 2] = [[-1, 0], [1, 1]];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion(pub nalgebra::Quaternion<f64>);

impl Quaternion {
    pub fn new(w: f64, i: f64, j: f64, k: f64) -> Self {
        Self(nalgebra::Quaternion::new(w, i, j, k))
    }

    pub fn one() -> Self {
        Self::new(1.0, 0.0, 0.0, 0.0)
    }

    pub fn i() -> Self {
        Self::new(0.0, 1.0, 0.0, 0.0)
    }

    pub fn j() -> Self {
        Self::new(0.0, 0.0, 1.0, 0.0)
    }

    pub fn k() -> Self {
        Self::new(0.0, 0.0, 0.0, 1.0)
    }

    /// Components in the (1, i, j, k) basis.
    pub fn components(&self) -> [f64; 4] {
        [self.0.w, self.0.i, self.0.j, self.0.k]
    }

    fn as_vector(&self) -> Vector4<f64> {
        Vector4::from(self.components())
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.as_vector().dot(&other.as_vector())
    }

    pub fn conjugate(&self) -> Self {
        Self(self.0.conjugate())
    }

    pub fn inverse(&self) -> Option<Self> {
        self.0.try_inverse().map(Self)
    }

    pub fn real(&self) -> f64 {
        self.0.w
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }

    pub fn random_unit<R: Rng>(rng: &mut R) -> Self {
        let v = Vector4::<f64>::from_fn(|_, _| rng.sample(StandardNormal)).normalize();
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn random_unit_imaginary<R: Rng>(rng: &mut R) -> Self {
        let v = nalgebra::Vector3::<f64>::from_fn(|_, _| rng.sample(StandardNormal)).normalize();
        Self::new(0.0, v[0], v[1], v[2])
    }

    pub fn random_orthonormal_pair<R: Rng>(rng: &mut R) -> (Self, Self) {
        let a = Vector4::<f64>::from_fn(|_, _| rng.sample(StandardNormal)).normalize();
        let mut b = Vector4::<f64>::from_fn(|_, _| rng.sample(StandardNormal));
        b -= a * a.dot(&b);
        let b = b.normalize();
        (
            Self::new(a[0], a[1], a[2], a[3]),
            Self::new(b[0], b[1], b[2], b[3]),
        )
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

fn unit_inverse(q: Quaternion, what: &str) -> Result<Quaternion, LocalModelError> {
    if (q.norm() - 1.0).abs() > INPUT_TOL {
        return Err(LocalModelError::BadQuaternion(format!(
            "{what} is not a unit quaternion"
        )));
    }
    Ok(q.conjugate())
}

fn imaginary_defect(q: &Quaternion) -> f64 {
    q.real().abs().max((q.norm() - 1.0).abs())
}

fn pair_defect(a: &Quaternion, b: &Quaternion) -> f64 {
    (a.norm() - 1.0)
        .abs()
        .max((b.norm() - 1.0).abs())
        .max(a.dot(b).abs())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuaternionRecord {
    pub a: [f64; 4],
    pub j: [f64; 4],
    /// a⁻¹Ja.
    pub j_prime: [f64; 4],
    /// |J·a - a·J′|.
    pub intertwining: f64,
    /// J′ is unit imaginary.
    pub j_prime_imaginary: f64,
    /// With b = J·a: J_left = b·a⁻¹ is unit imaginary, J_left·a = b, and
    /// J_right = a⁻¹·b satisfies a·J_right = b.
    pub left_right: f64,
    /// (a,b) ↦ (b,a) negates both structures; the swapped left structure
    /// sends b to a, the role J′ plays for the original pair.
    pub swap: f64,
    /// (a,b) ↦ (b,-a) squared is (-a,-b), fourth power the identity, and
    /// both maps preserve |a| = |b| = 1, ⟨a,b⟩ = 0.
    pub rotation: f64,
}

impl QuaternionRecord {
    pub fn max_residual(&self) -> f64 {
        self.intertwining
            .max(self.j_prime_imaginary)
            .max(self.left_right)
            .max(self.swap)
            .max(self.rotation)
    }
}

pub fn quaternion_maps(a: Quaternion, j: Quaternion) -> Result<QuaternionRecord, LocalModelError> {
    let a_inv = unit_inverse(a, "a")?;
    if imaginary_defect(&j) > INPUT_TOL {
        return Err(LocalModelError::BadQuaternion(
            "J is not a unit imaginary quaternion".to_string(),
        ));
    }
    let j_prime = a_inv * j * a;
    let intertwining = (j * a).distance(&(a * j_prime));

    let b = j * a;
    let b_inv = b.conjugate();
    let j_left = b * a_inv;
    let j_right = a_inv * b;
    let left_right = imaginary_defect(&j_left)
        .max((j_left * a).distance(&b))
        .max((a * j_right).distance(&b))
        .max(imaginary_defect(&j_right));

    let j_left_swapped = a * b_inv;
    let j_right_swapped = b_inv * a;
    let swap = (j_left_swapped - (-j_left))
        .norm()
        .max((j_right_swapped - (-j_right)).norm())
        .max((j_left_swapped * b).distance(&a))
        .max((b * j_right_swapped).distance(&a));

    let rotate = |(x, y): (Quaternion, Quaternion)| (y, -x);
    let r2 = rotate(rotate((a, b)));
    let r4 = rotate(rotate(r2));
    let rotation =
        r2.0.distance(&-a)
            .max(r2.1.distance(&-b))
            .max(r4.0.distance(&a))
            .max(r4.1.distance(&b))
            .max(pair_defect(&rotate((a, b)).0, &rotate((a, b)).1))
            .max(pair_defect(&b, &a));

    Ok(QuaternionRecord {
        a: a.components(),
        j: j.components(),
        j_prime: j_prime.components(),
        intertwining,
        j_prime_imaginary: imaginary_defect(&j_prime),
        left_right,
        swap,
        rotation,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrassmannianRecord {
    /// J = b·a⁻¹.
    pub j: [f64; 4],
    /// J′ = a⁻¹·b.
    pub j_prime: [f64; 4],
    /// |Σ(aⱼ + ibⱼ)²| for the line C·(a+ib).
    pub quadric: f64,
    /// |J·a - b| and |a·J′ - b|.
    pub actions: f64,
    /// For (b,a): J̃ = a·b⁻¹ sends b to a, J̃′ = b⁻¹·a satisfies b·J̃′ = a,
    /// and both are the negatives of J, J′.
    pub interchange: f64,
}

impl GrassmannianRecord {
    pub fn max_residual(&self) -> f64 {
        self.quadric.max(self.actions).max(self.interchange)
    }
}

pub fn grassmannian_maps(
    a: Quaternion,
    b: Quaternion,
) -> Result<GrassmannianRecord, LocalModelError> {
    if pair_defect(&a, &b) > INPUT_TOL {
        return Err(LocalModelError::BadQuaternion(
            "(a, b) is not an orthonormal pair".to_string(),
        ));
    }
    let a_inv = a.conjugate();
    let b_inv = b.conjugate();
    let (av, bv) = (a.components(), b.components());
    let (re, im) = (0..4).fold((0.0, 0.0), |(re, im), t| {
        (re + av[t] * av[t] - bv[t] * bv[t], im + 2.0 * av[t] * bv[t])
    });
    let quadric = f64::hypot(re, im);
    let j = b * a_inv;
    let j_prime = a_inv * b;
    let actions = (j * a).distance(&b).max((a * j_prime).distance(&b));
    let js = a * b_inv;
    let js_prime = b_inv * a;
    let interchange = (js * b)
        .distance(&a)
        .max((b * js_prime).distance(&a))
        .max(js.distance(&-j))
        .max(js_prime.distance(&-j_prime));
    Ok(GrassmannianRecord {
        j: j.components(),
        j_prime: j_prime.components(),
        quadric,
        actions,
        interchange,
    })
}

/// The π₃ monodromy squares to the identity, and (a,b) ↦ (b,-a) has order
/// exactly 4 on a basis pair.
pub fn swap_order_check() -> bool {
    let m = Matrix2::new(
        PI3_MONODROMY[0][0],
        PI3_MONODROMY[0][1],
        PI3_MONODROMY[1][0],
        PI3_MONODROMY[1][1],
    );
    let squared_identity = m * m == Matrix2::identity() && m != Matrix2::identity();
    let rotate = |(x, y): (Quaternion, Quaternion)| (y, -x);
    let start = (Quaternion::one(), Quaternion::i());
    let mut p = start;
    let mut order = 0;
    for n in 1..=4 {
        p = rotate(p);
        if p == start {
            order = n;
            break;
        }
    }
    squared_identity && order == 4
}
