//! Numerical checks of the local models around a node: the identification of
//! the punctured quadric {Σzⱼ² = 0} with the complement of the zero section
//! in T*S^{n-1}, its collar, the moment maps, and the quaternionic
//! description of the small resolutions.

mod moment;
mod quaternion;

use nalgebra::{DVector, SVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use moment::{moment_checks, point_on_level_set, MomentRecord};
pub use quaternion::{
    grassmannian_maps, quaternion_maps, swap_order_check, GrassmannianRecord, Quaternion,
    QuaternionRecord, PI3_MONODROMY,
};

pub const ALGEBRAIC_TOL: f64 = 1e-12;
pub const ANALYTIC_TOL: f64 = 1e-9;
pub const FD_TOL: f64 = 1e-5;
pub const FD_STEP: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LocalModelError {
    #[error("point has zero real part; on the quadric that forces z = 0")]
    ZeroRealPart,
    #[error("zero section has no preimage")]
    ZeroSection,
    #[error("point is not on the quadric (residual {0:e})")]
    NotOnQuadric(f64),
    #[error("origin is not a point of the punctured quadric")]
    Origin,
    #[error("{0}")]
    BadQuaternion(String),
}

pub type Vector<const N: usize> = SVector<f64, N>;

/// Point of W = {Σzⱼ² = 0} ∖ {0} together with its residual |Σzⱼ²|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadricPoint<const N: usize> {
    z: [Complex64; N],
    residual: f64,
}

fn quadric_value<const N: usize>(z: &[Complex64; N]) -> Complex64 {
    z.iter().map(|c| c * c).sum()
}

fn norm_sq<const N: usize>(z: &[Complex64; N]) -> f64 {
    z.iter().map(Complex64::norm_sqr).sum()
}

impl<const N: usize> QuadricPoint<N> {
    /// Newton-projects `z` onto the quadric along the conjugate gradient.
    pub fn new(z: [Complex64; N]) -> Result<Self, LocalModelError> {
        let mut z = z;
        if norm_sq(&z) == 0.0 {
            return Err(LocalModelError::Origin);
        }
        for _ in 0..50 {
            let f = quadric_value(&z);
            if f.norm() <= ALGEBRAIC_TOL * 1e-2 * norm_sq(&z).max(1.0) {
                break;
            }
            let scale = f / (2.0 * norm_sq(&z));
            for c in z.iter_mut() {
                *c -= scale * c.conj();
            }
        }
        let p = Self::exact(z);
        if p.residual > ALGEBRAIC_TOL {
            return Err(LocalModelError::NotOnQuadric(p.residual));
        }
        if norm_sq(&z) == 0.0 {
            return Err(LocalModelError::Origin);
        }
        Ok(p)
    }

    /// Wraps `z` without projecting.
    pub fn exact(z: [Complex64; N]) -> Self {
        Self {
            residual: quadric_value(&z).norm(),
            z,
        }
    }

    pub fn z(&self) -> &[Complex64; N] {
        &self.z
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn real(&self) -> Vector<N> {
        Vector::from_fn(|j, _| self.z[j].re)
    }

    pub fn imag(&self) -> Vector<N> {
        Vector::from_fn(|j, _| self.z[j].im)
    }
}

/// (u, v) ∈ T*S^{N-1} with |u| = 1 and ⟨u,v⟩ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CotangentPoint<const N: usize> {
    pub u: Vector<N>,
    pub v: Vector<N>,
}

impl<const N: usize> CotangentPoint<N> {
    pub fn defect(&self) -> f64 {
        (self.u.norm() - 1.0).abs().max(self.u.dot(&self.v).abs())
    }
}

fn split<const N: usize>(z: &[Complex64; N]) -> (Vector<N>, Vector<N>) {
    (
        Vector::from_fn(|j, _| z[j].re),
        Vector::from_fn(|j, _| z[j].im),
    )
}

fn phi_raw<const N: usize>(z: &[Complex64; N]) -> Option<CotangentPoint<N>> {
    let (x, y) = split(z);
    let r = x.norm();
    (r > 0.0).then(|| CotangentPoint {
        u: x / r,
        v: -r * y,
    })
}

/// z ↦ (x/|x|, -|x|·y) for z = x + iy.
pub fn phi<const N: usize>(p: &QuadricPoint<N>) -> Result<CotangentPoint<N>, LocalModelError> {
    phi_raw(&p.z).ok_or(LocalModelError::ZeroRealPart)
}

/// (u, v) ↦ √|v|·u - i·v/√|v|.
pub fn phi_inverse<const N: usize>(
    p: &CotangentPoint<N>,
) -> Result<QuadricPoint<N>, LocalModelError> {
    let n = p.v.norm();
    if n == 0.0 {
        return Err(LocalModelError::ZeroSection);
    }
    let s = n.sqrt();
    Ok(QuadricPoint::exact(std::array::from_fn(|j| {
        Complex64::new(s * p.u[j], -p.v[j] / s)
    })))
}

/// Real tangent vector w = a + ib.
type Tangent<const N: usize> = (Vector<N>, Vector<N>);

/// Orthonormal real basis of T_zW = {w : Σ zⱼwⱼ = 0}, of dimension 2N - 2.
pub fn tangent_basis<const N: usize>(p: &QuadricPoint<N>) -> Vec<Tangent<N>> {
    let (x, y) = split(&p.z);
    // Re and Im of Σ zⱼwⱼ are pairings with (x,-y) and (y,x).
    let pack = |a: &Vector<N>, b: &Vector<N>| {
        DVector::from_iterator(2 * N, a.iter().chain(b.iter()).copied())
    };
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let normals = [pack(&x, &(-y)), pack(&y, &x)];
    let mut ortho: Vec<DVector<f64>> = Vec::new();
    for n in normals {
        let mut n = n;
        for q in &ortho {
            n -= q * q.dot(&n);
        }
        ortho.push(n.normalize());
    }
    for k in 0..2 * N {
        let mut e = DVector::zeros(2 * N);
        e[k] = 1.0;
        for q in ortho.iter().chain(basis.iter()) {
            e -= q * q.dot(&e);
        }
        if e.norm() > 1e-6 {
            basis.push(e.normalize());
        }
        if basis.len() == 2 * N - 2 {
            break;
        }
    }
    basis
        .into_iter()
        .map(|w| {
            (
                Vector::from_fn(|j, _| w[j]),
                Vector::from_fn(|j, _| w[N + j]),
            )
        })
        .collect()
}

/// Analytic derivative of phi: du = (dx - u⟨u,dx⟩)/|x|,
/// dv = -⟨u,dx⟩·y - |x|·dy.
pub fn dphi<const N: usize>(p: &QuadricPoint<N>, w: &Tangent<N>) -> Tangent<N> {
    let (x, y) = split(&p.z);
    let r = x.norm();
    let u = x / r;
    let (dx, dy) = w;
    let ud = u.dot(dx);
    ((dx - u * ud) / r, -y * ud - dy * r)
}

fn dphi_fd<const N: usize>(p: &QuadricPoint<N>, w: &Tangent<N>) -> Option<Tangent<N>> {
    let shift = |s: f64| -> [Complex64; N] {
        std::array::from_fn(|j| p.z[j] + Complex64::new(s * w.0[j], s * w.1[j]))
    };
    let plus = phi_raw(&shift(FD_STEP))?;
    let minus = phi_raw(&shift(-FD_STEP))?;
    Some((
        (plus.u - minus.u) / (2.0 * FD_STEP),
        (plus.v - minus.v) / (2.0 * FD_STEP),
    ))
}

/// Σ dxⱼ∧dyⱼ, which equals (i/2)Σ dzⱼ∧dz̄ⱼ.
fn omega_std<const N: usize>(w1: &Tangent<N>, w2: &Tangent<N>) -> f64 {
    w1.0.dot(&w2.1) - w1.1.dot(&w2.0)
}

/// Σ dvⱼ∧duⱼ.
fn omega_cotangent<const N: usize>(t1: &Tangent<N>, t2: &Tangent<N>) -> f64 {
    t1.1.dot(&t2.0) - t2.1.dot(&t1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointResiduals {
    /// max |φ*(Σdv∧du) - Σdx∧dy| over tangent basis pairs, analytic Jacobian.
    pub pullback: f64,
    /// max entry difference between analytic and central-difference Jacobians.
    pub jacobian_fd: f64,
    /// |phi_inverse(phi(z)) - z|.
    pub round_trip: f64,
    /// Cotangent constraints | |u|-1 | and |⟨u,v⟩|.
    pub cotangent: f64,
    /// | |v| - |x|² |, the norm compatibility.
    pub norm: f64,
}

pub fn point_residuals<const N: usize>(
    p: &QuadricPoint<N>,
) -> Result<PointResiduals, LocalModelError> {
    let image = phi(p)?;
    let basis = tangent_basis(p);
    let jac: Vec<Tangent<N>> = basis.iter().map(|w| dphi(p, w)).collect();
    let mut pullback = 0.0f64;
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let lhs = omega_cotangent(&jac[i], &jac[j]);
            let rhs = omega_std(&basis[i], &basis[j]);
            pullback = pullback.max((lhs - rhs).abs());
        }
    }
    let mut jacobian_fd = 0.0f64;
    for (w, j) in basis.iter().zip(&jac) {
        if let Some(fd) = dphi_fd(p, w) {
            jacobian_fd = jacobian_fd
                .max((fd.0 - j.0).amax())
                .max((fd.1 - j.1).amax());
        } else {
            jacobian_fd = f64::INFINITY;
        }
    }
    let round_trip = match phi_inverse(&image) {
        Ok(back) => back
            .z
            .iter()
            .zip(&p.z)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max),
        Err(_) => 0.0,
    };
    let x2 = p.real().norm_squared();
    Ok(PointResiduals {
        pullback,
        jacobian_fd,
        round_trip,
        cotangent: image.defect(),
        norm: (image.v.norm() - x2).abs(),
    })
}

/// z = s·(x + iy) with x uniform on the unit sphere, y a random unit vector
/// orthogonal to x, and s ∈ [0.5, 2). Exactly on the quadric up to rounding.
pub fn random_quadric_point<const N: usize, R: Rng>(rng: &mut R) -> QuadricPoint<N> {
    let gauss = |rng: &mut R| Vector::<N>::from_fn(|_, _| rng.sample(StandardNormal));
    let x = gauss(rng).normalize();
    let mut y = gauss(rng);
    y -= x * x.dot(&y);
    let y = y.normalize();
    let s: f64 = rng.random_range(0.5..2.0);
    QuadricPoint::exact(std::array::from_fn(|j| Complex64::new(s * x[j], s * y[j])))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplectoRecord {
    pub dimension: usize,
    pub samples: usize,
    pub max_pullback: f64,
    pub max_jacobian_fd: f64,
    pub max_round_trip: f64,
    pub max_cotangent: f64,
    pub max_norm: f64,
    pub max_quadric: f64,
}

impl SymplectoRecord {
    pub fn passed(&self) -> bool {
        self.max_pullback < ANALYTIC_TOL
            && self.max_jacobian_fd < FD_TOL
            && self.max_round_trip < ANALYTIC_TOL
            && self.max_cotangent < ALGEBRAIC_TOL
            && self.max_norm < ALGEBRAIC_TOL
            && self.max_quadric < ALGEBRAIC_TOL
    }
}

pub fn verify_symplectomorphism_dim<const N: usize>(samples: usize, seed: u64) -> SymplectoRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rec = SymplectoRecord {
        dimension: N,
        samples,
        max_pullback: 0.0,
        max_jacobian_fd: 0.0,
        max_round_trip: 0.0,
        max_cotangent: 0.0,
        max_norm: 0.0,
        max_quadric: 0.0,
    };
    for _ in 0..samples {
        let p: QuadricPoint<N> = random_quadric_point(&mut rng);
        let r = point_residuals(&p).expect("sampled points have x != 0");
        rec.max_pullback = rec.max_pullback.max(r.pullback);
        rec.max_jacobian_fd = rec.max_jacobian_fd.max(r.jacobian_fd);
        rec.max_round_trip = rec.max_round_trip.max(r.round_trip);
        rec.max_cotangent = rec.max_cotangent.max(r.cotangent);
        rec.max_norm = rec.max_norm.max(r.norm);
        rec.max_quadric = rec.max_quadric.max(p.residual);
    }
    rec
}

pub fn verify_symplectomorphism(samples: usize, seed: u64) -> SymplectoRecord {
    verify_symplectomorphism_dim::<4>(samples, seed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalModelDim2Record {
    pub u: [f64; 3],
    pub v: [f64; 3],
    pub residuals: PointResiduals,
}

/// The N = 3 case, {Σ³zⱼ² = 0} ∖ {0} ≅ T*S² minus the zero section.
pub fn local_model_dim2(z: [Complex64; 3]) -> Result<LocalModelDim2Record, LocalModelError> {
    let p = QuadricPoint::new(z)?;
    let image = phi(&p)?;
    Ok(LocalModelDim2Record {
        u: image.u.into(),
        v: image.v.into(),
        residuals: point_residuals(&p)?,
    })
}

/// I(u₁,u₂,u₃,u₄) = (-u₂,u₁,-u₄,u₃).
fn complex_structure(u: &Vector<4>) -> Vector<4> {
    Vector::<4>::new(-u[1], u[0], -u[3], u[2])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollarRecord {
    pub t: f64,
    pub u: [f64; 4],
    pub v: [f64; 4],
    /// v = λ·Iu on the surface z₁ = iz₂, z₃ = iz₄.
    pub lambda: f64,
    pub sum_re_squared: f64,
    pub residual: f64,
    /// Same for the point (-it, t, 0, 0) on z₁ = -iz₂, z₃ = -iz₄.
    pub opposite_lambda: f64,
    pub opposite_residual: f64,
}

impl CollarRecord {
    pub fn passed(&self) -> bool {
        self.residual < ALGEBRAIC_TOL
            && self.opposite_residual < ALGEBRAIC_TOL
            && (self.lambda - self.sum_re_squared).abs()
                < ALGEBRAIC_TOL * (self.t * self.t).max(1.0)
            && self.lambda >= 0.0
            && self.opposite_lambda <= 0.0
    }
}

fn lambda_fit(c: &CotangentPoint<4>) -> (f64, f64) {
    let iu = complex_structure(&c.u);
    let lambda = c.v.dot(&iu) / iu.norm_squared();
    (lambda, (c.v - iu * lambda).amax())
}

pub fn verify_collar(t: f64) -> Result<CollarRecord, LocalModelError> {
    let i = Complex64::i();
    let zero = Complex64::new(0.0, 0.0);
    let tc = Complex64::new(t, 0.0);
    let p = QuadricPoint::exact([i * tc, tc, zero, zero]);
    let c = phi(&p)?;
    let (lambda, residual) = lambda_fit(&c);
    let q = QuadricPoint::exact([-i * tc, tc, zero, zero]);
    let (opposite_lambda, opposite_residual) = lambda_fit(&phi(&q)?);
    Ok(CollarRecord {
        t,
        u: c.u.into(),
        v: c.v.into(),
        lambda,
        sum_re_squared: p.real().norm_squared(),
        residual,
        opposite_lambda,
        opposite_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualCheck {
    pub name: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl ResidualCheck {
    fn new(name: &str, samples: usize, max_residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            samples,
            max_residual,
            tolerance,
            passed: max_residual < tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<ResidualCheck>,
    pub passed: bool,
}

/// Runs every local-model check with `samples` seeded samples each.
pub fn verify_local_models(samples: usize, seed: u64) -> ResidualReport {
    let mut checks = Vec::new();
    let s4 = verify_symplectomorphism_dim::<4>(samples, seed);
    checks.push(ResidualCheck::new(
        "symplecto.pullback",
        samples,
        s4.max_pullback,
        ANALYTIC_TOL,
    ));
    checks.push(ResidualCheck::new(
        "symplecto.jacobian_fd",
        samples,
        s4.max_jacobian_fd,
        FD_TOL,
    ));
    checks.push(ResidualCheck::new(
        "symplecto.round_trip",
        samples,
        s4.max_round_trip,
        ANALYTIC_TOL,
    ));
    checks.push(ResidualCheck::new(
        "symplecto.cotangent",
        samples,
        s4.max_cotangent.max(s4.max_norm),
        ALGEBRAIC_TOL,
    ));
    let s3 = verify_symplectomorphism_dim::<3>(samples, seed.wrapping_add(1));
    checks.push(ResidualCheck::new(
        "dim2.pullback",
        samples,
        s3.max_pullback,
        ANALYTIC_TOL,
    ));
    checks.push(ResidualCheck::new(
        "dim2.jacobian_fd",
        samples,
        s3.max_jacobian_fd,
        FD_TOL,
    ));
    checks.push(ResidualCheck::new(
        "dim2.round_trip",
        samples,
        s3.max_round_trip,
        ANALYTIC_TOL,
    ));

    let collar = [0.25, 1.0, -1.0, 3.0]
        .iter()
        .map(|&t| verify_collar(t).expect("t != 0"))
        .collect::<Vec<_>>();
    let collar_max = collar
        .iter()
        .map(|c| {
            let lam = (c.lambda - c.sum_re_squared).abs() / c.t.powi(2).max(1.0);
            let sign = if c.lambda >= 0.0 && c.opposite_lambda <= 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            c.residual.max(c.opposite_residual).max(lam).max(sign)
        })
        .fold(0.0, f64::max);
    checks.push(ResidualCheck::new(
        "collar",
        collar.len(),
        collar_max,
        ALGEBRAIC_TOL,
    ));

    let m = moment_checks(samples, seed.wrapping_add(2));
    checks.push(ResidualCheck::new(
        "moment.identity",
        samples,
        m.max_identity,
        ALGEBRAIC_TOL,
    ));
    checks.push(ResidualCheck::new(
        "moment.hamiltonian",
        samples,
        m.max_hamiltonian,
        ANALYTIC_TOL,
    ));
    checks.push(ResidualCheck::new(
        "moment.gradient_fd",
        samples,
        m.max_gradient_fd,
        FD_TOL,
    ));
    checks.push(ResidualCheck::new(
        "moment.level_set",
        samples,
        m.max_level_set,
        ALGEBRAIC_TOL,
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
    let mut q_max = 0.0f64;
    let mut g_max = 0.0f64;
    for _ in 0..samples {
        let a = Quaternion::random_unit(&mut rng);
        let j = Quaternion::random_unit_imaginary(&mut rng);
        q_max = q_max.max(quaternion_maps(a, j).expect("unit inputs").max_residual());
        let (a, b) = Quaternion::random_orthonormal_pair(&mut rng);
        g_max = g_max.max(
            grassmannian_maps(a, b)
                .expect("orthonormal inputs")
                .max_residual(),
        );
    }
    checks.push(ResidualCheck::new(
        "quaternion_maps",
        samples,
        q_max,
        ALGEBRAIC_TOL,
    ));
    checks.push(ResidualCheck::new(
        "grassmannian_maps",
        samples,
        g_max,
        ALGEBRAIC_TOL,
    ));
    let order = if swap_order_check() {
        0.0
    } else {
        f64::INFINITY
    };
    checks.push(ResidualCheck::new(
        "monodromy_order",
        1,
        order,
        ALGEBRAIC_TOL,
    ));

    let passed = checks.iter().all(|c| c.passed);
    ResidualReport {
        seed,
        samples,
        checks,
        passed,
    }
}
