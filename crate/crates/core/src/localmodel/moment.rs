use nalgebra::SVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::FD_STEP;

type V4 = SVector<f64, 4>;

fn h1(a: &V4, b: &V4) -> f64 {
    b.dot(a)
}

fn h2(a: &V4, b: &V4) -> f64 {
    0.5 * (b.norm_squared() - a.norm_squared())
}

fn h(a: &V4, b: &V4) -> Complex64 {
    (0..4).map(|j| Complex64::new(a[j], b[j]).powi(2)).sum()
}

/// ι_X ω for ω = Σ daⱼ∧dbⱼ, as a covector in (da, db) components.
fn contract(xa: &V4, xb: &V4) -> (V4, V4) {
    (-xb, *xa)
}

fn fd_gradient(f: impl Fn(&V4, &V4) -> f64, a: &V4, b: &V4) -> (V4, V4) {
    let mut ga = V4::zeros();
    let mut gb = V4::zeros();
    for j in 0..4 {
        let mut e = V4::zeros();
        e[j] = FD_STEP;
        ga[j] = (f(&(a + e), b) - f(&(a - e), b)) / (2.0 * FD_STEP);
        gb[j] = (f(a, &(b + e)) - f(a, &(b - e))) / (2.0 * FD_STEP);
    }
    (ga, gb)
}

fn max_diff(x: &(V4, V4), y: &(V4, V4)) -> f64 {
    (x.0 - y.0).amax().max((x.1 - y.1).amax())
}

/// A point z = a + ib with Σzⱼ² = ε: z = √(ε + γ²)·e₁ + iγ·e₂ for an
/// orthonormal pair e₁, e₂ and γ ≥ 0.
pub fn point_on_level_set<R: Rng>(epsilon: Complex64, gamma: f64, rng: &mut R) -> (V4, V4) {
    let gauss = |rng: &mut R| V4::from_fn(|_, _| rng.sample(StandardNormal));
    let e1 = gauss(rng).normalize();
    let mut e2 = gauss(rng);
    e2 -= e1 * e1.dot(&e2);
    let e2 = e2.normalize();
    let w = (epsilon + gamma * gamma).sqrt();
    (e1 * w.re, e1 * w.im + e2 * gamma)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentRecord {
    pub samples: usize,
    /// |Σ(aⱼ+ibⱼ)² - (|a|²-|b|² + 2i⟨b,a⟩)| and |h - 2i(h₁+ih₂)|.
    pub max_identity: f64,
    /// ι_X ω against the analytic dh for X = (a,-b) and (b,a).
    pub max_hamiltonian: f64,
    pub max_gradient_fd: f64,
    /// Decomposition defects on sampled points of {h = ε}.
    pub max_level_set: f64,
}

pub fn moment_checks(samples: usize, seed: u64) -> MomentRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rec = MomentRecord {
        samples,
        max_identity: 0.0,
        max_hamiltonian: 0.0,
        max_gradient_fd: 0.0,
        max_level_set: 0.0,
    };
    for _ in 0..samples {
        // Unit (a, b): the maps are homogeneous, and this keeps the
        // difference quotients' rounding error well below FD_TOL.
        let a = V4::from_fn(|_, _| rng.sample(StandardNormal));
        let b = V4::from_fn(|_, _| rng.sample(StandardNormal));
        let r = (a.norm_squared() + b.norm_squared()).sqrt();
        let (a, b) = (a / r, b / r);
        let hv = h(&a, &b);
        let expected = Complex64::new(a.norm_squared() - b.norm_squared(), 2.0 * b.dot(&a));
        let via_h = Complex64::new(0.0, 2.0) * Complex64::new(h1(&a, &b), h2(&a, &b));
        let scale = 1.0 + a.norm_squared() + b.norm_squared();
        rec.max_identity = rec
            .max_identity
            .max((hv - expected).norm() / scale)
            .max((hv - via_h).norm() / scale);

        let dh1 = (b, a);
        let dh2 = (-a, b);
        let r1 = max_diff(&contract(&a, &(-b)), &dh1);
        let r2 = max_diff(&contract(&b, &a), &dh2);
        rec.max_hamiltonian = rec.max_hamiltonian.max(r1).max(r2);
        let f1 = max_diff(&fd_gradient(h1, &a, &b), &dh1);
        let f2 = max_diff(&fd_gradient(h2, &a, &b), &dh2);
        rec.max_gradient_fd = rec.max_gradient_fd.max(f1).max(f2);

        let eps = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        let gamma: f64 = rng.random_range(0.0..2.0);
        let (la, lb) = point_on_level_set(eps, gamma, &mut rng);
        let scale = 1.0 + la.norm_squared() + lb.norm_squared();
        let re = (la.norm_squared() - lb.norm_squared() - eps.re).abs();
        let im = (2.0 * lb.dot(&la) - eps.im).abs();
        let hz = (h(&la, &lb) - eps).norm();
        rec.max_level_set = rec.max_level_set.max(re.max(im).max(hz) / scale);
    }
    rec
}
