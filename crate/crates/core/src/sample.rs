//! Random valid states for property checks and benchmarks.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use rand_core::Rng;

use crate::chsh::BellSettings;
use crate::qstate::{DensityMatrix4, ObservableDirection, XState};

/// Uniform `f64` in `[0, 1)` from the top 53 bits of one draw.
pub fn uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1 = 1.0 - uniform(rng);
    let u2 = uniform(rng);
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

fn phase<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    PI * (2.0 * uniform(rng) - 1.0)
}

/// Random X state: flat Dirichlet populations, coherences anywhere inside
/// their positivity disks.
pub fn random_x_state<R: Rng + ?Sized>(rng: &mut R) -> XState {
    let w: [f64; 4] = std::array::from_fn(|_| -(1.0 - uniform(rng)).ln());
    let total: f64 = w.iter().sum();
    let [p11, p22, p33, _] = w.map(|v| v / total);
    let p44 = 1.0 - p11 - p22 - p33;
    let r14 = (p11 * p44).max(0.0).sqrt() * uniform(rng);
    let r23 = (p22 * p33).max(0.0).sqrt() * uniform(rng);
    XState::new(
        p11,
        p22,
        p33,
        p44,
        Complex64::from_polar(r14, phase(rng)),
        Complex64::from_polar(r23, phase(rng)),
    )
    .expect("sampled inside the X-state constraints")
}

/// Random full-rank density matrix `G G† / Tr(G G†)` with Gaussian `G`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix4 {
    let g = Matrix4::from_fn(|_, _| Complex64::new(gaussian(rng), gaussian(rng)));
    let m = g * g.adjoint();
    let tr = m.trace();
    let mut m = m / tr;
    // exact Hermiticity
    for i in 0..4 {
        m[(i, i)].im = 0.0;
        for j in 0..i {
            m[(i, j)] = m[(j, i)].conj();
        }
    }
    DensityMatrix4::from_matrix(m).expect("Gram matrices are positive")
}

fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> Matrix2<Complex64> {
    let g = Matrix2::from_fn(|_, _| Complex64::new(gaussian(rng), gaussian(rng)));
    let m = g * g.adjoint();
    let tr = m.trace();
    m / tr
}

/// Random product state `ρ_A ⊗ ρ_B`.
pub fn random_product<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix4 {
    let a = random_qubit(rng);
    let b = random_qubit(rng);
    let m = crate::qstate::kron2(&a, &b);
    let mut m = m / m.trace();
    for i in 0..4 {
        m[(i, i)].im = 0.0;
        for j in 0..i {
            m[(i, j)] = m[(j, i)].conj();
        }
    }
    DensityMatrix4::from_matrix(m).expect("product of qubit states")
}

pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> ObservableDirection {
    ObservableDirection::new((2.0 * uniform(rng) - 1.0).acos(), phase(rng))
}

pub fn random_settings<R: Rng + ?Sized>(rng: &mut R) -> BellSettings {
    BellSettings {
        a: random_direction(rng),
        a_prime: random_direction(rng),
        b: random_direction(rng),
        b_prime: random_direction(rng),
    }
}
