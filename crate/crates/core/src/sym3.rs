//! Eigenvalues of real symmetric 3×3 matrices.
//!
//! Closed-form trigonometric solution of the shifted characteristic cubic,
//! checked against the characteristic polynomial; cyclic Jacobi sweeps take
//! over when the residual is too large or two roots are clustered.

use std::f64::consts::PI;

use nalgebra::Matrix3;

use crate::error::{Error, Result};

/// Largest tolerated `|U − Uᵀ|` entry.
pub const SYMMETRY_TOL: f64 = 1e-10;

const RESIDUAL_TOL: f64 = 1e-9;

// acos loses ~sqrt(eps) relative accuracy near a double root
const CLUSTER_TOL: f64 = 1e-3;

/// Eigenvalues of `u`, sorted descending.
pub fn sym3_eigenvalues(u: &Matrix3<f64>) -> Result<[f64; 3]> {
    let asymmetry = (u - u.transpose()).abs().max();
    if !(asymmetry <= SYMMETRY_TOL) {
        return Err(Error::NotSymmetric { asymmetry });
    }
    let u = (u + u.transpose()) * 0.5;
    let scale = u.abs().max();
    if scale == 0.0 {
        return Ok([0.0; 3]);
    }
    let mut ev = trigonometric(&u);
    if max_residual(&u, &ev, scale) > RESIDUAL_TOL || min_gap(&ev) < CLUSTER_TOL * scale {
        ev = jacobi(&u);
    }
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

fn trigonometric(a: &Matrix3<f64>) -> [f64; 3] {
    let off = a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2);
    let q = a.trace() / 3.0;
    let p2 = (a[(0, 0)] - q).powi(2) + (a[(1, 1)] - q).powi(2) + (a[(2, 2)] - q).powi(2) + 2.0 * off;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return [q; 3];
    }
    let b = (a - Matrix3::identity() * q) / p;
    let r = (b.determinant() / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
    let e2 = 3.0 * q - e1 - e3;
    [e1, e2, e3]
}

fn min_gap(ev: &[f64; 3]) -> f64 {
    let d = [(ev[0] - ev[1]).abs(), (ev[0] - ev[2]).abs(), (ev[1] - ev[2]).abs()];
    d.into_iter().fold(f64::INFINITY, f64::min)
}

/// `max |det(U/s − λ/s · I)|` over the candidate eigenvalues.
fn max_residual(u: &Matrix3<f64>, ev: &[f64; 3], scale: f64) -> f64 {
    let un = u / scale;
    ev.iter()
        .map(|&l| (un - Matrix3::identity() * (l / scale)).determinant().abs())
        .fold(0.0, f64::max)
}

fn jacobi(u: &Matrix3<f64>) -> [f64; 3] {
    let mut a = *u;
    for _ in 0..64 {
        let off = a[(0, 1)].abs() + a[(0, 2)].abs() + a[(1, 2)].abs();
        if off <= f64::EPSILON * a.abs().max() {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if a[(p, q)] == 0.0 {
                continue;
            }
            let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            let mut rot = Matrix3::identity();
            rot[(p, p)] = c;
            rot[(q, q)] = c;
            rot[(p, q)] = s;
            rot[(q, p)] = -s;
            a = rot.transpose() * a * rot;
        }
    }
    [a[(0, 0)], a[(1, 1)], a[(2, 2)]]
}
