#![allow(dead_code)]

use std::f64::consts::FRAC_1_SQRT_2;

use bellopt::{DensityMatrix4, XState};
use num_complex::Complex64;
use rand_core::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

pub fn rng(seed: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// (|01> + |10>)/√2
pub fn bell() -> DensityMatrix4 {
    DensityMatrix4::pure([c(0.0), c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), c(0.0)]).unwrap()
}

pub fn werner_x(r: f64) -> XState {
    let m = (1.0 - r) / 4.0;
    XState::new(m, m + r / 2.0, m + r / 2.0, m, c(0.0), c(r / 2.0)).unwrap()
}

/// Plain bisection for a sign change of `f` on `[lo, hi]`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let f_lo = f(lo);
    assert!(f_lo * f(hi) <= 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All sign changes of `f` on `(0, 1]`, located on a fine grid and bisected.
pub fn sign_changes(f: impl Fn(f64) -> f64, n: usize) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..n {
        let (a, b) = (i as f64 / n as f64 + 1e-15, (i + 1) as f64 / n as f64);
        let (fa, fb) = (f(a), f(b));
        if fb == 0.0 {
            out.push(b);
        } else if fa * fb < 0.0 {
            out.push(bisect(&f, a, b));
        }
    }
    out
}

pub fn max_diff(a: &DensityMatrix4, b: &DensityMatrix4) -> f64 {
    (a.matrix() - b.matrix()).map(|z| z.norm()).max()
}
