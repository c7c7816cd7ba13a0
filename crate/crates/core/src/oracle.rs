//! Brute-force maximization of the Bell function over all eight angles.
//!
//! The oracle never touches the closed forms: correlations are tabulated by
//! direct 4×4 traces, a coarse grid covers every direction combination, and a
//! compass search polishes the best grid point plus a set of seeded random
//! starts.
//!
//! Random numbers come from SplitMix64 (state initialized to the seed, Vigna's
//! reference recurrence); a uniform `f64` in `[0, 1)` is `(next_u64 >> 11) · 2⁻⁵³`.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::obp::AngleSettings;
use crate::qstate::DensityMatrix4;

/// Largest coarse grid accepted, in grid points (`grid_n⁸`).
pub const GRID_BUDGET: u128 = 1_000_000_000;

/// Compass search stops once the step falls below this.
pub const MIN_STEP: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Points per angle on the coarse grid.
    pub grid_n: usize,
    /// Maximum compass sweeps per start.
    pub refine_iters: usize,
    /// Random starts in addition to the best grid point.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            grid_n: 8,
            refine_iters: 500,
            restarts: 16,
            seed: 0,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_n < 4 {
            return Err(Error::InvalidConfig(format!("grid_n = {} < 4", self.grid_n)));
        }
        if self.restarts < 1 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        let evaluations = (self.grid_n as u128).pow(8);
        if evaluations > GRID_BUDGET {
            return Err(Error::BudgetExceeded { evaluations });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub bmax_est: f64,
    /// `θ` in the order `(1, 1′, 2, 2′)`.
    pub theta: [f64; 4],
    pub phi: [f64; 4],
    /// Grid points covered plus refinement evaluations.
    pub evaluations: u64,
}

/// Angles packed as `[θ1, φ1, θ1′, φ1′, θ2, φ2, θ2′, φ2′]`.
type Point = [f64; 8];

fn spin_operator(theta: f64, phi: f64) -> Matrix2<Complex64> {
    let (st, ct) = theta.sin_cos();
    let off = Complex64::from_polar(st, phi);
    Matrix2::new(Complex64::new(ct, 0.0), off.conj(), off, Complex64::new(-ct, 0.0))
}

/// Bell landscape of a fixed state, evaluated by direct trace.
struct Landscape<'a> {
    rho: &'a DensityMatrix4,
    evaluations: u64,
}

impl Landscape<'_> {
    /// `Re Tr(ρ (A ⊗ B))`.
    fn trace_with(&self, a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> f64 {
        let m = self.rho.matrix();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        acc += m[(2 * i + k, 2 * j + l)] * a[(j, i)] * b[(l, k)];
                    }
                }
            }
        }
        acc.re
    }

    fn value(&mut self, p: &Point) -> f64 {
        self.evaluations += 1;
        let a = spin_operator(p[0], p[1]);
        let ap = spin_operator(p[2], p[3]);
        let b = spin_operator(p[4], p[5]);
        let bp = spin_operator(p[6], p[7]);
        (self.trace_with(&a, &b) + self.trace_with(&a, &bp) + self.trace_with(&ap, &b)
            - self.trace_with(&ap, &bp))
        .abs()
    }

    /// Coordinate-wise compass ascent with halving steps.
    fn ascend(&mut self, start: Point, initial_step: f64, max_sweeps: usize) -> (Point, f64) {
        let mut best = start;
        let mut best_val = self.value(&best);
        let mut step = initial_step;
        for _ in 0..max_sweeps {
            let mut improved = false;
            for c in 0..8 {
                for dir in [1.0, -1.0] {
                    let mut trial = best;
                    trial[c] += dir * step;
                    let v = self.value(&trial);
                    if v > best_val {
                        best = trial;
                        best_val = v;
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                step *= 0.5;
                if step < MIN_STEP {
                    break;
                }
            }
        }
        (best, best_val)
    }
}

struct Uniform(SplitMix64);

impl Uniform {
    fn new(seed: u64) -> Self {
        Uniform(SplitMix64::seed_from_u64(seed))
    }

    fn next(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next()
    }
}

fn grid_directions(n: usize) -> Vec<(f64, f64)> {
    let mut dirs = Vec::with_capacity(n * n);
    for i in 0..n {
        let theta = PI * i as f64 / (n - 1) as f64;
        for k in 0..n {
            let phi = -PI + 2.0 * PI * (k + 1) as f64 / n as f64;
            dirs.push((theta, phi));
        }
    }
    dirs
}

fn unpack(p: &Point) -> ([f64; 4], [f64; 4]) {
    let s = AngleSettings::new(
        [p[0], p[2], p[4], p[6]],
        [p[1], p[3], p[5], p[7]],
        crate::chsh::Region::Set1,
    );
    (s.theta, s.phi)
}

/// Estimates `max B` by grid search plus compass refinement.
pub fn brute_force_bmax(rho: &DensityMatrix4, cfg: &OracleConfig) -> Result<OracleResult> {
    cfg.validate()?;
    let mut land = Landscape { rho, evaluations: 0 };

    let dirs = grid_directions(cfg.grid_n);
    let ops: Vec<_> = dirs.iter().map(|&(t, p)| spin_operator(t, p)).collect();
    let nd = dirs.len();
    let mut table = vec![0.0; nd * nd];
    for (i, a) in ops.iter().enumerate() {
        for (j, b) in ops.iter().enumerate() {
            table[i * nd + j] = land.trace_with(a, b);
        }
    }

    // For fixed (a, a′): B = |s_b + d_b′| with s = E(a,·) + E(a′,·) and
    // d = E(a,·) − E(a′,·), so the inner maximum only needs the extremes.
    let mut grid_best = (f64::NEG_INFINITY, [0usize; 4]);
    for a in 0..nd {
        let ra = &table[a * nd..(a + 1) * nd];
        for ap in 0..nd {
            let rap = &table[ap * nd..(ap + 1) * nd];
            let (mut smax, mut smin, mut dmax, mut dmin) = ((f64::NEG_INFINITY, 0), (f64::INFINITY, 0), (f64::NEG_INFINITY, 0), (f64::INFINITY, 0));
            for j in 0..nd {
                let s = ra[j] + rap[j];
                let d = ra[j] - rap[j];
                if s > smax.0 {
                    smax = (s, j);
                }
                if s < smin.0 {
                    smin = (s, j);
                }
                if d > dmax.0 {
                    dmax = (d, j);
                }
                if d < dmin.0 {
                    dmin = (d, j);
                }
            }
            let (hi, lo) = (smax.0 + dmax.0, -(smin.0 + dmin.0));
            let (v, b, bp) = if hi >= lo { (hi, smax.1, dmax.1) } else { (lo, smin.1, dmin.1) };
            if v > grid_best.0 {
                grid_best = (v, [a, ap, b, bp]);
            }
        }
    }
    let grid_points = (cfg.grid_n as u64).pow(8);

    let idx = grid_best.1;
    let grid_start: Point = [
        dirs[idx[0]].0, dirs[idx[0]].1,
        dirs[idx[1]].0, dirs[idx[1]].1,
        dirs[idx[2]].0, dirs[idx[2]].1,
        dirs[idx[3]].0, dirs[idx[3]].1,
    ];

    let step = PI / cfg.grid_n as f64;
    let mut rng = Uniform::new(cfg.seed);
    let mut starts = vec![grid_start];
    for _ in 0..cfg.restarts {
        let mut p = [0.0; 8];
        for pair in p.chunks_mut(2) {
            pair[0] = rng.range(0.0, PI);
            pair[1] = rng.range(-PI, PI);
        }
        starts.push(p);
    }

    let mut best = (grid_start, land.value(&grid_start));
    for s in starts {
        let (p, v) = land.ascend(s, step, cfg.refine_iters);
        if v > best.1 {
            best = (p, v);
        }
    }
    let (theta, phi) = unpack(&best.0);
    Ok(OracleResult {
        bmax_est: best.1,
        theta,
        phi,
        evaluations: grid_points + land.evaluations,
    })
}

/// Local-optimality margin of `s`: the largest gain over `B(s)` found by
/// compass ascent from random perturbations of radius π/8, then π/64.
///
/// Values at or below 1e−6 certify a local maximum.
pub fn certify_settings(rho: &DensityMatrix4, s: &AngleSettings, cfg: &OracleConfig) -> f64 {
    let mut land = Landscape { rho, evaluations: 0 };
    let base: Point = [
        s.theta[0], s.phi[0], s.theta[1], s.phi[1], s.theta[2], s.phi[2], s.theta[3], s.phi[3],
    ];
    let base_val = land.value(&base);
    let mut rng = Uniform::new(cfg.seed);
    let mut margin = f64::NEG_INFINITY;
    for radius in [PI / 8.0, PI / 64.0] {
        for _ in 0..cfg.restarts.max(1) {
            let mut p = base;
            for v in p.iter_mut() {
                *v += rng.range(-radius, radius);
            }
            let (_, v) = land.ascend(p, radius / 2.0, cfg.refine_iters);
            margin = margin.max(v - base_val);
        }
    }
    margin
}
