//! Closed-form optimal measurement angles for X states.
//!
//! Two angle sets exist. The first is optimal when `u2 ≥ u3` and puts the
//! qubit-1 directions along x-z; the second is optimal when `u3 ≥ u2` and keeps
//! every direction on the equator. On the surface `u2 = u3` both reach the
//! same Bell value while the directions themselves differ by a finite amount,
//! so a state drifting across that surface forces a discontinuous change of
//! the measurement settings.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::chsh::{x_state_eigenvalues, BellEigenvalues, BellSettings, Region};
use crate::qstate::{normalize_angles, ObservableDirection, XState};

/// Eight measurement angles in the order `(1, 1′, 2, 2′)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSettings {
    pub theta: [f64; 4],
    pub phi: [f64; 4],
    pub set_id: Region,
}

impl AngleSettings {
    /// Normalizes each `(θ, φ)` pair to `θ ∈ [0, π]`, `φ ∈ (−π, π]`.
    pub fn new(theta: [f64; 4], phi: [f64; 4], set_id: Region) -> Self {
        let mut t = [0.0; 4];
        let mut p = [0.0; 4];
        for i in 0..4 {
            (t[i], p[i]) = normalize_angles(theta[i], phi[i]);
        }
        AngleSettings { theta: t, phi: p, set_id }
    }

    pub fn direction(&self, i: usize) -> ObservableDirection {
        ObservableDirection::new(self.theta[i], self.phi[i])
    }

    pub fn to_bell_settings(&self) -> BellSettings {
        BellSettings {
            a: self.direction(0),
            a_prime: self.direction(1),
            b: self.direction(2),
            b_prime: self.direction(3),
        }
    }

    pub fn from_bell_settings(s: &BellSettings, set_id: Region) -> Self {
        let d = s.directions();
        AngleSettings::new(
            [d[0].theta(), d[1].theta(), d[2].theta(), d[3].theta()],
            [d[0].phi(), d[1].phi(), d[2].phi(), d[3].phi()],
            set_id,
        )
    }
}

fn sign(v: f64) -> f64 {
    if v >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

fn arg(z: Complex64) -> f64 {
    if z.norm() == 0.0 {
        0.0
    } else {
        z.arg()
    }
}

/// `arctan √(u / u1)` with the `u1 = 0` limits.
fn ratio_angle(u: f64, u1: f64) -> f64 {
    if u1 > 0.0 {
        (u.max(0.0) / u1).sqrt().atan()
    } else if u > 0.0 {
        FRAC_PI_2
    } else {
        0.0
    }
}

/// Angles optimal in the region `u2 ≥ u3`.
pub fn obp_set1(x: &XState) -> AngleSettings {
    let u = x_state_eigenvalues(x);
    let theta2 = FRAC_PI_2 - sign(x.population_gap()) * ratio_angle(u.u2, u.u1);
    let (a14, a23) = (arg(x.rho14()), arg(x.rho23()));
    let phi1 = -(a14 + a23) / 2.0;
    let phi2 = (a23 - a14) / 2.0;
    AngleSettings::new(
        [FRAC_PI_2, 0.0, theta2, PI - theta2],
        [phi1, 0.0, phi2, phi2],
        Region::Set1,
    )
}

/// Angles optimal in the region `u3 ≥ u2`; all directions are equatorial.
pub fn obp_set2(x: &XState) -> AngleSettings {
    let u = x_state_eigenvalues(x);
    let (a14, a23) = (arg(x.rho14()), arg(x.rho23()));
    let phi1 = -(a14 + a23) / 2.0;
    let phi1p = phi1 + sign(x.rho23().norm() - x.rho14().norm()) * FRAC_PI_2;
    let half = (a23 - a14) / 2.0;
    let open = ratio_angle(u.u3, u.u1);
    AngleSettings::new(
        [FRAC_PI_2; 4],
        [phi1, phi1p, half + open, half - open],
        Region::Set2,
    )
}

/// The active angle set and the eigenvalues that selected it.
///
/// On a tie (`u2 = u3`) the first set is returned; `obp_set2` gives the
/// equally optimal alternative.
pub fn optimal_settings(x: &XState) -> (AngleSettings, BellEigenvalues) {
    let u = x_state_eigenvalues(x);
    let s = match u.region {
        Region::Set1 => obp_set1(x),
        Region::Set2 => obp_set2(x),
    };
    (s, u)
}

/// Largest angle (radians) between corresponding measurement directions.
pub fn settings_distance(a: &AngleSettings, b: &AngleSettings) -> f64 {
    (0..4)
        .map(|i| {
            let (u, v) = (a.direction(i).unit_vector(), b.direction(i).unit_vector());
            u.cross(&v).norm().atan2(u.dot(&v))
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chsh::{bell_function, bmax_x};
    use crate::qstate::x_to_dense;
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn werner(r: f64) -> XState {
        let d = (1.0 - r) / 4.0;
        XState::new(d, d + r / 2.0, d + r / 2.0, d, c(0.0), c(r / 2.0)).unwrap()
    }

    fn value(x: &XState, s: &AngleSettings) -> f64 {
        bell_function(&x_to_dense(x), &s.to_bell_settings())
    }

    #[test]
    fn set1_on_bell_state() {
        let x = werner(1.0);
        let s = obp_set1(&x);
        assert_eq!(s.theta[0], FRAC_PI_2);
        assert_eq!(s.theta[1], 0.0);
        assert!((s.theta[2] - 3.0 * FRAC_PI_4).abs() < 1e-15);
        assert!((s.theta[3] - FRAC_PI_4).abs() < 1e-15);
        assert!(s.phi.iter().all(|p| p.abs() < 1e-15));
        assert!((value(&x, &s) - 2.0 * SQRT_2).abs() < 1e-12);

        let w = werner(0.9);
        let sw = obp_set1(&w);
        assert!(settings_distance(&s, &sw) < 1e-12);
        assert!((value(&w, &sw) - 2.0 * SQRT_2 * 0.9).abs() < 1e-12);
    }

    #[test]
    fn set1_with_phases_is_suboptimal_in_region_two() {
        let x = XState::new(0.3, 0.2, 0.2, 0.3, Complex64::new(0.0, 0.25), c(0.1)).unwrap();
        let s = obp_set1(&x);
        assert!((s.phi[0] + FRAC_PI_4).abs() < 1e-15);
        assert!((s.phi[2] + FRAC_PI_4).abs() < 1e-15);
        assert!((s.phi[3] + FRAC_PI_4).abs() < 1e-15);
        assert!((s.theta[2] - (FRAC_PI_2 - (0.04f64 / 0.49).sqrt().atan())).abs() < 1e-15);
        assert!((value(&x, &s) - 2.0 * 0.53f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn set2_examples() {
        let x = werner(1.0);
        let s = obp_set2(&x);
        assert!(s.theta.iter().all(|t| *t == FRAC_PI_2));
        assert!(s.phi[0].abs() < 1e-15);
        assert!((s.phi[1] - FRAC_PI_2).abs() < 1e-15);
        assert!((s.phi[2] - FRAC_PI_4).abs() < 1e-15);
        assert!((s.phi[3] + FRAC_PI_4).abs() < 1e-15);
        assert!((value(&x, &s) - 2.0 * SQRT_2).abs() < 1e-12);

        let x = XState::new(0.3, 0.2, 0.2, 0.3, c(0.25), c(0.1)).unwrap();
        let s = obp_set2(&x);
        assert!((s.phi[2] - (3.0f64 / 7.0).atan()).abs() < 1e-15);
        assert!((value(&x, &s) - 2.0 * 0.58f64.sqrt()).abs() < 1e-12);

        // ρ23 = 0 ⇒ φ1′ = φ1 − π/2
        let x = XState::new(0.4, 0.1, 0.1, 0.4, c(0.3), c(0.0)).unwrap();
        let s = obp_set2(&x);
        assert!((s.phi[1] - (s.phi[0] - FRAC_PI_2)).abs() < 1e-15);
    }

    #[test]
    fn optimal_settings_examples() {
        let (s, u) = optimal_settings(&werner(0.8));
        assert!(u.tie);
        assert_eq!(s.set_id, Region::Set1);
        let x = werner(0.8);
        let target = 2.0 * SQRT_2 * 0.8;
        assert!((value(&x, &obp_set1(&x)) - target).abs() < 1e-12);
        assert!((value(&x, &obp_set2(&x)) - target).abs() < 1e-12);
        assert!((bmax_x(&x) - target).abs() < 1e-12);
    }

    #[test]
    fn degenerate_coherence_free_state() {
        // u1 = 0; B_max = 2√u2 reached with θ2 ∈ {0, π}
        for gap_sign in [1.0, -1.0] {
            let (p, q) = if gap_sign > 0.0 { (0.6, 0.1) } else { (0.1, 0.4) };
            let x = XState::new(p, q, q, 1.0 - p - 2.0 * q, c(0.0), c(0.0)).unwrap();
            let (s, u) = optimal_settings(&x);
            assert_eq!(u.u1, 0.0);
            assert!((value(&x, &s) - bmax_x(&x)).abs() < 1e-12);
        }
        let (s, _) = optimal_settings(&XState::new(0.25, 0.25, 0.25, 0.25, c(0.0), c(0.0)).unwrap());
        assert!(s.theta.iter().chain(s.phi.iter()).all(|v| v.is_finite()));
    }

    #[test]
    fn distance_examples() {
        let s = obp_set1(&werner(1.0));
        assert_eq!(settings_distance(&s, &s), 0.0);
        let mut t = s;
        t.theta[1] = PI;
        assert!((settings_distance(&s, &t) - PI).abs() < 1e-15);
        assert!((settings_distance(&t, &s) - PI).abs() < 1e-15);
    }
}
