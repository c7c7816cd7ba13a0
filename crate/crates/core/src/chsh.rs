//! CHSH-Bell function, the Horodecki maximum and the closed-form X-state
//! eigenvalues.

use serde::{Deserialize, Serialize};

use crate::qstate::{kron2, pauli_correlation_matrix, DensityMatrix4, ObservableDirection, XState};
pub use crate::sym3::sym3_eigenvalues;

/// Band inside which `u2` and `u3` count as equal.
pub const TIE_TOL: f64 = 1e-12;

/// Classical bound of the CHSH-Bell function.
pub const CLASSICAL_BOUND: f64 = 2.0;

/// Which closed-form angle set is optimal: `Set1` when `u2 ≥ u3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    Set1,
    Set2,
}

impl Region {
    pub fn number(self) -> u8 {
        match self {
            Region::Set1 => 1,
            Region::Set2 => 2,
        }
    }
}

/// Eigenvalues of `Tᵀ T` for an X state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellEigenvalues {
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
    pub region: Region,
    /// `|u2 − u3| ≤ TIE_TOL`; both angle sets are then optimal.
    pub tie: bool,
}

impl BellEigenvalues {
    /// Classifies raw values; ties go to `Set1`.
    pub fn from_values(u1: f64, u2: f64, u3: f64) -> Self {
        let tie = (u2 - u3).abs() <= TIE_TOL;
        let region = if tie || u2 >= u3 { Region::Set1 } else { Region::Set2 };
        BellEigenvalues { u1, u2, u3, region, tie }
    }

    /// `2√(u1 + u2)`, the value reached by the first angle set.
    pub fn b1(&self) -> f64 {
        2.0 * (self.u1 + self.u2).max(0.0).sqrt()
    }

    /// `2√(u1 + u3)`, the value reached by the second angle set.
    pub fn b2(&self) -> f64 {
        2.0 * (self.u1 + self.u3).max(0.0).sqrt()
    }

    pub fn bmax(&self) -> f64 {
        2.0 * (self.u1 + self.u2.max(self.u3)).max(0.0).sqrt()
    }
}

/// Four measurement directions: `a`, `a′` on qubit 1 and `b`, `b′` on qubit 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellSettings {
    pub a: ObservableDirection,
    pub a_prime: ObservableDirection,
    pub b: ObservableDirection,
    pub b_prime: ObservableDirection,
}

impl BellSettings {
    pub fn directions(&self) -> [ObservableDirection; 4] {
        [self.a, self.a_prime, self.b, self.b_prime]
    }
}

/// `Tr(ρ (a·σ ⊗ b·σ))` by direct trace.
pub fn correlation(rho: &DensityMatrix4, a: &ObservableDirection, b: &ObservableDirection) -> f64 {
    let op = kron2(&a.operator(), &b.operator());
    (rho.matrix() * op).trace().re.clamp(-1.0, 1.0)
}

/// `|E(a,b) + E(a,b′) + E(a′,b) − E(a′,b′)|`.
pub fn bell_function(rho: &DensityMatrix4, s: &BellSettings) -> f64 {
    (correlation(rho, &s.a, &s.b) + correlation(rho, &s.a, &s.b_prime)
        + correlation(rho, &s.a_prime, &s.b)
        - correlation(rho, &s.a_prime, &s.b_prime))
    .abs()
}

/// Closed-form `u1 = 4(|ρ14|+|ρ23|)²`, `u2 = (ρ11+ρ44−ρ22−ρ33)²`,
/// `u3 = 4(|ρ14|−|ρ23|)²`.
pub fn x_state_eigenvalues(x: &XState) -> BellEigenvalues {
    let (c14, c23) = (x.rho14().norm(), x.rho23().norm());
    let u1 = 4.0 * (c14 + c23).powi(2);
    let u2 = x.population_gap().powi(2);
    let u3 = 4.0 * (c14 - c23).powi(2);
    BellEigenvalues::from_values(u1, u2, u3)
}

pub fn bmax_x(x: &XState) -> f64 {
    x_state_eigenvalues(x).bmax()
}

/// Eigenvalues of `Tᵀ T` for an arbitrary state, descending.
pub fn horodecki_eigenvalues(rho: &DensityMatrix4) -> [f64; 3] {
    let u = pauli_correlation_matrix(rho).gram();
    let u = (u + u.transpose()) * 0.5;
    sym3_eigenvalues(&u).expect("symmetrized Gram matrix")
}

/// `2√(u_j + u_k)` over the two largest eigenvalues of `Tᵀ T`.
pub fn horodecki_bmax(rho: &DensityMatrix4) -> f64 {
    let ev = horodecki_eigenvalues(rho);
    2.0 * (ev[0] + ev[1]).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{as_x_state, x_to_dense};
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell_x() -> XState {
        XState::new(0.0, 0.5, 0.5, 0.0, c(0.0), c(0.5)).unwrap()
    }

    fn werner(r: f64) -> XState {
        let d = (1.0 - r) / 4.0;
        XState::new(d, d + r / 2.0, d + r / 2.0, d, c(0.0), c(r / 2.0)).unwrap()
    }

    #[test]
    fn correlation_examples() {
        let z = ObservableDirection::z();
        let any = ObservableDirection::new(1.0, 0.4);
        assert!(correlation(&DensityMatrix4::maximally_mixed(), &any, &z).abs() < 1e-15);
        assert!((correlation(&x_to_dense(&bell_x()), &z, &z) + 1.0).abs() < 1e-15);
        let up = XState::new(1.0, 0.0, 0.0, 0.0, c(0.0), c(0.0)).unwrap();
        assert!((correlation(&x_to_dense(&up), &z, &z) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bell_function_examples() {
        let z = ObservableDirection::z();
        let all_z = BellSettings { a: z, a_prime: z, b: z, b_prime: z };
        let up = XState::new(1.0, 0.0, 0.0, 0.0, c(0.0), c(0.0)).unwrap();
        assert!((bell_function(&x_to_dense(&up), &all_z) - 2.0).abs() < 1e-15);
        assert!(bell_function(&DensityMatrix4::maximally_mixed(), &all_z) < 1e-15);

        let eq = |phi: f64| ObservableDirection::new(PI / 2.0, phi);
        let chsh = BellSettings { a: eq(0.0), a_prime: eq(PI / 2.0), b: eq(PI / 4.0), b_prime: eq(-PI / 4.0) };
        let b = bell_function(&x_to_dense(&bell_x()), &chsh);
        assert!((b - 2.0 * SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn eigenvalue_examples() {
        let u = x_state_eigenvalues(&bell_x());
        assert!((u.u1 - 1.0).abs() < 1e-15 && (u.u2 - 1.0).abs() < 1e-15 && (u.u3 - 1.0).abs() < 1e-15);
        assert!(u.tie && u.region == Region::Set1);

        for r in [0.1, 0.4, 0.9] {
            let u = x_state_eigenvalues(&werner(r));
            for v in [u.u1, u.u2, u.u3] {
                assert!((v - r * r).abs() < 1e-14);
            }
        }

        let x = XState::new(0.3, 0.2, 0.2, 0.3, c(0.25), c(0.1)).unwrap();
        let u = x_state_eigenvalues(&x);
        assert!((u.u1 - 0.49).abs() < 1e-14);
        assert!((u.u2 - 0.04).abs() < 1e-14);
        assert!((u.u3 - 0.09).abs() < 1e-14);
        assert_eq!(u.region, Region::Set2);
        assert!(!u.tie);
    }

    #[test]
    fn bmax_examples() {
        assert!((bmax_x(&bell_x()) - 2.0 * SQRT_2).abs() < 1e-15);
        for r in [0.2, 0.5, FRAC_1_SQRT_2, 1.0] {
            assert!((bmax_x(&werner(r)) - 2.0 * SQRT_2 * r).abs() < 1e-12);
        }
        assert!((bmax_x(&werner(FRAC_1_SQRT_2)) - 2.0).abs() < 1e-15);

        // α|01⟩ + β|10⟩: ρ33 = α², ρ22 = β², ρ23 = αβ
        let a2: f64 = 0.3;
        let (a, b) = (a2.sqrt(), (1.0 - a2).sqrt());
        let x = XState::new(0.0, b * b, a * a, 0.0, c(0.0), c(a * b)).unwrap();
        assert!((bmax_x(&x) - 2.0 * (1.0 + 4.0 * a2 * (1.0 - a2)).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn horodecki_examples() {
        assert!(horodecki_bmax(&DensityMatrix4::maximally_mixed()).abs() < 1e-15);
        let bell = x_to_dense(&bell_x());
        assert!((horodecki_bmax(&bell) - 2.0 * SQRT_2).abs() < 1e-12);
        let x = as_x_state(&bell, 1e-9).unwrap();
        assert!((horodecki_bmax(&bell) - bmax_x(&x)).abs() < 1e-12);
    }
}
