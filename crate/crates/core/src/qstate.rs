//! Two-qubit states, the X-shaped subclass and Pauli correlations.
//!
//! Every 4×4 matrix in this crate is written in the ordered computational
//! basis `{|11⟩, |10⟩, |01⟩, |00⟩}`, so index 0 is `|11⟩` and index 3 is
//! `|00⟩`. Single-qubit operators use the matching order `{|1⟩, |0⟩}`; in
//! particular `σ_z |1⟩ = +|1⟩`. Qubit 1 is the first tensor factor.

use std::path::Path;

use nalgebra::{Matrix2, Matrix3, Matrix4, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for the Hermiticity, trace and positivity checks.
pub const STATE_TOL: f64 = 1e-10;

/// Default magnitude above which an off-pattern entry breaks the X structure.
pub const DEFAULT_OFF_X_TOL: f64 = 1e-9;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);
const CI: Complex64 = Complex64::new(0.0, 1.0);

/// Pauli matrices `(σ_x, σ_y, σ_z)` in the `{|1⟩, |0⟩}` order.
pub fn pauli() -> [Matrix2<Complex64>; 3] {
    [
        Matrix2::new(C0, C1, C1, C0),
        Matrix2::new(C0, -CI, CI, C0),
        Matrix2::new(C1, C0, C0, -C1),
    ]
}

/// Kronecker product of two single-qubit operators, `a` acting on qubit 1.
pub fn kron2(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    let mut out = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix4 {
    m: Matrix4<Complex64>,
}

impl DensityMatrix4 {
    /// Validates a row-major 4×4 complex array.
    pub fn new(entries: [[Complex64; 4]; 4]) -> Result<Self> {
        Self::from_matrix(Matrix4::from_fn(|i, j| entries[i][j]))
    }

    pub fn from_matrix(m: Matrix4<Complex64>) -> Result<Self> {
        validate(&m)?;
        Ok(DensityMatrix4 { m })
    }

    /// Product state `ρ_A ⊗ ρ_B` of two single-qubit density matrices.
    pub fn product(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> Result<Self> {
        Self::from_matrix(kron2(a, b))
    }

    /// Projector onto a normalized pure state given by its four amplitudes.
    pub fn pure(amplitudes: [Complex64; 4]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::InvalidParams("zero state vector".into()));
        }
        let v: Vec<Complex64> = amplitudes.iter().map(|a| a / norm).collect();
        Self::from_matrix(Matrix4::from_fn(|i, j| v[i] * v[j].conj()))
    }

    /// The maximally mixed state `I/4`.
    pub fn maximally_mixed() -> Self {
        DensityMatrix4 {
            m: Matrix4::from_diagonal_element(Complex64::new(0.25, 0.0)),
        }
    }

    /// Skips validation; the caller guarantees the invariants.
    pub(crate) fn from_matrix_unchecked(m: Matrix4<Complex64>) -> Self {
        DensityMatrix4 { m }
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    pub fn entries(&self) -> [[Complex64; 4]; 4] {
        let mut out = [[C0; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.m[(i, j)];
            }
        }
        out
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues(&self.m)
    }
}

fn hermitian_eigenvalues(m: &Matrix4<Complex64>) -> [f64; 4] {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let ev = h.symmetric_eigenvalues();
    let mut out = [ev[0], ev[1], ev[2], ev[3]];
    out.sort_by(f64::total_cmp);
    out
}

fn validate(m: &Matrix4<Complex64>) -> Result<()> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Parse("non-finite density matrix entry".into()));
    }
    let mut worst = (0.0, 0, 0);
    for i in 0..4 {
        for j in i..4 {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > worst.0 {
                worst = (d, i, j);
            }
        }
    }
    if worst.0 > STATE_TOL {
        return Err(Error::NotHermitian {
            row: worst.1,
            col: worst.2,
            magnitude: worst.0,
        });
    }
    let deviation = (m.trace() - C1).norm();
    if deviation > STATE_TOL {
        return Err(Error::TraceNotOne { deviation });
    }
    let min_eigenvalue = hermitian_eigenvalues(m)[0];
    if min_eigenvalue < -STATE_TOL {
        return Err(Error::NotPositive { min_eigenvalue });
    }
    Ok(())
}

/// The seven free parameters of an X-shaped density matrix.
///
/// Nonzero entries sit on the diagonal and the anti-diagonal only:
/// `ρ14 = ⟨11|ρ|00⟩` and `ρ23 = ⟨10|ρ|01⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    rho11: f64,
    rho22: f64,
    rho33: f64,
    rho44: f64,
    rho14: Complex64,
    rho23: Complex64,
}

impl XState {
    pub fn new(
        rho11: f64,
        rho22: f64,
        rho33: f64,
        rho44: f64,
        rho14: Complex64,
        rho23: Complex64,
    ) -> Result<Self> {
        let x = XState {
            rho11,
            rho22,
            rho33,
            rho44,
            rho14,
            rho23,
        };
        x.check()?;
        Ok(x)
    }

    fn check(&self) -> Result<()> {
        let pops = [self.rho11, self.rho22, self.rho33, self.rho44];
        if pops.iter().any(|p| !p.is_finite())
            || !self.rho14.re.is_finite()
            || !self.rho14.im.is_finite()
            || !self.rho23.re.is_finite()
            || !self.rho23.im.is_finite()
        {
            return Err(Error::InvalidXState("non-finite parameter".into()));
        }
        let sum: f64 = pops.iter().sum();
        if (sum - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidXState(format!(
                "populations sum to {sum}, not 1"
            )));
        }
        if let Some(p) = pops
            .iter()
            .find(|&&p| !(-STATE_TOL..=1.0 + STATE_TOL).contains(&p))
        {
            return Err(Error::InvalidXState(format!(
                "population {p} outside [0, 1]"
            )));
        }
        if self.rho11 * self.rho44 < self.rho14.norm_sqr() - STATE_TOL {
            return Err(Error::InvalidXState(
                "outer block not positive: rho11*rho44 < |rho14|^2".into(),
            ));
        }
        if self.rho22 * self.rho33 < self.rho23.norm_sqr() - STATE_TOL {
            return Err(Error::InvalidXState(
                "inner block not positive: rho22*rho33 < |rho23|^2".into(),
            ));
        }
        Ok(())
    }

    /// Skips validation; the caller guarantees the invariants.
    pub(crate) fn from_parts_unchecked(
        rho11: f64,
        rho22: f64,
        rho33: f64,
        rho44: f64,
        rho14: Complex64,
        rho23: Complex64,
    ) -> Self {
        XState {
            rho11,
            rho22,
            rho33,
            rho44,
            rho14,
            rho23,
        }
    }

    pub fn rho11(&self) -> f64 {
        self.rho11
    }
    pub fn rho22(&self) -> f64 {
        self.rho22
    }
    pub fn rho33(&self) -> f64 {
        self.rho33
    }
    pub fn rho44(&self) -> f64 {
        self.rho44
    }
    pub fn rho14(&self) -> Complex64 {
        self.rho14
    }
    pub fn rho23(&self) -> Complex64 {
        self.rho23
    }

    /// `ρ11 + ρ44 − ρ22 − ρ33`, the z-z correlation of the state.
    pub fn population_gap(&self) -> f64 {
        self.rho11 + self.rho44 - self.rho22 - self.rho33
    }
}

/// Reads the X parameters off `rho`, rejecting it if any of the eight
/// off-pattern entries exceeds `off_x_tol` in magnitude.
pub fn as_x_state(rho: &DensityMatrix4, off_x_tol: f64) -> Result<XState> {
    let m = rho.matrix();
    let mut worst = (0.0, 0, 0);
    for i in 0..4 {
        for j in 0..4 {
            if i == j || i + j == 3 {
                continue;
            }
            let mag = m[(i, j)].norm();
            if mag > worst.0 {
                worst = (mag, i, j);
            }
        }
    }
    if worst.0 > off_x_tol {
        return Err(Error::NotXStructured {
            row: worst.1,
            col: worst.2,
            magnitude: worst.0,
        });
    }
    XState::new(
        m[(0, 0)].re,
        m[(1, 1)].re,
        m[(2, 2)].re,
        m[(3, 3)].re,
        m[(0, 3)],
        m[(1, 2)],
    )
}

/// Hermitian completion of the X parameters into a dense matrix.
pub fn x_to_dense(x: &XState) -> DensityMatrix4 {
    let mut m = Matrix4::zeros();
    m[(0, 0)] = Complex64::new(x.rho11, 0.0);
    m[(1, 1)] = Complex64::new(x.rho22, 0.0);
    m[(2, 2)] = Complex64::new(x.rho33, 0.0);
    m[(3, 3)] = Complex64::new(x.rho44, 0.0);
    m[(0, 3)] = x.rho14;
    m[(3, 0)] = x.rho14.conj();
    m[(1, 2)] = x.rho23;
    m[(2, 1)] = x.rho23.conj();
    DensityMatrix4::from_matrix_unchecked(m)
}

/// 3×3 real matrix of Pauli expectations, `t[m][n] = Tr(ρ σ_n ⊗ σ_m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationMatrix {
    pub t: Matrix3<f64>,
}

impl CorrelationMatrix {
    /// `Tᵀ T`.
    pub fn gram(&self) -> Matrix3<f64> {
        self.t.transpose() * self.t
    }
}

pub fn pauli_correlation_matrix(rho: &DensityMatrix4) -> CorrelationMatrix {
    let s = pauli();
    let t = Matrix3::from_fn(|m, n| {
        let op = kron2(&s[n], &s[m]);
        (rho.matrix() * op).trace().re.clamp(-1.0, 1.0)
    });
    CorrelationMatrix { t }
}

/// A spin measurement direction `(sinθ cosφ, sinθ sinφ, cosθ)`.
///
/// Stored canonically with `θ ∈ [0, π]` and `φ ∈ (−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableDirection {
    theta: f64,
    phi: f64,
}

impl ObservableDirection {
    /// Builds a direction from arbitrary angles, reflecting `θ` back into
    /// `[0, π]` (with `φ → φ + π`) when needed. The physical direction is
    /// unchanged.
    pub fn new(theta: f64, phi: f64) -> Self {
        let (theta, phi) = normalize_angles(theta, phi);
        ObservableDirection { theta, phi }
    }

    pub fn z() -> Self {
        ObservableDirection {
            theta: 0.0,
            phi: 0.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn unit_vector(&self) -> Vector3<f64> {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Vector3::new(st * cp, st * sp, ct)
    }

    /// The ±1-valued observable `O · σ`.
    pub fn operator(&self) -> Matrix2<Complex64> {
        let o = self.unit_vector();
        let s = pauli();
        s[0] * Complex64::new(o.x, 0.0) + s[1] * Complex64::new(o.y, 0.0) + s[2] * Complex64::new(o.z, 0.0)
    }
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_phi(phi: f64) -> f64 {
    use std::f64::consts::PI;
    let mut p = phi % (2.0 * PI);
    if p <= -PI {
        p += 2.0 * PI;
    } else if p > PI {
        p -= 2.0 * PI;
    }
    p
}

/// Canonical `(θ, φ)` with `θ ∈ [0, π]`, `φ ∈ (−π, π]`, same direction.
pub fn normalize_angles(theta: f64, phi: f64) -> (f64, f64) {
    use std::f64::consts::PI;
    if (0.0..=PI).contains(&theta) {
        return (theta, wrap_phi(phi));
    }
    let t = wrap_phi(theta);
    if t < 0.0 {
        (-t, wrap_phi(phi + PI))
    } else {
        (t, wrap_phi(phi))
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct DensityJson {
    rho: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    off_x_tol: Option<f64>,
}

/// Contents of a density-matrix JSON file: the state and an optional
/// off-X tolerance override.
#[derive(Debug, Clone)]
pub struct DensityFile {
    pub rho: DensityMatrix4,
    pub off_x_tol: Option<f64>,
}

/// Parses `{"rho": [[[re, im], ...] x4] x4, "off_x_tol": ...}`.
pub fn parse_density_json(text: &str) -> Result<DensityFile> {
    let raw: DensityJson = serde_json::from_str(text)?;
    if raw.rho.len() != 4 || raw.rho.iter().any(|row| row.len() != 4) {
        return Err(Error::Parse("\"rho\" must be a 4x4 array of [re, im] pairs".into()));
    }
    if let Some(tol) = raw.off_x_tol {
        if !(tol >= 0.0) {
            return Err(Error::Parse("\"off_x_tol\" must be non-negative".into()));
        }
    }
    let mut entries = [[C0; 4]; 4];
    for (i, row) in raw.rho.iter().enumerate() {
        for (j, [re, im]) in row.iter().enumerate() {
            entries[i][j] = Complex64::new(*re, *im);
        }
    }
    Ok(DensityFile {
        rho: DensityMatrix4::new(entries)?,
        off_x_tol: raw.off_x_tol,
    })
}

pub fn read_density_json(path: &Path) -> Result<DensityFile> {
    parse_density_json(&std::fs::read_to_string(path)?)
}

/// Serializes a state in the density-matrix JSON format.
pub fn density_to_json(rho: &DensityMatrix4, off_x_tol: Option<f64>) -> String {
    let m = rho.matrix();
    let raw = DensityJson {
        rho: (0..4)
            .map(|i| (0..4).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect(),
        off_x_tol,
    };
    serde_json::to_string_pretty(&raw).expect("plain numbers serialize")
}
