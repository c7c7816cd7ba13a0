//! Two qubits decaying into independent zero-temperature reservoirs.
//!
//! Each qubit's reduced dynamics is fixed by one complex amplitude `q(t)`:
//! the excited population scales with `|q|²`, the coherence with `q`, and the
//! ground state absorbs the loss. Applied to both qubits this map keeps the X
//! shape, so the whole trajectory of an X state is a closed-form function of
//! its initial elements and `q(t)`.

use std::fmt;
use std::io::Read;
use std::path::Path;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chsh::{x_state_eigenvalues, BellEigenvalues, Region, CLASSICAL_BOUND};
use crate::error::{Error, Result};
use crate::obp::{optimal_settings, AngleSettings};
use crate::qstate::{kron2, DensityMatrix4, XState};

/// Tolerance on `u2 = u3` at a reported crossing root.
pub const ROOT_TOL: f64 = 1e-10;

/// Relative time tolerance of event refinement.
pub const EVENT_REL_TOL: f64 = 1e-9;

/// Bisection iteration cap for event refinement.
pub const EVENT_MAX_ITERS: usize = 80;

/// Interior probes per grid interval when looking for events.
pub const PROBES_PER_INTERVAL: usize = 8;

/// `q(t)` for a Markovian reservoir: real, with `|q|² = e^{−γt}`.
pub fn q_exponential(t: f64, gamma: f64) -> Complex64 {
    Complex64::new((-gamma * t / 2.0).exp(), 0.0)
}

/// `q(t)` for a Lorentzian reservoir of width `λ` and coupling `γ0`:
/// `e^{−λt/2}[cosh(dt/2) + (λ/d) sinh(dt/2)]`, `d = √(λ² − 2γ0λ)`.
///
/// For `2γ0 > λ` the hyperbolic functions turn trigonometric and `q` has
/// isolated zeros.
pub fn q_lorentzian(t: f64, lambda: f64, gamma0: f64) -> Complex64 {
    let disc = lambda * lambda - 2.0 * gamma0 * lambda;
    let q = if disc.abs() <= 1e-14 * lambda * lambda {
        (-lambda * t / 2.0).exp() * (1.0 + lambda * t / 2.0)
    } else if disc > 0.0 {
        let d = disc.sqrt();
        0.5 * (1.0 + lambda / d) * ((d - lambda) * t / 2.0).exp()
            + 0.5 * (1.0 - lambda / d) * (-(d + lambda) * t / 2.0).exp()
    } else {
        let w = (-disc).sqrt();
        let (s, c) = (w * t / 2.0).sin_cos();
        (-lambda * t / 2.0).exp() * (c + lambda / w * s)
    };
    Complex64::new(q, 0.0)
}

/// Source of the single-qubit amplitude `q(t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum QModel {
    Exponential { gamma: f64 },
    Lorentzian { lambda: f64, gamma0: f64 },
    /// Linearly interpolated samples; held constant past the last one.
    Tabulated { samples: Vec<(f64, Complex64)> },
}

impl QModel {
    pub fn exponential(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidModel(format!("decay rate {gamma} must be positive")));
        }
        Ok(QModel::Exponential { gamma })
    }

    pub fn lorentzian(lambda: f64, gamma0: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite() && gamma0 > 0.0 && gamma0.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "lorentzian rates ({lambda}, {gamma0}) must be positive"
            )));
        }
        Ok(QModel::Lorentzian { lambda, gamma0 })
    }

    /// Samples must start at `t = 0` with `q = 1`, be strictly increasing in
    /// `t`, and keep `|q| ≤ 1`.
    pub fn tabulated(samples: Vec<(f64, Complex64)>) -> Result<Self> {
        let Some(&(t0, q0)) = samples.first() else {
            return Err(Error::InvalidModel("empty q(t) table".into()));
        };
        if t0 != 0.0 {
            return Err(Error::InvalidModel(format!("table starts at t = {t0}, not 0")));
        }
        if (q0 - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::InvalidModel(format!("q(0) = {q0}, not 1")));
        }
        for w in samples.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidModel(format!(
                    "table times not strictly increasing at t = {}",
                    w[1].0
                )));
            }
        }
        if let Some((t, q)) = samples
            .iter()
            .find(|(t, q)| !t.is_finite() || !(q.norm() <= 1.0 + 1e-12))
        {
            return Err(Error::InvalidModel(format!("|q({t})| = {} exceeds 1", q.norm())));
        }
        Ok(QModel::Tabulated { samples })
    }

    /// Reads a `t,q_re,q_im` CSV table.
    pub fn read_table<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["t", "q_re", "q_im"] {
            return Err(Error::InvalidModel(format!(
                "table header must be t,q_re,q_im (got {})",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut samples = Vec::new();
        for row in rdr.deserialize() {
            let (t, re, im): (f64, f64, f64) = row?;
            samples.push((t, Complex64::new(re, im)));
        }
        Self::tabulated(samples)
    }

    pub fn read_table_file(path: &Path) -> Result<Self> {
        Self::read_table(std::fs::File::open(path)?)
    }

    /// Parses `exp:GAMMA`, `lorentz:LAMBDA,GAMMA0` or `table:PATH`.
    pub fn parse_descriptor(desc: &str) -> Result<Self> {
        let (kind, rest) = desc
            .split_once(':')
            .ok_or_else(|| Error::InvalidModel(format!("malformed q model {desc:?}")))?;
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidModel(format!("bad number {s:?} in {desc:?}")))
        };
        match kind {
            "exp" => Self::exponential(num(rest)?),
            "lorentz" => {
                let (l, g) = rest
                    .split_once(',')
                    .ok_or_else(|| Error::InvalidModel(format!("expected lorentz:LAMBDA,GAMMA0, got {desc:?}")))?;
                Self::lorentzian(num(l)?, num(g)?)
            }
            "table" => Self::read_table_file(Path::new(rest)),
            other => Err(Error::InvalidModel(format!("unknown q model kind {other:?}"))),
        }
    }

    pub fn q(&self, t: f64) -> Complex64 {
        match self {
            QModel::Exponential { gamma } => q_exponential(t, *gamma),
            QModel::Lorentzian { lambda, gamma0 } => q_lorentzian(t, *lambda, *gamma0),
            QModel::Tabulated { samples } => {
                let last = samples[samples.len() - 1];
                if t <= 0.0 {
                    return samples[0].1;
                }
                if t >= last.0 {
                    return last.1;
                }
                let i = samples.partition_point(|(ts, _)| *ts <= t);
                let (t0, q0) = samples[i - 1];
                let (t1, q1) = samples[i];
                let w = (t - t0) / (t1 - t0);
                q0 * (1.0 - w) + q1 * w
            }
        }
    }
}

/// Applies the single-qubit amplitude-damping map with amplitude `q` to both
/// qubits (operator-sum form, Kraus pair per qubit).
pub fn apply_amplitude_damping(rho0: &DensityMatrix4, q: Complex64) -> DensityMatrix4 {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let decay = Complex64::new((1.0 - q.norm_sqr()).max(0.0).sqrt(), 0.0);
    // order {|1⟩, |0⟩}
    let k = [Matrix2::new(q, zero, zero, one), Matrix2::new(zero, zero, decay, zero)];
    let mut out = Matrix4::zeros();
    for ki in &k {
        for kj in &k {
            let kk = kron2(ki, kj);
            out += kk * rho0.matrix() * kk.adjoint();
        }
    }
    DensityMatrix4::from_matrix_unchecked(out)
}

/// Element-wise image of an X state under the two-qubit damping map.
pub fn evolve_x(x0: &XState, q: Complex64) -> XState {
    let x = q.norm_sqr();
    let rho11 = x0.rho11() * x * x;
    let rho22 = x * (x0.rho22() + x0.rho11() * (1.0 - x));
    let rho33 = x * (x0.rho33() + x0.rho11() * (1.0 - x));
    let rho44 = 1.0 - rho11 - rho22 - rho33;
    XState::from_parts_unchecked(rho11, rho22, rho33, rho44, q * q * x0.rho14(), x0.rho23() * x)
}

/// Extended Werner-like state `r|Φ⟩⟨Φ| + (1−r)I/4`, `|Φ⟩ = α|01⟩ + βe^{iδ}|10⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EwlParams {
    pub alpha2: f64,
    pub r: f64,
    pub delta: f64,
}

impl EwlParams {
    pub fn new(alpha2: f64, r: f64, delta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha2) || !(0.0..=1.0).contains(&r) || !delta.is_finite() {
            return Err(Error::InvalidParams(format!(
                "need alpha2, r in [0, 1] and finite delta (got {alpha2}, {r}, {delta})"
            )));
        }
        Ok(EwlParams { alpha2, r, delta })
    }

    pub fn beta2(&self) -> f64 {
        1.0 - self.alpha2
    }

    /// `2αβr`.
    fn coherence_scale(&self) -> f64 {
        2.0 * self.r * (self.alpha2 * self.beta2()).sqrt()
    }
}

pub fn ewl_state(p: &EwlParams) -> XState {
    let mixed = (1.0 - p.r) / 4.0;
    let ab = (p.alpha2 * p.beta2()).sqrt();
    // ρ23 = ⟨10|ρ|01⟩ = r·(βe^{iδ})·α
    XState::from_parts_unchecked(
        mixed,
        mixed + p.r * p.beta2(),
        mixed + p.r * p.alpha2,
        mixed,
        Complex64::new(0.0, 0.0),
        Complex64::from_polar(p.r * ab, p.delta),
    )
}

/// Closed-form eigenvalues along the EWL trajectory at `|q|² = x`:
/// `u1 = u3 = 4α²β²r²x²`, `u2 = (1 − 2x + (1−r)x²)²`.
pub fn ewl_eigenvalues(p: &EwlParams, x: f64) -> BellEigenvalues {
    let u13 = 4.0 * p.alpha2 * p.beta2() * p.r * p.r * x * x;
    let u2 = (1.0 - 2.0 * x + (1.0 - p.r) * x * x).powi(2);
    BellEigenvalues::from_values(u13, u2, u13)
}

/// Values of `|q|² ∈ (0, 1]` where `u2 = u3` along the EWL trajectory,
/// ascending. Empty when the surface is not crossed (`r = 0`, `α²` at 0 or 1).
pub fn crossing_roots(p: &EwlParams) -> Vec<f64> {
    if !(p.r > 0.0 && p.alpha2 > 0.0 && p.alpha2 < 1.0) {
        return Vec::new();
    }
    // |1 − 2x + (1−r)x²| = 2αβr·x  ⇔  (1−r)x² − (2 ± c)x + 1 = 0; the smaller
    // root of each quadratic is the one in (0, 1].
    let c = p.coherence_scale();
    let a = 1.0 - p.r;
    let mut roots: Vec<f64> = [2.0 + c, 2.0 - c]
        .into_iter()
        .filter_map(|b| {
            let disc = (b * b - 4.0 * a).max(0.0);
            let x = 2.0 / (b + disc.sqrt());
            (x > 0.0 && x <= 1.0 + 1e-12).then_some(x.min(1.0))
        })
        .filter(|&x| {
            let u = ewl_eigenvalues(p, x);
            (u.u2 - u.u3).abs() <= ROOT_TOL
        })
        .collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup();
    roots
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EventKind {
    /// The optimal angle set switches between the two closed forms.
    SetJump,
    ViolationOn,
    ViolationOff,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::SetJump => "SetJump",
            EventKind::ViolationOn => "ViolationOn",
            EventKind::ViolationOff => "ViolationOff",
        })
    }
}

/// An event refined by bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanEvent {
    pub kind: EventKind,
    pub t: f64,
    pub q2: f64,
    pub bmax: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanWarning {
    /// More than one event of one kind fell between two grid samples.
    GridTooCoarse { t_start: f64, t_end: f64, events: usize },
}

impl fmt::Display for ScanWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanWarning::GridTooCoarse { t_start, t_end, events } => write!(
                f,
                "GridTooCoarse: {events} events inside grid interval [{t_start}, {t_end}]"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeScanRecord {
    pub t: f64,
    pub q2: f64,
    pub u: BellEigenvalues,
    pub bmax: f64,
    pub active_set: Region,
    pub settings: AngleSettings,
    /// Events refined inside the interval ending at this sample.
    pub events: Vec<ScanEvent>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeScan {
    pub records: Vec<TimeScanRecord>,
    pub warnings: Vec<ScanWarning>,
}

impl TimeScan {
    pub fn events(&self) -> impl Iterator<Item = &ScanEvent> {
        self.records.iter().flat_map(|r| r.events.iter())
    }
}

struct Sample {
    q2: f64,
    u: BellEigenvalues,
}

impl Sample {
    fn set1(&self) -> bool {
        self.u.region == Region::Set1
    }

    fn violates(&self) -> bool {
        self.u.bmax() > CLASSICAL_BOUND
    }
}

struct Trajectory<'a> {
    x0: &'a XState,
    model: &'a QModel,
}

impl Trajectory<'_> {
    fn at(&self, t: f64) -> Sample {
        let q = self.model.q(t);
        Sample {
            q2: q.norm_sqr(),
            u: x_state_eigenvalues(&evolve_x(self.x0, q)),
        }
    }

    fn refine(&self, mut lo: f64, mut hi: f64, side: impl Fn(&Sample) -> bool) -> f64 {
        let lo_side = side(&self.at(lo));
        for _ in 0..EVENT_MAX_ITERS {
            if hi - lo <= EVENT_REL_TOL * hi.abs().max(f64::MIN_POSITIVE) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if side(&self.at(mid)) == lo_side {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn event(&self, kind: EventKind, t: f64) -> ScanEvent {
        let s = self.at(t);
        ScanEvent {
            kind,
            t,
            q2: s.q2,
            bmax: s.u.bmax(),
        }
    }
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    match t_grid.first() {
        None => return Err(Error::InvalidGrid("empty time grid".into())),
        Some(&t0) if t0 != 0.0 => return Err(Error::InvalidGrid(format!("grid starts at {t0}, not 0"))),
        _ => {}
    }
    if t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidGrid("non-finite time".into()));
    }
    if let Some(w) = t_grid.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid(format!("grid not strictly increasing at {}", w[1])));
    }
    Ok(())
}

/// Evolves `x0` over `t_grid`, recording eigenvalues, `B_max`, the optimal
/// angles and any set jumps or violation changes between samples.
pub fn time_scan(x0: &XState, model: &QModel, t_grid: &[f64]) -> Result<TimeScan> {
    check_grid(t_grid)?;
    let traj = Trajectory { x0, model };
    let mut records = Vec::with_capacity(t_grid.len());
    let mut warnings = Vec::new();

    for (i, &t) in t_grid.iter().enumerate() {
        let q = model.q(t);
        let x = evolve_x(x0, q);
        let (settings, u) = optimal_settings(&x);
        let mut events = Vec::new();

        if i > 0 {
            let t_prev = t_grid[i - 1];
            let probes: Vec<(f64, Sample)> = (0..=PROBES_PER_INTERVAL)
                .map(|k| {
                    let tk = if k == PROBES_PER_INTERVAL {
                        t
                    } else {
                        t_prev + (t - t_prev) * k as f64 / PROBES_PER_INTERVAL as f64
                    };
                    (tk, traj.at(tk))
                })
                .collect();
            let mut jumps = 0;
            let mut flips = 0;
            for w in probes.windows(2) {
                let ((ta, sa), (tb, sb)) = (&w[0], &w[1]);
                if sa.set1() != sb.set1() {
                    let te = traj.refine(*ta, *tb, Sample::set1);
                    events.push(traj.event(EventKind::SetJump, te));
                    jumps += 1;
                }
                if sa.violates() != sb.violates() {
                    let te = traj.refine(*ta, *tb, Sample::violates);
                    let kind = if sb.violates() { EventKind::ViolationOn } else { EventKind::ViolationOff };
                    events.push(traj.event(kind, te));
                    flips += 1;
                }
            }
            events.sort_by(|a, b| a.t.total_cmp(&b.t));
            if jumps > 1 || flips > 1 {
                warnings.push(ScanWarning::GridTooCoarse {
                    t_start: t_prev,
                    t_end: t,
                    events: events.len(),
                });
            }
        }

        records.push(TimeScanRecord {
            t,
            q2: q.norm_sqr(),
            u,
            bmax: u.bmax(),
            active_set: u.region,
            settings,
            events,
        });
    }
    Ok(TimeScan { records, warnings })
}

/// `samples` equally spaced times from 0 to `t_max` inclusive.
pub fn uniform_grid(t_max: f64, samples: usize) -> Result<Vec<f64>> {
    if samples < 2 || !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidGrid(format!(
            "need samples >= 2 and t_max > 0 (got {samples}, {t_max})"
        )));
    }
    let n = samples - 1;
    Ok((0..samples).map(|i| t_max * i as f64 / n as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chsh::bmax_x;
    use crate::qstate::{as_x_state, x_to_dense};
    use std::f64::consts::{LN_2, PI};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn exponential_q() {
        assert_eq!(q_exponential(0.0, 2.0), c(1.0));
        assert!((q_exponential(LN_2, 1.0).norm_sqr() - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        for k in 1..50 {
            let v = q_exponential(k as f64, 0.7).norm_sqr();
            assert!(v < prev);
            prev = v;
        }
        assert!(prev < 1e-14);
    }

    #[test]
    fn lorentzian_q() {
        for (l, g) in [(1.0, 0.01), (1.0, 0.5), (0.1, 1.0)] {
            assert!((q_lorentzian(0.0, l, g) - c(1.0)).norm() < 1e-15);
            for k in 0..400 {
                assert!(q_lorentzian(k as f64 * 0.25, l, g).norm() <= 1.0 + 1e-12);
            }
        }
        // weak coupling approaches the Markovian decay at rate γ0
        let (l, g) = (1.0, 0.01);
        for t in [20.0, 50.0, 100.0] {
            let lor = q_lorentzian(t, l, g).norm_sqr();
            let exp = q_exponential(t, g).norm_sqr();
            assert!((lor / exp - 1.0).abs() < 0.05, "t={t}: {lor} vs {exp}");
        }
        // strong coupling: zeros where tan(ωt/2) = −ω/λ
        let (l, g): (f64, f64) = (0.1, 1.0);
        let w = (2.0 * g * l - l * l).sqrt();
        let t_max = 100.0;
        let expected = {
            let first = 2.0 * (PI - (w / l).atan()) / w;
            ((t_max - first) / (2.0 * PI / w)).floor() as usize + 1
        };
        let mut changes = 0;
        let mut prev = q_lorentzian(0.0, l, g).re;
        for k in 1..=100_000 {
            let v = q_lorentzian(t_max * k as f64 / 100_000.0, l, g).re;
            if v.signum() != prev.signum() {
                changes += 1;
            }
            prev = v;
        }
        assert_eq!(changes, expected);
        assert!(expected >= 2);
    }

    #[test]
    fn critical_lorentzian_is_continuous() {
        let (l, g) = (2.0, 1.0);
        let t = 1.3;
        let crit = q_lorentzian(t, l, g).re;
        let near = q_lorentzian(t, l, g * (1.0 + 1e-7)).re;
        assert!((crit - near).abs() < 1e-6);
    }

    #[test]
    fn damping_limits() {
        let rho = x_to_dense(&ewl_state(&EwlParams::new(0.3, 0.7, 0.4).unwrap()));
        let same = apply_amplitude_damping(&rho, c(1.0));
        assert!((same.matrix() - rho.matrix()).norm() < 1e-15);

        let gone = apply_amplitude_damping(&rho, c(0.0));
        let mut ground = Matrix4::zeros();
        ground[(3, 3)] = c(1.0);
        assert!((gone.matrix() - ground).norm() < 1e-15);

        let up = XState::new(1.0, 0.0, 0.0, 0.0, c(0.0), c(0.0)).unwrap();
        let x: f64 = 0.37;
        let out = apply_amplitude_damping(&x_to_dense(&up), c(x.sqrt()));
        let want = [x * x, x * (1.0 - x), x * (1.0 - x), (1.0 - x) * (1.0 - x)];
        for (i, w) in want.iter().enumerate() {
            assert!((out.entry(i, i).re - w).abs() < 1e-15);
        }
    }

    #[test]
    fn closed_form_matches_channel() {
        let x0 = XState::new(
            0.2,
            0.3,
            0.1,
            0.4,
            Complex64::from_polar(0.25, 0.7),
            Complex64::from_polar(0.15, -2.0),
        )
        .unwrap();
        for q in [c(1.0), c(0.0), Complex64::from_polar(0.8, 0.9), Complex64::from_polar(0.3, -2.5)] {
            let closed = evolve_x(&x0, q);
            let channel = as_x_state(&apply_amplitude_damping(&x_to_dense(&x0), q), 1e-12).unwrap();
            let d = (closed.rho11() - channel.rho11()).abs()
                + (closed.rho22() - channel.rho22()).abs()
                + (closed.rho33() - channel.rho33()).abs()
                + (closed.rho44() - channel.rho44()).abs()
                + (closed.rho14() - channel.rho14()).norm()
                + (closed.rho23() - channel.rho23()).norm();
            assert!(d < 1e-12, "q = {q}: {d}");
        }
        assert_eq!(evolve_x(&x0, c(1.0)), x0);
    }

    #[test]
    fn bell_state_decay() {
        let bell = ewl_state(&EwlParams::new(0.5, 1.0, 0.0).unwrap());
        let x: f64 = 0.6;
        let e = evolve_x(&bell, c(x.sqrt()));
        assert!((e.rho23().re - x / 2.0).abs() < 1e-15);
        assert!((e.rho22() - x / 2.0).abs() < 1e-15);
        assert!((e.rho33() - x / 2.0).abs() < 1e-15);
        assert!((e.rho44() - (1.0 - x)).abs() < 1e-15);
    }

    #[test]
    fn ewl_examples() {
        let mixed = ewl_state(&EwlParams::new(0.3, 0.0, 1.0).unwrap());
        assert_eq!(x_to_dense(&mixed), DensityMatrix4::maximally_mixed());

        let bell = ewl_state(&EwlParams::new(0.5, 1.0, 0.0).unwrap());
        assert!((bell.rho22() - 0.5).abs() < 1e-15 && (bell.rho33() - 0.5).abs() < 1e-15);
        assert!((bell.rho23() - c(0.5)).norm() < 1e-15);
        assert!((bmax_x(&bell) - 2.0 * 2f64.sqrt()).abs() < 1e-15);

        let e = ewl_state(&EwlParams::new(0.3, 0.5, PI / 3.0).unwrap());
        assert!((e.rho23().norm() - 0.5 * 0.21f64.sqrt()).abs() < 1e-15);

        // matches r|Φ⟩⟨Φ| + (1−r)I/4 built from the state vector
        let p = EwlParams::new(0.3, 0.6, 1.1).unwrap();
        let (a, b) = (p.alpha2.sqrt(), p.beta2().sqrt());
        let phi = [c(0.0), Complex64::from_polar(b, p.delta), c(a), c(0.0)];
        let pure = DensityMatrix4::pure(phi).unwrap();
        let want = pure.matrix() * c(p.r) + Matrix4::identity() * c((1.0 - p.r) / 4.0);
        assert!((x_to_dense(&ewl_state(&p)).matrix() - want).norm() < 1e-15);
    }

    #[test]
    fn ewl_eigenvalue_examples() {
        let p = EwlParams::new(0.3, 1.0, 0.0).unwrap();
        let u = ewl_eigenvalues(&p, 1.0);
        assert!((u.u1 - 0.84).abs() < 1e-15 && (u.u3 - 0.84).abs() < 1e-15 && u.u2 == 1.0);
        let u = ewl_eigenvalues(&p, 0.0);
        assert!(u.u1 == 0.0 && u.u3 == 0.0 && u.u2 == 1.0);
        let u = ewl_eigenvalues(&p, 0.5);
        assert!((u.u1 - 0.21).abs() < 1e-15 && u.u2.abs() < 1e-15);
        assert_eq!(u.region, Region::Set2);
    }

    #[test]
    fn crossing_root_examples() {
        let roots = crossing_roots(&EwlParams::new(0.5, 1.0, 0.0).unwrap());
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((roots[1] - 1.0).abs() < 1e-15);

        assert!(crossing_roots(&EwlParams::new(0.3, 0.0, 0.0).unwrap()).is_empty());
        assert!(crossing_roots(&EwlParams::new(0.0, 0.5, 0.0).unwrap()).is_empty());

        // frozen from the bisection oracle in tests/dynamics.rs
        let roots = crossing_roots(&EwlParams::new(0.3, 1.0, 0.0).unwrap());
        assert!((roots[0] - 0.342_874_956_015_442_3).abs() < 1e-12);
        assert!((roots[1] - 0.922_947_828_794_673_4).abs() < 1e-12);
    }

    #[test]
    fn table_parsing() {
        let csv = "t,q_re,q_im\n0,1,0\n1,0.5,0.1\n2,0.2,0\n";
        let m = QModel::read_table(csv.as_bytes()).unwrap();
        assert!((m.q(0.5) - Complex64::new(0.75, 0.05)).norm() < 1e-15);
        assert_eq!(m.q(5.0), c(0.2));
        assert!(QModel::read_table("t,q\n0,1\n".as_bytes()).is_err());
        assert!(QModel::read_table("t,q_re,q_im\n0.5,1,0\n".as_bytes()).is_err());
        assert!(QModel::read_table("t,q_re,q_im\n0,1,0\n1,0.5,0\n1,0.4,0\n".as_bytes()).is_err());
        assert!(QModel::read_table("t,q_re,q_im\n0,1,0\n1,1.5,0\n".as_bytes()).is_err());
    }

    #[test]
    fn descriptors() {
        assert_eq!(QModel::parse_descriptor("exp:1.5").unwrap(), QModel::Exponential { gamma: 1.5 });
        assert_eq!(
            QModel::parse_descriptor("lorentz:0.1,2").unwrap(),
            QModel::Lorentzian { lambda: 0.1, gamma0: 2.0 }
        );
        assert!(QModel::parse_descriptor("exp:-1").is_err());
        assert!(QModel::parse_descriptor("gauss:1").is_err());
        assert!(QModel::parse_descriptor("lorentz:1").is_err());
    }

    #[test]
    fn static_state_has_no_events() {
        let bell = ewl_state(&EwlParams::new(0.5, 1.0, 0.0).unwrap());
        let m = QModel::tabulated(vec![(0.0, c(1.0)), (10.0, c(1.0))]).unwrap();
        let scan = time_scan(&bell, &m, &uniform_grid(10.0, 50).unwrap()).unwrap();
        assert_eq!(scan.events().count(), 0);
        for r in &scan.records {
            assert!((r.bmax - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn werner_violation_turns_off() {
        let w = ewl_state(&EwlParams::new(0.5, 0.9, 0.0).unwrap());
        let scan = time_scan(&w, &QModel::exponential(1.0).unwrap(), &uniform_grid(5.0, 200).unwrap()).unwrap();
        let offs: Vec<_> = scan.events().filter(|e| e.kind == EventKind::ViolationOff).collect();
        assert_eq!(offs.len(), 1);
        assert!((offs[0].bmax - 2.0).abs() < 1e-8);
        assert!(scan.records[0].bmax > 2.0);
    }

    #[test]
    fn coarse_grid_warns() {
        let x0 = ewl_state(&EwlParams::new(0.3, 1.0, 0.0).unwrap());
        let scan = time_scan(&x0, &QModel::exponential(1.0).unwrap(), &[0.0, 5.0]).unwrap();
        assert!(matches!(scan.warnings.as_slice(), [ScanWarning::GridTooCoarse { .. }]));
        let jumps = scan.events().filter(|e| e.kind == EventKind::SetJump).count();
        assert_eq!(jumps, 2);
    }

    #[test]
    fn grid_validation() {
        let x0 = ewl_state(&EwlParams::new(0.3, 1.0, 0.0).unwrap());
        let m = QModel::exponential(1.0).unwrap();
        assert!(time_scan(&x0, &m, &[]).is_err());
        assert!(time_scan(&x0, &m, &[0.1, 0.2]).is_err());
        assert!(time_scan(&x0, &m, &[0.0, 0.2, 0.2]).is_err());
        assert!(uniform_grid(1.0, 1).is_err());
        assert!(uniform_grid(0.0, 5).is_err());
        assert_eq!(uniform_grid(2.0, 3).unwrap(), vec![0.0, 1.0, 2.0]);
    }
}
