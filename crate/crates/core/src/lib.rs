//! Maximum CHSH-Bell values and closed-form optimal measurement angles for
//! two-qubit states, with amplitude-damping dynamics that track how the
//! optimal angles jump between their two closed forms.
//!
//! Modules:
//! - [`qstate`]: density matrices, X states, Pauli correlations.
//! - [`chsh`]: Bell function by direct trace, Horodecki maximum, X-state eigenvalues.
//! - [`obp`]: the two closed-form angle sets and the distance between settings.
//! - [`oracle`]: brute-force maximization that certifies the closed forms.
//! - [`dynamics`]: `q(t)` models, the two-qubit damping map, extended
//!   Werner-like states, crossing roots and time scans.
//! - [`cli`]: the `bellopt` command-line front end.
//!
//! Density matrices use the basis `|11>, |10>, |01>, |00>`.
//!
//! ```
//! use bellopt::{bell_function, optimal_settings, EwlParams, ewl_state, x_to_dense};
//!
//! // 0.9 |Φ><Φ| + 0.1 I/4 with |Φ> = √0.3 |01> + √0.7 |10>
//! let x = ewl_state(&EwlParams::new(0.3, 0.9, 0.0).unwrap());
//! let (angles, u) = optimal_settings(&x);
//! assert!(u.bmax() > 2.0);
//! let b = bell_function(&x_to_dense(&x), &angles.to_bell_settings());
//! assert!((b - u.bmax()).abs() < 1e-12);
//! ```

// `!(x >= 0.0)` is the NaN-rejecting form used throughout
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chsh;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod numfmt;
pub mod obp;
pub mod oracle;
pub mod qstate;
pub mod sample;
mod sym3;

pub use chsh::{
    bell_function, bmax_x, correlation, horodecki_bmax, sym3_eigenvalues, x_state_eigenvalues,
    BellEigenvalues, BellSettings, Region,
};
pub use dynamics::{
    apply_amplitude_damping, crossing_roots, evolve_x, ewl_eigenvalues, ewl_state, q_exponential,
    q_lorentzian, time_scan, EventKind, EwlParams, QModel, ScanEvent, ScanWarning, TimeScan,
    TimeScanRecord,
};
pub use error::{Error, Result};
pub use obp::{obp_set1, obp_set2, optimal_settings, settings_distance, AngleSettings};
pub use oracle::{brute_force_bmax, certify_settings, OracleConfig, OracleResult};
pub use qstate::{
    as_x_state, pauli_correlation_matrix, x_to_dense, CorrelationMatrix, DensityMatrix4,
    ObservableDirection, XState,
};
