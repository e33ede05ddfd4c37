//! Two-state coherent control of collisional cross sections.
//!
//! A coherent superposition `c1|1⟩ + c2|2⟩` of two degenerate initial states
//! scatters into each product channel with a cross section that is a 2×2
//! Hermitian form in (c1, c2). This crate builds those forms from tables of
//! transition amplitudes ([`xsection`]), finds the exact control range over
//! the relative weight `s` and phase `φ12` for single channels and channel
//! ratios ([`control`]), and synthesizes tables from a Feshbach resonance
//! plus direct background ([`resonance`]) to exercise everything
//! end-to-end, including energy scans ([`scan`]).
//!
//! Numerics are generic over [`Real`] (`f32` or `f64`); the `*F64` aliases
//! below name the double-precision instantiations used by the file formats
//! and the command line.

// Guards like `!(x > 0.0)` are negated on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod cli;
pub mod constants;
pub mod control;
pub mod error;
pub mod grid;
pub mod io;
pub mod kinematics;
pub mod resonance;
pub mod scalar;
pub mod scan;
pub mod scenario;
pub mod table;
pub mod xsection;

pub use channel::ChannelState;
pub use control::{
    grid_oracle, noncoherent_limits, noncoherent_ratio_limits, ratio_extrema,
    ratio_extrema_with_tol, sigma_extrema, ControlRange, OracleResult,
};
pub use error::{Error, Result};
pub use grid::AngleGrid;
pub use kinematics::{kinematic_pair, ExactEnergy, SuperpositionKinematics};
pub use resonance::{
    breit_wigner_factor, synth_table, width_lifetime, BackgroundSpec, Conversion, ResonanceSpec,
};
pub use scalar::Real;
pub use scan::{energy_scan, ScanOptions, ScanRow};
pub use scenario::ScenarioConfig;
pub use table::{validate_table, AmplitudeTable, ProductChannel, Violation};
pub use xsection::{
    diff_xsec_matrix, evaluate_sigma, schwartz_ratio, xsec_matrix, ControlParams, XsecKind,
    XsecMatrix,
};

pub type Complex64 = num_complex::Complex<f64>;

pub type AngleGridF64 = AngleGrid<f64>;
pub type AmplitudeTableF64 = AmplitudeTable<f64>;
pub type XsecMatrixF64 = XsecMatrix<f64>;
pub type ControlParamsF64 = ControlParams<f64>;
pub type ControlRangeF64 = ControlRange<f64>;
pub type ResonanceSpecF64 = ResonanceSpec<f64>;
pub type BackgroundSpecF64 = BackgroundSpec<f64>;
pub type ScanRowF64 = ScanRow<f64>;

pub type XsecMatrixF32 = XsecMatrix<f32>;
pub type ControlRangeF32 = ControlRange<f32>;
