//! Physical constants (CODATA 2018) used for unit conversions.
//!
//! Energies are in eV, lengths in Å, times in s or fs. Masses are always
//! supplied by the caller in amu; no isotope masses live here.

/// Reduced Planck constant in eV·s.
pub const HBAR_EV_S: f64 = 6.582119569e-16;

/// Reduced Planck constant in eV·fs.
pub const HBAR_EV_FS: f64 = 0.6582119569;

/// Rest energy of one atomic mass unit in eV.
pub const AMU_EV: f64 = 931.49410242e6;

/// Speed of light in Å/s.
pub const C_ANGSTROM_PER_S: f64 = 2.99792458e18;

/// ħc in eV·Å.
pub const HBAR_C_EV_ANGSTROM: f64 = HBAR_EV_S * C_ANGSTROM_PER_S;
