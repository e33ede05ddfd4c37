//! Energy bookkeeping for a degenerate two-state superposition.
//!
//! Both components share the total energy E, so their relative kinetic
//! energies differ by the internal-energy gap: Ek2 = Ek1 − (e2 − e1). The
//! energy arithmetic is generic so it can run in exact rationals (see
//! [`parse_exact_decimal`]); decimal inputs such as 0.23252 eV then keep
//! their decimal meaning instead of the nearest binary double. Wavenumbers
//! always come out as `f64`.
//!
//! The centre-of-mass condition K1 = K2 is implied; everything here lives
//! in the relative coordinate.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{Num, ToPrimitive};

use crate::constants::{AMU_EV, HBAR_C_EV_ANGSTROM};
use crate::error::{Error, Result};

/// Scalar usable for exact or floating energy bookkeeping.
pub trait EnergyScalar: Clone + PartialOrd + Num + ToPrimitive + Debug {}
impl<E: Clone + PartialOrd + Num + ToPrimitive + Debug> EnergyScalar for E {}

/// Exact decimal energies.
pub type ExactEnergy = Ratio<i64>;

#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionKinematics<E> {
    pub e1: E,
    pub e2: E,
    pub ek1: E,
    pub ek2: E,
    pub total: E,
    /// Reduced mass in amu.
    pub mu: E,
    /// Relative wavenumbers in Å⁻¹.
    pub k1: f64,
    pub k2: f64,
}

impl<E: EnergyScalar> SuperpositionKinematics<E> {
    /// Ek1 − Ek2, which equals e2 − e1.
    pub fn kinetic_offset(&self) -> E {
        self.ek1.clone() - self.ek2.clone()
    }
}

fn f(x: &impl ToPrimitive) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Kinematics of the pair given the internal energies, the kinetic energy
/// of component 1 and the reduced mass.
pub fn kinematic_pair<E: EnergyScalar>(
    e1: E,
    e2: E,
    ek1: E,
    mu: E,
) -> Result<SuperpositionKinematics<E>> {
    let zero = E::zero();
    if ek1 <= zero {
        return Err(Error::NonPositive {
            what: "Ek1",
            value: f(&ek1),
        });
    }
    if mu <= zero {
        return Err(Error::NonPositive {
            what: "reduced mass",
            value: f(&mu),
        });
    }
    let total = ek1.clone() + e1.clone();
    if total <= e2 {
        return Err(Error::ChannelClosed {
            total: f(&total),
            e2: f(&e2),
        });
    }
    let ek2 = ek1.clone() - (e2.clone() - e1.clone());
    let mu_f = f(&mu);
    let k1 = wavenumber(f(&ek1), mu_f);
    let k2 = wavenumber(f(&ek2), mu_f);
    Ok(SuperpositionKinematics {
        e1,
        e2,
        ek1,
        ek2,
        total,
        mu,
        k1,
        k2,
    })
}

/// k = sqrt(2 μ Ek) / ħ in Å⁻¹ for Ek in eV and μ in amu.
pub fn wavenumber(ek_ev: f64, mu_amu: f64) -> f64 {
    (2.0 * mu_amu * AMU_EV * ek_ev).sqrt() / HBAR_C_EV_ANGSTROM
}

/// μ = m_a m_b / (m_a + m_b).
pub fn reduced_mass<E: EnergyScalar>(m_a: E, m_b: E) -> Result<E> {
    if m_a <= E::zero() || m_b <= E::zero() {
        return Err(Error::NonPositive {
            what: "mass",
            value: f(&m_a).min(f(&m_b)),
        });
    }
    Ok(m_a.clone() * m_b.clone() / (m_a + m_b))
}

/// Parses a plain decimal literal (`-12.345`, `0.23252`, `7`) exactly.
pub fn parse_exact_decimal(text: &str) -> Result<ExactEnergy> {
    let bad = || Error::InvalidInput(format!("'{text}' is not a plain decimal number"));
    let s = text.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: i64 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let denom = 10_i64.checked_pow(frac_part.len() as u32).ok_or_else(bad)?;
    let r = Ratio::new(numer, denom);
    Ok(if neg { -r } else { r })
}
