//! Synthetic amplitudes from an isolated Feshbach resonance plus a smooth
//! direct background.
//!
//! The resonant amplitude factorizes into an exit coupling, an entrance
//! coupling and a Breit–Wigner pole,
//!
//! ```text
//!     f_{n,i}(θ) = γ'_n P_n(cosθ) γ_i / (E − E_r),    E_r = ε_r − iΓ/2,
//! ```
//!
//! so a pure-resonance table has rank one in the initial-state index. The
//! background is `(a_n + a'_n (E − E_ref)) P'_n(cosθ) w_{n,i}` with column
//! weights `w_{n,i}` that default to 1. Couplings do not depend on energy.

use num_complex::Complex;
use num_traits::cast;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelState;
use crate::constants::HBAR_EV_FS;
use crate::error::{Error, Result};
use crate::grid::{legendre_series, legendre_series_norm, AngleGrid};
use crate::scalar::Real;
use crate::table::{validate_table, AmplitudeTable, ProductChannel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExitState<T> {
    pub state: ChannelState,
    pub coupling: Complex<T>,
    /// Legendre coefficients of the angular shape in cosθ.
    pub shape: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExitChannel<T> {
    pub arrangement: String,
    pub states: Vec<ExitState<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceSpec<T> {
    /// Resonance position ε_r in eV.
    pub epsilon_r: T,
    /// Total width Γ in eV.
    pub gamma_width: T,
    /// γ_r(q, 1) and γ_r(q, 2).
    pub entrance: [Complex<T>; 2],
    pub exits: Vec<ExitChannel<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Deserialize<'de> + num_traits::Num + Clone"))]
pub struct BackgroundState<T> {
    pub state: ChannelState,
    /// Amplitude at the reference energy.
    pub amplitude: Complex<T>,
    /// d(amplitude)/dE per eV.
    pub slope: Complex<T>,
    pub shape: Vec<T>,
    /// Per-column weights applied to initial states 1 and 2.
    #[serde(default = "unit_weights")]
    pub column_weights: [Complex<T>; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Deserialize<'de> + num_traits::Num + Clone"))]
pub struct BackgroundChannel<T> {
    pub arrangement: String,
    pub states: Vec<BackgroundState<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Deserialize<'de> + num_traits::Num + Clone"))]
pub struct BackgroundSpec<T> {
    pub reference_energy: T,
    pub channels: Vec<BackgroundChannel<T>>,
}

fn unit_weights<T: num_traits::Num + Clone>() -> [Complex<T>; 2] {
    [
        Complex::new(T::one(), T::zero()),
        Complex::new(T::one(), T::zero()),
    ]
}

fn finite<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn cast_c<T: Real, U: Real>(z: Complex<T>) -> Complex<U> {
    Complex::new(cast(z.re).unwrap(), cast(z.im).unwrap())
}

fn cast_v<T: Real, U: Real>(v: &[T]) -> Vec<U> {
    v.iter().map(|&x| cast(x).unwrap()).collect()
}

impl<T: Real> ResonanceSpec<T> {
    pub fn check(&self) -> Result<()> {
        if !(self.gamma_width > T::zero() && self.gamma_width.is_finite()) {
            return Err(Error::NonPositive {
                what: "resonance width",
                value: cast(self.gamma_width).unwrap_or(f64::NAN),
            });
        }
        if !self.epsilon_r.is_finite() || !self.entrance.iter().all(|&z| finite(z)) {
            return Err(Error::InvalidInput("non-finite resonance parameter".into()));
        }
        let mut any = false;
        for ch in &self.exits {
            for st in &ch.states {
                if !finite(st.coupling) || st.shape.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidInput(format!(
                        "non-finite exit coupling for {}",
                        st.state
                    )));
                }
                if st.shape.is_empty() {
                    return Err(Error::InvalidInput(format!(
                        "empty angular shape for {}",
                        st.state
                    )));
                }
                any |= st.coupling.norm_sqr() > T::zero();
            }
        }
        if !any {
            return Err(Error::InvalidInput("every exit coupling vanishes".into()));
        }
        Ok(())
    }

    /// Complex resonance energy ε_r − iΓ/2.
    pub fn complex_energy(&self) -> Complex<T> {
        Complex::new(self.epsilon_r, -self.gamma_width / T::lit(2.0))
    }

    pub fn breit_wigner(&self, energy: T) -> Complex<T> {
        breit_wigner_factor(energy, self)
    }

    /// Σ_n |γ'_n|² ∫|P_n|² dΩ for one exit arrangement.
    pub fn exit_strength(&self, arrangement: &str) -> Result<T> {
        let ch = self
            .exits
            .iter()
            .find(|c| c.arrangement == arrangement)
            .ok_or_else(|| Error::UnknownChannel(arrangement.to_string()))?;
        Ok(ch.states.iter().fold(T::zero(), |acc, st| {
            acc + st.coupling.norm_sqr() * legendre_series_norm(&st.shape)
        }))
    }

    /// Resonance decay branching between two arrangements, integrated over angle.
    pub fn branching_ratio(&self, a: &str, b: &str) -> Result<T> {
        Ok(self.exit_strength(a)? / self.exit_strength(b)?)
    }

    pub fn cast<U: Real>(&self) -> ResonanceSpec<U> {
        ResonanceSpec {
            epsilon_r: cast(self.epsilon_r).unwrap(),
            gamma_width: cast(self.gamma_width).unwrap(),
            entrance: [cast_c(self.entrance[0]), cast_c(self.entrance[1])],
            exits: self
                .exits
                .iter()
                .map(|ch| ExitChannel {
                    arrangement: ch.arrangement.clone(),
                    states: ch
                        .states
                        .iter()
                        .map(|st| ExitState {
                            state: st.state.clone(),
                            coupling: cast_c(st.coupling),
                            shape: cast_v(&st.shape),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl<T: Real> BackgroundSpec<T> {
    pub fn check(&self) -> Result<()> {
        if !self.reference_energy.is_finite() {
            return Err(Error::InvalidInput(
                "non-finite background reference energy".into(),
            ));
        }
        for ch in &self.channels {
            for st in &ch.states {
                let ok = finite(st.amplitude)
                    && finite(st.slope)
                    && st.column_weights.iter().all(|&z| finite(z))
                    && st.shape.iter().all(|c| c.is_finite());
                if !ok {
                    return Err(Error::InvalidInput(format!(
                        "non-finite background entry for {}",
                        st.state
                    )));
                }
                if st.shape.is_empty() {
                    return Err(Error::InvalidInput(format!(
                        "empty background shape for {}",
                        st.state
                    )));
                }
            }
        }
        Ok(())
    }

    /// The zero background on the same channel/state layout as `r`.
    pub fn silent(r: &ResonanceSpec<T>) -> Self {
        Self {
            reference_energy: r.epsilon_r,
            channels: r
                .exits
                .iter()
                .map(|ch| BackgroundChannel {
                    arrangement: ch.arrangement.clone(),
                    states: ch
                        .states
                        .iter()
                        .map(|st| BackgroundState {
                            state: st.state.clone(),
                            amplitude: Complex::from(T::zero()),
                            slope: Complex::from(T::zero()),
                            shape: vec![T::one()],
                            column_weights: unit_weights(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn cast<U: Real>(&self) -> BackgroundSpec<U> {
        BackgroundSpec {
            reference_energy: cast(self.reference_energy).unwrap(),
            channels: self
                .channels
                .iter()
                .map(|ch| BackgroundChannel {
                    arrangement: ch.arrangement.clone(),
                    states: ch
                        .states
                        .iter()
                        .map(|st| BackgroundState {
                            state: st.state.clone(),
                            amplitude: cast_c(st.amplitude),
                            slope: cast_c(st.slope),
                            shape: cast_v(&st.shape),
                            column_weights: [
                                cast_c(st.column_weights[0]),
                                cast_c(st.column_weights[1]),
                            ],
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

/// 1 / (E − E_r) = 1 / (E − ε_r + iΓ/2), in eV⁻¹.
pub fn breit_wigner_factor<T: Real>(energy: T, r: &ResonanceSpec<T>) -> Complex<T> {
    Complex::new(energy - r.epsilon_r, r.gamma_width / T::lit(2.0)).inv()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conversion {
    /// Γ in eV to τ in fs.
    WidthToLifetime,
    /// τ in fs to Γ in eV.
    LifetimeToWidth,
}

/// Γ = ħ/τ and τ = ħ/Γ with ħ in eV·fs.
pub fn width_lifetime<T: Real>(x: T, direction: Conversion) -> Result<T> {
    if !(x > T::zero() && x.is_finite()) {
        let what = match direction {
            Conversion::WidthToLifetime => "width",
            Conversion::LifetimeToWidth => "lifetime",
        };
        return Err(Error::NonPositive {
            what,
            value: cast(x).unwrap_or(f64::NAN),
        });
    }
    Ok(T::lit(HBAR_EV_FS) / x)
}

fn check_layout<T: Real>(r: &ResonanceSpec<T>, b: &BackgroundSpec<T>) -> Result<()> {
    if r.exits.len() != b.channels.len() {
        return Err(Error::SpecMismatch(format!(
            "{} resonance exit channels vs {} background channels",
            r.exits.len(),
            b.channels.len()
        )));
    }
    for (rc, bc) in r.exits.iter().zip(&b.channels) {
        if rc.arrangement != bc.arrangement {
            return Err(Error::SpecMismatch(format!(
                "channel '{}' vs '{}'",
                rc.arrangement, bc.arrangement
            )));
        }
        if rc.states.len() != bc.states.len()
            || rc
                .states
                .iter()
                .zip(&bc.states)
                .any(|(x, y)| x.state != y.state)
        {
            return Err(Error::SpecMismatch(format!(
                "final states of '{}' differ",
                rc.arrangement
            )));
        }
    }
    Ok(())
}

/// Builds the amplitude table at `energy` for a resonance/background mixture.
///
/// `mix = 1` gives the pure resonance, `mix = 0` the pure background.
pub fn synth_table<T: Real>(
    r: &ResonanceSpec<T>,
    b: &BackgroundSpec<T>,
    grid: &AngleGrid<T>,
    energy: T,
    initial: [ChannelState; 2],
    mix: T,
) -> Result<AmplitudeTable<T>> {
    if !(mix >= T::zero() && mix <= T::one()) {
        return Err(Error::InvalidInput(format!("mix = {mix} outside [0, 1]")));
    }
    r.check()?;
    b.check()?;
    check_layout(r, b)?;

    let xs: Vec<T> = grid.nodes.iter().map(|th| th.cos()).collect();
    let pole = breit_wigner_factor(energy, r);
    let de = energy - b.reference_energy;
    let rest = T::one() - mix;
    let [g1, g2] = r.entrance;

    let channels = r
        .exits
        .iter()
        .zip(&b.channels)
        .map(|(rc, bc)| {
            let mut amplitudes = Vec::with_capacity(rc.states.len() * xs.len());
            for (rs, bs) in rc.states.iter().zip(&bc.states) {
                let resonant = rs.coupling * pole * mix;
                let direct = (bs.amplitude + bs.slope * de) * rest;
                let [w1, w2] = bs.column_weights;
                for &x in &xs {
                    let res = resonant * legendre_series(&rs.shape, x);
                    let bg = direct * legendre_series(&bs.shape, x);
                    amplitudes.push([res * g1 + bg * w1, res * g2 + bg * w2]);
                }
            }
            ProductChannel {
                arrangement: rc.arrangement.clone(),
                states: rc.states.iter().map(|s| s.state.clone()).collect(),
                amplitudes,
            }
        })
        .collect();

    let table = AmplitudeTable {
        energy,
        initial,
        grid: grid.clone(),
        channels,
    };
    let violations = validate_table(&table);
    if violations.is_empty() {
        Ok(table)
    } else {
        Err(Error::Validation(violations))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xsection::{diff_xsec_matrix, schwartz_ratio, xsec_matrix};

    pub(crate) fn spec() -> ResonanceSpec<f64> {
        let st = |arr: &str, v| ChannelState::new(arr, v, 0, 0);
        ResonanceSpec {
            epsilon_r: 0.255,
            gamma_width: 0.006,
            entrance: [Complex::new(0.8, 0.1), Complex::new(-0.3, 1.1)],
            exits: vec![
                ExitChannel {
                    arrangement: "D+HF".into(),
                    states: vec![
                        ExitState {
                            state: st("D+HF", 0),
                            coupling: Complex::new(0.02, 0.01),
                            shape: vec![1.0, -0.6],
                        },
                        ExitState {
                            state: st("D+HF", 1),
                            coupling: Complex::new(-0.01, 0.03),
                            shape: vec![0.5, 0.0, 0.3],
                        },
                    ],
                },
                ExitChannel {
                    arrangement: "H+DF".into(),
                    states: vec![ExitState {
                        state: st("H+DF", 0),
                        coupling: Complex::new(0.005, 0.0),
                        shape: vec![1.0],
                    }],
                },
            ],
        }
    }

    fn pair() -> [ChannelState; 2] {
        [
            ChannelState::new("F+HD", 0, 0, 0),
            ChannelState::new("F+HD", 0, 1, 0),
        ]
    }

    #[test]
    fn on_resonance_limit() {
        let r = spec();
        let f = breit_wigner_factor(r.epsilon_r, &r);
        assert!((f - Complex::new(0.0, -2.0 / r.gamma_width)).norm() < 1e-9);
        let half = breit_wigner_factor(r.epsilon_r + r.gamma_width / 2.0, &r).norm_sqr();
        assert!((half / f.norm_sqr() - 0.5).abs() < 1e-14);
        assert_eq!(r.complex_energy(), Complex::new(0.255, -0.003));
    }

    #[test]
    fn width_and_lifetime() {
        let g = width_lifetime(109.0_f64, Conversion::LifetimeToWidth).unwrap();
        assert!((g - 6.0386e-3).abs() < 1e-7);
        let tau = width_lifetime(0.6582119569_f64, Conversion::WidthToLifetime).unwrap();
        assert!((tau - 1.0).abs() < 1e-15);
        for x in [1e-4_f64, 0.3, 109.0, 5e3] {
            let back = width_lifetime(
                width_lifetime(x, Conversion::LifetimeToWidth).unwrap(),
                Conversion::WidthToLifetime,
            )
            .unwrap();
            assert!((back - x).abs() <= 1e-14 * x);
        }
        assert!(width_lifetime(0.0_f64, Conversion::WidthToLifetime).is_err());
        assert!(width_lifetime(-1.0_f64, Conversion::LifetimeToWidth).is_err());
    }

    #[test]
    fn pure_resonance_factorizes() {
        let r = spec();
        let b = BackgroundSpec::silent(&r);
        let grid = AngleGrid::gauss_legendre(16).unwrap();
        let t = synth_table(&r, &b, &grid, 0.26, pair(), 1.0).unwrap();
        for ch in ["D+HF", "H+DF"] {
            assert!(schwartz_ratio(&xsec_matrix(&t, ch).unwrap()).unwrap() >= 1.0 - 1e-12);
            for k in 0..grid.len() {
                let d = diff_xsec_matrix(&t, ch, k).unwrap();
                assert!(schwartz_ratio(&d).unwrap() >= 1.0 - 1e-12);
            }
        }
    }

    #[test]
    fn zero_mix_is_pure_background() {
        let r = spec();
        let mut b = BackgroundSpec::silent(&r);
        b.channels[0].states[0].amplitude = Complex::new(0.1, -0.2);
        b.channels[0].states[0].column_weights = [Complex::new(1.0, 0.0), Complex::new(0.0, 0.5)];
        let grid = AngleGrid::gauss_legendre(4).unwrap();
        let t = synth_table(&r, &b, &grid, 0.255, pair(), 0.0).unwrap();
        let amp = t.channels[0].amplitude(0, 2, 4);
        assert_eq!(
            amp,
            [
                Complex::new(0.1, -0.2),
                Complex::new(0.1, -0.2) * Complex::new(0.0, 0.5)
            ]
        );
        assert_eq!(
            t.channels[1].amplitude(0, 0, 4),
            [Complex::new(0.0, 0.0); 2]
        );
    }

    #[test]
    fn layout_mismatch() {
        let r = spec();
        let mut b = BackgroundSpec::silent(&r);
        b.channels[1].states[0].state.v = 7;
        let grid = AngleGrid::gauss_legendre(4).unwrap();
        assert!(matches!(
            synth_table(&r, &b, &grid, 0.25, pair(), 0.5),
            Err(Error::SpecMismatch(_))
        ));
        let mut b = BackgroundSpec::silent(&r);
        b.channels.pop();
        assert!(matches!(
            synth_table(&r, &b, &grid, 0.25, pair(), 0.5),
            Err(Error::SpecMismatch(_))
        ));
        let b = BackgroundSpec::silent(&r);
        assert!(synth_table(&r, &b, &grid, 0.25, pair(), 1.5).is_err());
    }

    #[test]
    fn spec_checks() {
        let mut r = spec();
        r.gamma_width = 0.0;
        assert!(matches!(r.check(), Err(Error::NonPositive { .. })));
        let mut r = spec();
        for ch in &mut r.exits {
            for st in &mut ch.states {
                st.coupling = Complex::new(0.0, 0.0);
            }
        }
        assert!(r.check().is_err());
    }

    #[test]
    fn branching_from_couplings() {
        let r = spec();
        let a = (0.02f64.powi(2) + 0.01f64.powi(2)) * (1.0 + 0.36 / 3.0)
            + (0.01f64.powi(2) + 0.03f64.powi(2)) * (0.25 + 0.09 / 5.0);
        let b = 0.005f64.powi(2);
        assert!((r.branching_ratio("D+HF", "H+DF").unwrap() - a / b).abs() < 1e-12 * a / b);
    }

    #[test]
    fn spec_json_defaults_column_weights() {
        let json = r#"{"state":{"arrangement":"D+HF","v":0,"j":0,"m":0},
                       "amplitude":[0.1,0.0],"slope":[0.0,0.0],"shape":[1.0]}"#;
        let st: BackgroundState<f64> = serde_json::from_str(json).unwrap();
        assert_eq!(st.column_weights, [Complex::new(1.0, 0.0); 2]);
    }
}
