#![allow(dead_code)]

use std::path::PathBuf;

use cohres::resonance::{ExitChannel, ExitState};
use cohres::{
    AmplitudeTable, AngleGrid, BackgroundSpec, ChannelState, Complex64, ProductChannel,
    ResonanceSpec, ScenarioConfig, XsecMatrix,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const CH_A: &str = "D+HF";
pub const CH_B: &str = "H+DF";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn scenario_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/fhd_like.json")
}

pub fn scenario() -> ScenarioConfig {
    ScenarioConfig::load(scenario_path()).expect("committed scenario loads")
}

pub fn initial_pair() -> [ChannelState; 2] {
    [
        ChannelState::new("F+HD", 0, 0, 0),
        ChannelState::new("F+HD", 0, 1, 0),
    ]
}

pub fn polar(r: &mut ChaCha8Rng, scale: f64) -> Complex64 {
    Complex64::from_polar(scale * r.gen_range(0.05..1.0), r.gen_range(-3.2..3.2))
}

pub fn gaussian_c(r: &mut ChaCha8Rng) -> Complex64 {
    // Box–Muller, both components.
    let u1: f64 = r.gen_range(f64::EPSILON..1.0);
    let u2: f64 = r.gen_range(0.0..1.0);
    Complex64::from_polar((-2.0 * u1.ln()).sqrt(), std::f64::consts::TAU * u2)
}

/// Random PSD matrix: half Gram matrices of random amplitude sets, half
/// drawn directly with Schwartz ratio spread over [0, 1] and diagonals over
/// six decades.
pub fn random_psd(r: &mut ChaCha8Rng) -> XsecMatrix<f64> {
    if r.gen_bool(0.5) {
        let n = r.gen_range(1..8);
        let (mut s11, mut s22, mut s12) = (0.0, 0.0, Complex64::new(0.0, 0.0));
        for _ in 0..n {
            let w = r.gen_range(0.1..1.0);
            let f1 = gaussian_c(r);
            let f2 = gaussian_c(r);
            s11 += w * f1.norm_sqr();
            s22 += w * f2.norm_sqr();
            s12 += f1.conj() * f2 * w;
        }
        XsecMatrix::from_elements(s11, s22, s12).unwrap()
    } else {
        let s11 = 10f64.powf(r.gen_range(-3.0..3.0));
        let s22 = 10f64.powf(r.gen_range(-3.0..3.0));
        let rho: f64 = r.gen_range(0.0..1.0);
        let s12 = Complex64::from_polar(rho * (s11 * s22).sqrt(), r.gen_range(-3.2..3.2));
        XsecMatrix::from_elements(s11, s22, s12).unwrap()
    }
}

fn random_shape(r: &mut ChaCha8Rng) -> Vec<f64> {
    let n = r.gen_range(1..5);
    (0..n)
        .map(|l| if l == 0 { 1.0 } else { r.gen_range(-0.9..0.9) })
        .collect()
}

/// Random single-pole resonance with two exit arrangements.
pub fn random_resonance(r: &mut ChaCha8Rng) -> ResonanceSpec<f64> {
    let exit = |r: &mut ChaCha8Rng, label: &str| ExitChannel {
        arrangement: label.to_string(),
        states: (0..r.gen_range(1..5))
            .map(|k| ExitState {
                state: ChannelState::new(label, r.gen_range(0..4), k as u32, 0),
                coupling: polar(r, 1e-3),
                shape: random_shape(r),
            })
            .collect(),
    };
    ResonanceSpec {
        epsilon_r: r.gen_range(0.2..0.3),
        gamma_width: r.gen_range(1e-3..1e-2),
        entrance: [polar(r, 1.0), polar(r, 1.0)],
        exits: vec![exit(r, CH_A), exit(r, CH_B)],
    }
}

/// A pure-resonance table at a random energy within five widths of the pole.
pub fn random_pure_table(r: &mut ChaCha8Rng) -> (ResonanceSpec<f64>, AmplitudeTable<f64>) {
    let res = random_resonance(r);
    let grid = AngleGrid::gauss_legendre(r.gen_range(4..65)).unwrap();
    let e = res.epsilon_r + r.gen_range(-5.0..5.0) * res.gamma_width;
    let bg = BackgroundSpec::silent(&res);
    let t = cohres::synth_table(&res, &bg, &grid, e, initial_pair(), 1.0).unwrap();
    (res, t)
}

/// Table with arbitrary random amplitudes, one channel.
pub fn random_table(r: &mut ChaCha8Rng, states: usize, nodes: usize) -> AmplitudeTable<f64> {
    let grid = AngleGrid::gauss_legendre(nodes).unwrap();
    let amplitudes = (0..states * nodes)
        .map(|_| [gaussian_c(r), gaussian_c(r)])
        .collect();
    AmplitudeTable {
        energy: 0.255,
        initial: initial_pair(),
        grid,
        channels: vec![ProductChannel {
            arrangement: CH_A.to_string(),
            states: (0..states)
                .map(|j| ChannelState::new(CH_A, 0, j as u32, 0))
                .collect(),
            amplitudes,
        }],
    }
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

pub fn scan_energies() -> Vec<f64> {
    cohres::scan::energy_grid(0.25, 0.31, 0.005).unwrap()
}
