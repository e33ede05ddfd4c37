//! Transition-amplitude tables at one total energy.

use std::fmt;

use num_complex::Complex;

use crate::channel::ChannelState;
use crate::grid::AngleGrid;
use crate::scalar::Real;

/// Amplitudes into one product arrangement.
///
/// `amplitudes[state * n_nodes + node]` holds the pair
/// `(⟨n,θ_k|T|1⟩, ⟨n,θ_k|T|2⟩)` in Å·sr^(-1/2).
#[derive(Debug, Clone, PartialEq)]
pub struct ProductChannel<T> {
    pub arrangement: String,
    pub states: Vec<ChannelState>,
    pub amplitudes: Vec<[Complex<T>; 2]>,
}

impl<T: Real> ProductChannel<T> {
    pub fn amplitude(&self, state: usize, node: usize, n_nodes: usize) -> [Complex<T>; 2] {
        self.amplitudes[state * n_nodes + node]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTable<T> {
    /// Total energy in eV.
    pub energy: T,
    pub initial: [ChannelState; 2],
    pub grid: AngleGrid<T>,
    pub channels: Vec<ProductChannel<T>>,
}

impl<T: Real> AmplitudeTable<T> {
    pub fn channel(&self, arrangement: &str) -> Option<&ProductChannel<T>> {
        self.channels.iter().find(|c| c.arrangement == arrangement)
    }

    pub fn channel_labels(&self) -> impl Iterator<Item = &str> {
        self.channels.iter().map(|c| c.arrangement.as_str())
    }
}

/// One broken table invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub invariant: &'static str,
    pub location: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.invariant, self.location, self.detail)
    }
}

fn violation(
    invariant: &'static str,
    location: impl Into<String>,
    detail: impl Into<String>,
) -> Violation {
    Violation {
        invariant,
        location: location.into(),
        detail: detail.into(),
    }
}

/// Checks every table and grid invariant and lists what is broken.
///
/// Tables are assumed azimuthally symmetric: amplitudes depend on θ only,
/// which holds for the m1 = m2 = 0 initial pairs used in practice. Tables
/// with m1 ≠ m2 would need an azimuthal grid and are not representable; a
/// pair with differing m is reported under `initial-azimuthal`.
pub fn validate_table<T: Real>(t: &AmplitudeTable<T>) -> Vec<Violation> {
    let mut out = Vec::new();

    if !t.energy.is_finite() {
        out.push(violation(
            "finite",
            "energy",
            format!("energy = {}", t.energy),
        ));
    }

    let [a, b] = &t.initial;
    for (i, s) in t.initial.iter().enumerate() {
        if let Some(why) = s.check() {
            out.push(violation("state", format!("initial[{i}]"), why));
        }
    }
    if a == b {
        out.push(violation(
            "initial-distinct",
            "initial",
            format!("both initial states are {a}"),
        ));
    }
    if a.arrangement != b.arrangement {
        out.push(violation(
            "initial-arrangement",
            "initial",
            format!("'{}' vs '{}'", a.arrangement, b.arrangement),
        ));
    }
    if a.m != b.m {
        out.push(violation(
            "initial-azimuthal",
            "initial",
            format!("m1 = {} differs from m2 = {}", a.m, b.m),
        ));
    }

    for (name, detail) in t.grid.violations() {
        out.push(violation(name, "angle_grid", detail));
    }

    let n_nodes = t.grid.nodes.len();
    for (ci, ch) in t.channels.iter().enumerate() {
        let loc = format!("channels[{ci}]");
        if ch.arrangement.trim().is_empty() {
            out.push(violation("channel-label", &loc, "empty arrangement label"));
        }
        if t.channels[..ci]
            .iter()
            .any(|c| c.arrangement == ch.arrangement)
        {
            out.push(violation(
                "channel-unique",
                &loc,
                format!("duplicate channel '{}'", ch.arrangement),
            ));
        }
        if ch.states.is_empty() {
            out.push(violation("channel-nonempty", &loc, "no final states"));
        }
        for (si, s) in ch.states.iter().enumerate() {
            if let Some(why) = s.check() {
                out.push(violation("state", format!("{loc}.states[{si}]"), why));
            }
            if s.arrangement != ch.arrangement {
                out.push(violation(
                    "state-arrangement",
                    format!("{loc}.states[{si}]"),
                    format!(
                        "state labelled '{}' in channel '{}'",
                        s.arrangement, ch.arrangement
                    ),
                ));
            }
        }
        let expected = ch.states.len() * n_nodes;
        if ch.amplitudes.len() != expected {
            out.push(violation(
                "amplitude-shape",
                format!("{loc}.amplitudes"),
                format!(
                    "{} entries, expected {} states x {} nodes = {expected}",
                    ch.amplitudes.len(),
                    ch.states.len(),
                    n_nodes
                ),
            ));
        }
        if let Some(idx) = ch
            .amplitudes
            .iter()
            .position(|pair| pair.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()))
        {
            let (state, node) = idx
                .checked_div(n_nodes)
                .map_or((idx, 0), |state| (state, idx % n_nodes));
            out.push(violation(
                "finite",
                format!("{loc}.amplitudes[state {state}, node {node}]"),
                "non-finite amplitude",
            ));
        }
    }
    out
}
