//! On-disk amplitude tables.
//!
//! A table is one JSON document:
//!
//! ```text
//! {
//!   "energy_eV": 0.255,
//!   "initial": [{"arrangement": "F+HD", "v": 0, "j": 0, "m": 0}, ...],
//!   "angle_grid": {"nodes_rad": [...], "weights_sr": [...]},
//!   "channels": [
//!     {"arrangement": "D+HF", "states": [...],
//!      "amplitudes": [re1, im1, re2, im2, ...]}
//!   ]
//! }
//! ```
//!
//! `amplitudes` runs state-major, angle-minor, four numbers per entry.
//! Numbers are written in shortest round-trip form and parsed with correct
//! rounding, so read(write(t)) is bit-identical.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelState;
use crate::error::{Error, Result};
use crate::grid::AngleGrid;
use crate::table::{validate_table, AmplitudeTable, ProductChannel};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridFile {
    nodes_rad: Vec<f64>,
    weights_sr: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelFile {
    arrangement: String,
    states: Vec<ChannelState>,
    amplitudes: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    #[serde(rename = "energy_eV")]
    energy_ev: f64,
    initial: [ChannelState; 2],
    angle_grid: GridFile,
    channels: Vec<ChannelFile>,
}

pub(crate) fn malformed(path: &Path, e: &serde_json::Error) -> Error {
    Error::Malformed {
        path: path.to_path_buf(),
        locus: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn check(t: &AmplitudeTable<f64>) -> Result<()> {
    let v = validate_table(t);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(v))
    }
}

/// Serializes a valid table.
pub fn table_to_json(t: &AmplitudeTable<f64>) -> Result<String> {
    check(t)?;
    let file = TableFile {
        energy_ev: t.energy,
        initial: t.initial.clone(),
        angle_grid: GridFile {
            nodes_rad: t.grid.nodes.clone(),
            weights_sr: t.grid.weights.clone(),
        },
        channels: t
            .channels
            .iter()
            .map(|ch| ChannelFile {
                arrangement: ch.arrangement.clone(),
                states: ch.states.clone(),
                amplitudes: ch
                    .amplitudes
                    .iter()
                    .flat_map(|[a, b]| [a.re, a.im, b.re, b.im])
                    .collect(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("table serializes");
    text.push('\n');
    Ok(text)
}

/// Parses and validates a table; `origin` labels error messages.
pub fn table_from_json(text: &str, origin: &Path) -> Result<AmplitudeTable<f64>> {
    let file: TableFile = serde_json::from_str(text).map_err(|e| malformed(origin, &e))?;
    let mut channels = Vec::with_capacity(file.channels.len());
    for (ci, ch) in file.channels.into_iter().enumerate() {
        if ch.amplitudes.len() % 4 != 0 {
            return Err(Error::Malformed {
                path: origin.to_path_buf(),
                locus: format!("channels[{ci}].amplitudes"),
                message: format!("{} numbers is not a multiple of 4", ch.amplitudes.len()),
            });
        }
        let amplitudes = ch
            .amplitudes
            .chunks_exact(4)
            .map(|q| [Complex::new(q[0], q[1]), Complex::new(q[2], q[3])])
            .collect();
        channels.push(ProductChannel {
            arrangement: ch.arrangement,
            states: ch.states,
            amplitudes,
        });
    }
    let table = AmplitudeTable {
        energy: file.energy_ev,
        initial: file.initial,
        grid: AngleGrid::from_raw(file.angle_grid.nodes_rad, file.angle_grid.weights_sr),
        channels,
    };
    check(&table)?;
    Ok(table)
}

pub fn write_table(t: &AmplitudeTable<f64>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = table_to_json(t)?;
    fs::write(path, text).map_err(|source| Error::Io {
        path: PathBuf::from(path),
        source,
    })
}

pub fn read_table(path: impl AsRef<Path>) -> Result<AmplitudeTable<f64>> {
    let path = path.as_ref();
    table_from_json(&read_text(path)?, path)
}
