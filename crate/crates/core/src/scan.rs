//! Energy scans of coherent and non-coherent control ranges.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::control::{
    noncoherent_ratio_limits, ratio_extrema_with_tol, sigma_extrema, ControlRange,
    DEFAULT_SINGULAR_TOL,
};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::scenario::ScenarioConfig;
use crate::table::AmplitudeTable;
use crate::xsection::{diff_xsec_matrix, schwartz_ratio, xsec_matrix, XsecMatrix};

/// Control summary of one product channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSummary<T> {
    pub channel: String,
    pub sigma_min: T,
    pub sigma_max: T,
    pub sigma_11: T,
    pub sigma_22: T,
    pub schwartz: T,
}

/// One energy of a scan: both channels of the pair and their ratio A/B.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow<T> {
    pub energy: T,
    pub channels: [ChannelSummary<T>; 2],
    pub ratio: ControlRange<T>,
    pub r_nc_min: T,
    pub r_nc_max: T,
}

impl<T: Real> ScanRow<T> {
    /// Coherent control factor r_max / r_min.
    pub fn factor(&self) -> T {
        self.ratio.factor()
    }

    /// Non-coherent factor over s ∈ {0, 1}.
    pub fn factor_nc(&self) -> T {
        if self.r_nc_min > T::zero() {
            self.r_nc_max / self.r_nc_min
        } else {
            T::infinity()
        }
    }

    /// The coherent ranges contain the non-coherent ones.
    pub fn is_nested(&self) -> bool {
        let slack = T::tol(1e-9);
        let within = |lo: T, a: T, b: T, hi: T| {
            let scale = hi.abs().max(T::min_positive_value());
            lo <= a.min(b) + slack * scale && a.max(b) <= hi + slack * scale
        };
        let channels_ok = self
            .channels
            .iter()
            .all(|c| within(c.sigma_min, c.sigma_11, c.sigma_22, c.sigma_max));
        let r = &self.ratio;
        let ratio_ok = if r.unbounded_max {
            r.min_value <= self.r_nc_min * (T::one() + slack)
        } else {
            within(r.min_value, self.r_nc_min, self.r_nc_max, r.max_value)
        };
        channels_ok && ratio_ok
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// det B ≤ tol · tr(B)² marks an unbounded ratio.
    pub tol_singular: f64,
    /// Worker threads; 0 runs serially.
    pub threads: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            tol_singular: DEFAULT_SINGULAR_TOL,
            threads: 0,
        }
    }
}

fn summarize<T: Real>(m: &XsecMatrix<T>) -> Result<ChannelSummary<T>> {
    let range = sigma_extrema(m);
    Ok(ChannelSummary {
        channel: m.channel().to_string(),
        sigma_min: range.min_value,
        sigma_max: range.max_value,
        sigma_11: m.sigma11(),
        sigma_22: m.sigma22(),
        schwartz: schwartz_ratio(m)?,
    })
}

/// Scan row from one table: integral matrices, or differential ones at `node`.
pub fn table_row<T: Real>(
    table: &AmplitudeTable<T>,
    pair: (&str, &str),
    node: Option<usize>,
    tol_singular: T,
) -> Result<ScanRow<T>> {
    let matrix = |ch: &str| match node {
        None => xsec_matrix(table, ch),
        Some(k) => diff_xsec_matrix(table, ch, k),
    };
    let a = matrix(pair.0)?;
    let b = matrix(pair.1)?;
    let ratio = ratio_extrema_with_tol(&a, &b, tol_singular)?;
    let (r_nc_min, r_nc_max) = noncoherent_ratio_limits(&a, &b);
    Ok(ScanRow {
        energy: table.energy,
        channels: [summarize(&a)?, summarize(&b)?],
        ratio,
        r_nc_min,
        r_nc_max,
    })
}

/// One row per energy, in input order.
pub fn energy_scan<T: Real>(
    config: &ScenarioConfig,
    energies: &[T],
    pair: (&str, &str),
    opts: ScanOptions,
) -> Result<Vec<ScanRow<T>>> {
    if energies.is_empty() {
        return Err(Error::InvalidInput("no scan energies".into()));
    }
    if energies.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput(
            "scan energies must be strictly increasing".into(),
        ));
    }
    config.validate()?;
    let tol = T::lit(opts.tol_singular);
    let row = |&e: &T| {
        config
            .synth(e)
            .and_then(|t| table_row(&t, pair, None, tol))
            .map_err(|source| Error::AtEnergy {
                energy: e.to_f64().unwrap_or(f64::NAN),
                source: Box::new(source),
            })
    };
    if opts.threads == 0 {
        return energies.iter().map(row).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    pool.install(|| energies.par_iter().map(row).collect())
}

/// `emin, emin + step, …` up to `emax` inclusive (within step/2 rounding).
pub fn energy_grid(emin: f64, emax: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::NonPositive {
            what: "energy step",
            value: step,
        });
    }
    if !(emin.is_finite() && emax.is_finite() && emax >= emin) {
        return Err(Error::InvalidInput(format!(
            "bad energy range [{emin}, {emax}]"
        )));
    }
    let n = ((emax - emin) / step + 0.5).floor() as usize + 1;
    // Snap to a decimal lattice well below the step so 0.25 + 7 * 0.005 prints as 0.285.
    let q = 10f64.powi(9 - step.log10().floor() as i32);
    Ok((0..n)
        .map(|i| ((emin + i as f64 * step) * q).round() / q)
        .collect())
}

pub const CSV_HEADER: &str = "energy_eV,\
A_sigma_min,A_sigma_max,A_sigma_11,A_sigma_22,A_schwartz,\
B_sigma_min,B_sigma_max,B_sigma_11,B_sigma_22,B_schwartz,\
r_min,s_at_rmin,phi_at_rmin_deg,r_max,s_at_rmax,phi_at_rmax_deg,\
r_nc_min,r_nc_max,R,R_nc";

/// Writes the scan as CSV. Numbers use shortest round-trip decimal form;
/// an unbounded maximum prints as `inf`.
pub fn write_csv<T: Real, W: Write>(rows: &[ScanRow<T>], mut w: W) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for row in rows {
        write!(w, "{}", row.energy)?;
        for c in &row.channels {
            write!(
                w,
                ",{},{},{},{},{}",
                c.sigma_min, c.sigma_max, c.sigma_11, c.sigma_22, c.schwartz
            )?;
        }
        let r = &row.ratio;
        writeln!(
            w,
            ",{},{},{},{},{},{},{},{},{},{}",
            r.min_value,
            r.params_at_min.s(),
            r.params_at_min.phi12_degrees(),
            r.max_value,
            r.params_at_max.s(),
            r.params_at_max.phi12_degrees(),
            row.r_nc_min,
            row.r_nc_max,
            row.factor(),
            row.factor_nc()
        )?;
    }
    Ok(())
}
