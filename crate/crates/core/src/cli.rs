//! Command-line front end. `main` only forwards to [`run`].
//!
//! Exit codes: 0 on success, 1 on a domain error, 2 on a usage error.
//! Angles are degrees at this boundary; numbers print in shortest
//! round-trip form so that printed values equal library values exactly.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;

use crate::control::{
    grid_oracle, ratio_extrema_with_tol, sigma_extrema, ControlRange, DEFAULT_SINGULAR_TOL,
};
use crate::error::{Error, Result};
use crate::io::{read_table, write_table};
use crate::kinematics::{kinematic_pair, parse_exact_decimal};
use crate::resonance::{width_lifetime, Conversion};
use crate::scan::{energy_grid, energy_scan, write_csv, ScanOptions};
use crate::scenario::ScenarioConfig;
use crate::table::{validate_table, AmplitudeTable};
use crate::xsection::{diff_xsec_matrix, schwartz_ratio, xsec_matrix, ControlParams, XsecMatrix};

/// Environment variable capping scan parallelism (0 = serial).
pub const THREADS_ENV: &str = "COHRES_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "cohres",
    version,
    about = "Coherent control of resonance-mediated cross sections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize an amplitude table from a scenario at one energy.
    Synth {
        #[arg(long)]
        config: PathBuf,
        /// Total energy in eV.
        #[arg(long, allow_negative_numbers = true)]
        energy: f64,
        #[arg(long)]
        out: PathBuf,
        /// Override the scenario's resonance/background mix.
        #[arg(long)]
        mix: Option<f64>,
    },
    /// Extrema of a channel cross section, or of a channel ratio with --den.
    Control {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        num: String,
        #[arg(long)]
        den: Option<String>,
        #[command(flatten)]
        angle: AngleArg,
        /// Also run the lattice oracle with N x N points.
        #[arg(long, value_name = "N")]
        oracle: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SINGULAR_TOL)]
        tol_singular: f64,
    },
    /// Schwartz ratio |σ12| / sqrt(σ11 σ22) of one channel.
    Schwartz {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        channel: String,
        #[command(flatten)]
        angle: AngleArg,
    },
    /// Energy scan of a scenario, written as CSV.
    Scan {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        emin: f64,
        #[arg(long, allow_negative_numbers = true)]
        emax: f64,
        #[arg(long)]
        step: f64,
        /// Channel pair A,B; the ratio is A/B.
        #[arg(long)]
        pair: String,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SINGULAR_TOL)]
        tol_singular: f64,
    },
    /// Check a table file against every table invariant.
    Validate {
        #[arg(long)]
        table: PathBuf,
    },
    /// Kinetic energies and wavenumbers of the two superposed components.
    Kinematics {
        /// Internal energy of state 1 (eV, plain decimal).
        #[arg(long)]
        e1: String,
        #[arg(long)]
        e2: String,
        /// Relative kinetic energy of component 1 (eV).
        #[arg(long)]
        ek1: String,
        /// Reduced mass in amu.
        #[arg(long, conflicts_with_all = ["config", "reactants"])]
        mu: Option<String>,
        /// Scenario whose `masses` table supplies the reactant masses.
        #[arg(long, requires = "reactants")]
        config: Option<PathBuf>,
        /// Two mass labels, e.g. F,HD.
        #[arg(long, requires = "config")]
        reactants: Option<String>,
    },
    /// Convert between resonance width (eV) and lifetime (fs).
    Width {
        #[arg(
            long,
            conflicts_with = "width_ev",
            required_unless_present = "width_ev"
        )]
        lifetime_fs: Option<f64>,
        #[arg(long)]
        width_ev: Option<f64>,
    },
}

#[derive(Debug, Args)]
struct AngleArg {
    /// Use the differential cross section at the grid node nearest this angle (degrees).
    #[arg(long)]
    angle: Option<f64>,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type CliResult = std::result::Result<(), Failure>;

/// Runs the command line; returns the process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let text = e.to_string();
                    let first = text
                        .lines()
                        .next()
                        .unwrap_or("usage error")
                        .trim_start_matches("error: ");
                    let _ = writeln!(err, "cohres: {first}");
                    2
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "cohres: {msg}");
            2
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "cohres: {}", one_line(&e));
            1
        }
    }
}

fn one_line(e: &Error) -> String {
    e.to_string().replace('\n', " ")
}

fn io_err(path: &std::path::Path) -> impl Fn(std::io::Error) -> Failure + '_ {
    move |source| {
        Failure::Domain(Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Synth {
            config,
            energy,
            out: path,
            mix,
        } => {
            let mut cfg = ScenarioConfig::load(&config)?;
            if let Some(m) = mix {
                cfg.mix = m;
                cfg.validate()?;
            }
            let table = cfg.synth(energy)?;
            write_table(&table, &path)?;
            emit(
                out,
                format_args!(
                    "wrote {} (E = {} eV, {} channels, {} angle nodes)\n",
                    path.display(),
                    table.energy,
                    table.channels.len(),
                    table.grid.len()
                ),
            )
        }
        Command::Control {
            table,
            num,
            den,
            angle,
            oracle,
            tol_singular,
        } => {
            if !(tol_singular > 0.0) {
                return Err(Failure::Usage(format!(
                    "--tol-singular must be positive (got {tol_singular})"
                )));
            }
            let t = read_table(&table)?;
            let node = resolve_angle(&t, angle.angle, out)?;
            let a = channel_matrix(&t, &num, node)?;
            emit(out, format_args!("energy_eV {}\n", t.energy))?;
            match den {
                None => {
                    emit(
                        out,
                        format_args!("objective sigma {} {}\n", num, kind_word(node)),
                    )?;
                    let range = sigma_extrema(&a);
                    print_range(out, &range)?;
                    emit(
                        out,
                        format_args!("noncoherent {} {}\n", a.sigma11(), a.sigma22()),
                    )?;
                    if let Some(n) = oracle {
                        let o = grid_oracle(&a, None, n, n)?;
                        print_oracle(out, &o.range, o.skipped)?;
                    }
                }
                Some(den) => {
                    let b = channel_matrix(&t, &den, node)?;
                    emit(
                        out,
                        format_args!("objective ratio {}/{} {}\n", num, den, kind_word(node)),
                    )?;
                    let range = ratio_extrema_with_tol(&a, &b, tol_singular)?;
                    print_range(out, &range)?;
                    let (lo, hi) = crate::control::noncoherent_ratio_limits(&a, &b);
                    emit(out, format_args!("noncoherent {lo} {hi}\n"))?;
                    emit(out, format_args!("factor {}\n", range.factor()))?;
                    let nc = if lo > 0.0 { hi / lo } else { f64::INFINITY };
                    emit(out, format_args!("noncoherent_factor {nc}\n"))?;
                    if let Some(n) = oracle {
                        let o = grid_oracle(&a, Some(&b), n, n)?;
                        print_oracle(out, &o.range, o.skipped)?;
                    }
                }
            }
            Ok(())
        }
        Command::Schwartz {
            table,
            channel,
            angle,
        } => {
            let t = read_table(&table)?;
            let node = resolve_angle(&t, angle.angle, out)?;
            let m = channel_matrix(&t, &channel, node)?;
            emit(out, format_args!("schwartz {}\n", schwartz_ratio(&m)?))
        }
        Command::Scan {
            config,
            emin,
            emax,
            step,
            pair,
            out: path,
            tol_singular,
        } => {
            let (a, b) = pair
                .split_once(',')
                .filter(|(a, b)| !a.is_empty() && !b.is_empty())
                .ok_or_else(|| Failure::Usage(format!("--pair expects A,B (got '{pair}')")))?;
            if !(tol_singular > 0.0) {
                return Err(Failure::Usage(format!(
                    "--tol-singular must be positive (got {tol_singular})"
                )));
            }
            let threads = threads_from_env()?;
            let cfg = ScenarioConfig::load(&config)?;
            let energies = energy_grid(emin, emax, step)?;
            let rows = energy_scan(
                &cfg,
                &energies,
                (a, b),
                ScanOptions {
                    tol_singular,
                    threads,
                },
            )?;
            match path {
                Some(p) => {
                    let file = File::create(&p).map_err(io_err(&p))?;
                    let mut w = BufWriter::new(file);
                    write_csv(&rows, &mut w).map_err(io_err(&p))?;
                    w.flush().map_err(io_err(&p))?;
                    emit(
                        out,
                        format_args!("wrote {} ({} rows)\n", p.display(), rows.len()),
                    )
                }
                None => write_csv(&rows, out).map_err(|e| Failure::Usage(format!("stdout: {e}"))),
            }
        }
        Command::Validate { table } => {
            // Parse without the validation gate so every violation is listed.
            let t = match read_table(&table) {
                Ok(t) => t,
                Err(Error::Validation(v)) => {
                    for item in &v {
                        emit(out, format_args!("{item}\n"))?;
                    }
                    return Err(Error::Validation(v).into());
                }
                Err(e) => return Err(e.into()),
            };
            debug_assert!(validate_table(&t).is_empty());
            emit(out, format_args!("ok\n"))
        }
        Command::Kinematics {
            e1,
            e2,
            ek1,
            mu,
            config,
            reactants,
        } => {
            let mu = match (mu, config, reactants) {
                (Some(mu), _, _) => parse_exact_decimal(&mu)?,
                (None, Some(cfg), Some(pair)) => {
                    let cfg = ScenarioConfig::load(&cfg)?;
                    let (a, b) = pair.split_once(',').ok_or_else(|| {
                        Failure::Usage(format!("--reactants expects A,B (got '{pair}')"))
                    })?;
                    let mu = cfg.reduced_mass(a, b)?;
                    return kinematics_f64(out, &e1, &e2, &ek1, mu);
                }
                _ => {
                    return Err(Failure::Usage(
                        "give --mu, or --config with --reactants".into(),
                    ))
                }
            };
            let kin = kinematic_pair(
                parse_exact_decimal(&e1)?,
                parse_exact_decimal(&e2)?,
                parse_exact_decimal(&ek1)?,
                mu,
            )?;
            let f = |r: &crate::kinematics::ExactEnergy| r.to_f64().unwrap_or(f64::NAN);
            emit(
                out,
                format_args!("E_eV {} ({})\n", f(&kin.total), kin.total),
            )?;
            emit(out, format_args!("Ek1_eV {} ({})\n", f(&kin.ek1), kin.ek1))?;
            emit(out, format_args!("Ek2_eV {} ({})\n", f(&kin.ek2), kin.ek2))?;
            emit(
                out,
                format_args!(
                    "Ek1_minus_Ek2_eV {} ({})\n",
                    f(&kin.kinetic_offset()),
                    kin.kinetic_offset()
                ),
            )?;
            emit(
                out,
                format_args!("k1_per_A {}\nk2_per_A {}\n", kin.k1, kin.k2),
            )
        }
        Command::Width {
            lifetime_fs,
            width_ev,
        } => match (lifetime_fs, width_ev) {
            (Some(tau), None) => {
                let g = width_lifetime(tau, Conversion::LifetimeToWidth)?;
                emit(out, format_args!("width_eV {g}\n"))
            }
            (None, Some(g)) => {
                let tau = width_lifetime(g, Conversion::WidthToLifetime)?;
                emit(out, format_args!("lifetime_fs {tau}\n"))
            }
            _ => Err(Failure::Usage(
                "give exactly one of --lifetime-fs, --width-ev".into(),
            )),
        },
    }
}

fn kinematics_f64(out: &mut dyn Write, e1: &str, e2: &str, ek1: &str, mu: f64) -> CliResult {
    let p = |s: &str| parse_exact_decimal(s).map(|r| r.to_f64().unwrap_or(f64::NAN));
    let kin = kinematic_pair(p(e1)?, p(e2)?, p(ek1)?, mu)?;
    emit(out, format_args!("mu_amu {}\n", kin.mu))?;
    emit(
        out,
        format_args!(
            "E_eV {}\nEk1_eV {}\nEk2_eV {}\n",
            kin.total, kin.ek1, kin.ek2
        ),
    )?;
    emit(
        out,
        format_args!("Ek1_minus_Ek2_eV {}\n", kin.kinetic_offset()),
    )?;
    emit(
        out,
        format_args!("k1_per_A {}\nk2_per_A {}\n", kin.k1, kin.k2),
    )
}

fn threads_from_env() -> std::result::Result<usize, Failure> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) if v.trim().is_empty() => Ok(0),
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::Usage(format!(
                "{THREADS_ENV} must be a non-negative integer (got '{v}')"
            ))
        }),
    }
}

fn emit(out: &mut dyn Write, args: std::fmt::Arguments<'_>) -> CliResult {
    out.write_fmt(args)
        .map_err(|e| Failure::Usage(format!("output: {e}")))
}

fn kind_word(node: Option<usize>) -> &'static str {
    if node.is_some() {
        "differential"
    } else {
        "integral"
    }
}

fn resolve_angle(
    t: &AmplitudeTable<f64>,
    angle_deg: Option<f64>,
    out: &mut dyn Write,
) -> std::result::Result<Option<usize>, Failure> {
    let Some(deg) = angle_deg else {
        return Ok(None);
    };
    if !(0.0..=180.0).contains(&deg) {
        return Err(Failure::Usage(format!(
            "--angle must lie in [0, 180] degrees (got {deg})"
        )));
    }
    let node = t.grid.nearest_node(deg.to_radians()).ok_or_else(|| {
        Failure::Domain(Error::InvalidInput("table has an empty angle grid".into()))
    })?;
    emit(
        out,
        format_args!(
            "angle_deg {} node {}\n",
            t.grid.nodes[node].to_degrees(),
            node
        ),
    )?;
    Ok(Some(node))
}

fn channel_matrix(
    t: &AmplitudeTable<f64>,
    channel: &str,
    node: Option<usize>,
) -> Result<XsecMatrix<f64>> {
    match node {
        None => xsec_matrix(t, channel),
        Some(k) => diff_xsec_matrix(t, channel, k),
    }
}

fn print_params(out: &mut dyn Write, key: &str, value: f64, p: &ControlParams<f64>) -> CliResult {
    emit(
        out,
        format_args!(
            "{key} {value} s {} phi12_deg {}\n",
            p.s(),
            p.phi12_degrees()
        ),
    )
}

fn print_range(out: &mut dyn Write, r: &ControlRange<f64>) -> CliResult {
    print_params(out, "min", r.min_value, &r.params_at_min)?;
    print_params(out, "max", r.max_value, &r.params_at_max)?;
    emit(
        out,
        format_args!(
            "degenerate {}\nunbounded_max {}\nseparation {}\n",
            r.degenerate,
            r.unbounded_max,
            r.separation()
        ),
    )
}

fn print_oracle(out: &mut dyn Write, r: &ControlRange<f64>, skipped: usize) -> CliResult {
    print_params(out, "oracle_min", r.min_value, &r.params_at_min)?;
    print_params(out, "oracle_max", r.max_value, &r.params_at_max)?;
    emit(out, format_args!("oracle_skipped {skipped}\n"))
}
