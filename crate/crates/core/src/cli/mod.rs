//! Command-line front end.
//!
//! Exit codes: 0 success, 1 tolerance or convergence failure, 2 bad
//! arguments, 3 resource cap.

mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::lattice::{build_hamiltonian, dispersion_table, sign_gauge, ChainSpec, Topology};
use crate::optimizer::{optimize_couplings, OptimizeConfig};
use crate::pst::{fidelity_curve, hopping_matrix, linspace, pst_couplings, pst_hamiltonian, transfer_time, TransferReport};
use crate::spinchain::{single_excitation_sector, xy_chain_hamiltonian, SectorMap};
use crate::weyl::{verify_shift_identity, WeylPair};
use output::{float, float_list, Document};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Largest register `sector-check` will build.
pub const SECTOR_MAX_QUBITS: usize = 10;

const DISPERSION_TOL: f64 = 1e-10;
const WEYL_TOL: f64 = 1e-10;
const PST_TOL: f64 = 1e-8;
const SECTOR_TOL: f64 = 1e-12;
const OPTIMIZE_MIN_FIDELITY: f64 = 0.999;

#[derive(Debug, Parser)]
#[command(name = "qwire", version, about = "Quantum signal transfer in lattices and spin chains")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output format; curves default to csv, reports to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TopologyArg {
    Ring,
    Line,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InitArg {
    Uniform,
    Random,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare tight-binding eigenvalues with the cosine band.
    Dispersion(DispersionArgs),
    /// Check the shift/clock algebra and the shift generated by the
    /// equidistant Hamiltonian.
    WeylCheck(WeylArgs),
    /// Sample end-to-end transfer fidelity of an engineered or uniform chain.
    Pst(PstArgs),
    /// Compare the one-excitation block of the XY chain with the hopping model.
    SectorCheck(SectorArgs),
    /// Search for couplings that maximize transfer at a fixed time.
    Optimize(OptimizeArgs),
}

#[derive(Debug, Args)]
struct DispersionArgs {
    #[arg(long, value_enum, default_value = "ring")]
    topology: TopologyArg,
    #[arg(long)]
    d: usize,
    #[arg(long = "E0", default_value_t = 0.0, allow_negative_numbers = true)]
    e0: f64,
    #[arg(long = "A", default_value_t = 1.0, allow_negative_numbers = true)]
    a: f64,
}

#[derive(Debug, Args)]
struct WeylArgs {
    #[arg(long)]
    d: usize,
    /// Level spacing of the equidistant Hamiltonian.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    theta: f64,
}

#[derive(Debug, Args)]
struct PstArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    vartheta: f64,
    /// End of the time grid; defaults to one period.
    #[arg(long, allow_negative_numbers = true)]
    t_max: Option<f64>,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Use equal couplings `vartheta` on every bond.
    #[arg(long)]
    uniform: bool,
}

#[derive(Debug, Args)]
struct SectorArgs {
    /// Number of qubits.
    #[arg(long)]
    n: usize,
    /// Use the perfect-transfer profile `A sqrt(j (n - j))`.
    #[arg(long, conflicts_with = "seed")]
    pst: bool,
    #[arg(long = "A", default_value_t = 1.0, allow_negative_numbers = true)]
    a: f64,
    /// Draw couplings uniformly from `[-2A, 2A]` with this seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct OptimizeArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2, allow_negative_numbers = true)]
    t_target: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-10, allow_negative_numbers = true)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "uniform")]
    init: InitArg,
}

/// Error carried back to [`run`] with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn io(e: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_TOLERANCE,
            message: format!("i/o failure: {e}"),
        }
    }

    fn library(context: &str, e: Error) -> Self {
        let code = match e {
            Error::RegisterTooLarge { .. } => EXIT_CAP,
            Error::DimensionTooSmall { .. }
            | Error::InvalidParameter { .. }
            | Error::BadCouplingCount { .. }
            | Error::ZeroTheta
            | Error::IndexOutOfRange { .. }
            | Error::DimensionMismatch { .. } => EXIT_USAGE,
            _ => EXIT_TOLERANCE,
        };
        Self {
            code,
            message: format!("{context}: {e}"),
        }
    }
}

/// Outcome of a command: the document to write, a summary for stderr and
/// the exit code once the document is out.
struct Outcome {
    document: Document,
    summary: String,
    code: i32,
}

fn finite(name: &str, x: f64) -> Result<f64, Failure> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Failure::usage(format!("--{name} must be finite")))
    }
}

fn positive(name: &str, x: f64) -> Result<f64, Failure> {
    if finite(name, x)? > 0.0 {
        Ok(x)
    } else {
        Err(Failure::usage(format!("--{name} must be positive")))
    }
}

fn at_least(name: &str, found: usize, min: usize) -> Result<usize, Failure> {
    if found >= min {
        Ok(found)
    } else {
        Err(Failure::usage(format!("--{name} must be at least {min}, got {found}")))
    }
}

/// Parse `args` (program name first), run the command and return its exit
/// code. Results go to `--output` or `stdout`; diagnostics go to `stderr`.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Dispersion(a) => dispersion(a, cli.format.unwrap_or(Format::Csv)),
        Command::WeylCheck(a) => weyl_check(a, cli.format.unwrap_or(Format::Json)),
        Command::Pst(a) => pst(a, cli.format.unwrap_or(Format::Csv)),
        Command::SectorCheck(a) => sector_check(a, cli.format.unwrap_or(Format::Json)),
        Command::Optimize(a) => optimize(a, cli.format.unwrap_or(Format::Json)),
    };
    let outcome = result.and_then(|o| {
        o.document.emit(cli.output.as_deref(), stdout)?;
        Ok((o.summary, o.code))
    });
    match outcome {
        Ok((summary, code)) => {
            let _ = writeln!(stderr, "{summary}");
            code
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

/// Report rendered as one JSON object, or as a single-row CSV with the same
/// keys (lists joined with `;`).
fn report<S: Serialize>(format: Format, value: &S, header: &[&str], row: Vec<String>) -> Result<Document, Failure> {
    match format {
        Format::Json => Document::json(value),
        Format::Csv => Document::csv(header, [row]),
    }
}

#[derive(Serialize)]
struct ResidualReport {
    d: usize,
    residual: f64,
}

fn dispersion(args: &DispersionArgs, format: Format) -> Result<Outcome, Failure> {
    at_least("d", args.d, 2)?;
    let e0 = finite("E0", args.e0)?;
    let a = finite("A", args.a)?;
    let topology = match args.topology {
        TopologyArg::Ring => Topology::Ring,
        TopologyArg::Line => Topology::Line,
    };
    let spec = ChainSpec::uniform(args.d, topology, e0, a).map_err(|e| Failure::library("dispersion", e))?;
    let rows = dispersion_table(&spec).map_err(|e| Failure::library("dispersion", e))?;
    let residual = rows.iter().fold(0.0f64, |m, r| m.max(r.deviation));
    let document = match format {
        Format::Csv => Document::csv(
            &["j", "kb", "energy", "eigenvalue", "deviation"],
            rows.iter().map(|r| {
                vec![
                    r.j.to_string(),
                    float(r.kb),
                    float(r.energy),
                    float(r.eigenvalue),
                    float(r.deviation),
                ]
            }),
        )?,
        Format::Json => Document::json(&ResidualReport { d: args.d, residual })?,
    };
    let ok = residual <= DISPERSION_TOL;
    Ok(Outcome {
        document,
        summary: format!(
            "dispersion d={} max deviation {residual:e} ({})",
            args.d,
            if ok { "ok" } else { "FAILED" }
        ),
        code: if ok { EXIT_OK } else { EXIT_TOLERANCE },
    })
}

#[derive(Serialize)]
struct WeylReport {
    d: usize,
    phase_re: f64,
    phase_im: f64,
    residual: f64,
}

fn weyl_check(args: &WeylArgs, format: Format) -> Result<Outcome, Failure> {
    at_least("d", args.d, 2)?;
    let theta = positive("theta", args.theta)?;
    let pair = WeylPair::<f64>::new(args.d).map_err(|e| Failure::library("weyl-check", e))?;
    let cert = pair.certify();
    let shift = verify_shift_identity(args.d, theta).map_err(|e| Failure::library("weyl-check", e))?;
    let residual = [
        cert.shift_power_residual,
        cert.clock_power_residual,
        cert.phase_order_residual,
        shift.residual,
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    let value = WeylReport {
        d: args.d,
        phase_re: pair.commutation_phase.re,
        phase_im: pair.commutation_phase.im,
        residual,
    };
    let document = report(
        format,
        &value,
        &["d", "phase_re", "phase_im", "residual"],
        vec![
            value.d.to_string(),
            float(value.phase_re),
            float(value.phase_im),
            float(value.residual),
        ],
    )?;
    let ok = residual <= WEYL_TOL && cert.min_lower_power_gap > WEYL_TOL;
    Ok(Outcome {
        document,
        summary: format!(
            "weyl-check d={}: UV = ({:.15}, {:.15}) VU; shift^d residual {:e}, clock^d residual {:e}; \
             exp(-iH dt) = ({:.15}, {:.15}) U with residual {:e} ({})",
            args.d,
            value.phase_re,
            value.phase_im,
            cert.shift_power_residual,
            cert.clock_power_residual,
            shift.global_phase.re,
            shift.global_phase.im,
            shift.residual,
            if ok { "ok" } else { "FAILED" }
        ),
        code: if ok { EXIT_OK } else { EXIT_TOLERANCE },
    })
}

fn pst(args: &PstArgs, format: Format) -> Result<Outcome, Failure> {
    let d = at_least("d", args.d, 2)?;
    let vartheta = positive("vartheta", args.vartheta)?;
    let t_max = positive("t-max", args.t_max.unwrap_or(std::f64::consts::PI / vartheta))?;
    let samples = at_least("samples", args.samples, 2)?;
    let times = linspace(0.0, t_max, samples);
    let lib = |e| Failure::library("pst", e);

    let h = if args.uniform {
        hopping_matrix(&vec![vartheta; d - 1])
    } else {
        pst_hamiltonian(d, vartheta, 1.0).map_err(lib)?
    };
    let curve = fidelity_curve(&h, &times, 0, d - 1).map_err(lib)?;
    let (report, code) = if args.uniform {
        let (t_peak, f_peak) = curve.peak().expect("at least two samples");
        let report = TransferReport {
            d,
            vartheta,
            t_star: t_peak,
            peak_fidelity: f_peak,
            period: 2.0 * t_peak,
        };
        (report, EXIT_OK)
    } else {
        let report = transfer_time(d, vartheta).map_err(lib)?;
        let ok = report.peak_fidelity >= 1.0 - PST_TOL;
        (report, if ok { EXIT_OK } else { EXIT_TOLERANCE })
    };
    let report_line = String::from_utf8(Document::json(&report)?.into_bytes()).expect("utf-8 json");
    let document = match format {
        Format::Csv => Document::csv(
            &["t", "fidelity"],
            curve
                .times
                .iter()
                .zip(&curve.fidelities)
                .map(|(&t, &f)| vec![float(t), float(f)]),
        )?,
        Format::Json => Document::json(&report)?,
    };
    let label = if args.uniform { "uniform" } else { "engineered" };
    Ok(Outcome {
        document,
        summary: format!("pst {label} chain: {}", report_line.trim_end()),
        code,
    })
}

#[derive(Serialize)]
struct SectorReport {
    d: usize,
    residual: f64,
    couplings: Vec<f64>,
}

fn sector_check(args: &SectorArgs, format: Format) -> Result<Outcome, Failure> {
    let n = at_least("n", args.n, 2)?;
    if n > SECTOR_MAX_QUBITS {
        return Err(Failure {
            code: EXIT_CAP,
            message: format!("--n {n} exceeds the cap of {SECTOR_MAX_QUBITS} qubits"),
        });
    }
    let a = finite("A", args.a)?;
    let lib = |e| Failure::library("sector-check", e);

    let (couplings, profile) = if args.pst {
        (pst_couplings(n, a).map_err(lib)?, "perfect-transfer A sqrt(j(n-j))")
    } else if let Some(seed) = args.seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = (0..n - 1).map(|_| a * rng.gen_range(-2.0..=2.0)).collect();
        (c, "random")
    } else {
        (vec![a; n - 1], "uniform")
    };
    let full = xy_chain_hamiltonian(&couplings).map_err(lib)?;
    let map = SectorMap::new(n).map_err(lib)?;
    let block = single_excitation_sector(&full, &map).map_err(lib)?;
    let reference = if args.pst {
        pst_hamiltonian(n, a, 1.0).map_err(lib)?
    } else {
        let spec = ChainSpec::new(n, Topology::Line, 0.0, couplings.clone()).map_err(lib)?;
        sign_gauge(&build_hamiltonian(&spec))
    };
    let residual = block.max_abs_diff(&reference);
    let value = SectorReport {
        d: n,
        residual,
        couplings,
    };
    let document = report(
        format,
        &value,
        &["d", "residual", "couplings"],
        vec![n.to_string(), float(residual), float_list(&value.couplings)],
    )?;
    let ok = residual <= SECTOR_TOL;
    Ok(Outcome {
        document,
        summary: format!(
            "sector-check n={n} ({profile} profile): max deviation {residual:e} ({})",
            if ok { "ok" } else { "FAILED" }
        ),
        code: if ok { EXIT_OK } else { EXIT_TOLERANCE },
    })
}

#[derive(Serialize)]
struct OptimizeReport {
    d: usize,
    couplings: Vec<f64>,
    fidelity: f64,
    iterations: usize,
    converged: bool,
}

fn optimize(args: &OptimizeArgs, format: Format) -> Result<Outcome, Failure> {
    let d = at_least("d", args.d, 2)?;
    let config = OptimizeConfig {
        d,
        t_target: positive("t-target", args.t_target)?,
        max_iters: at_least("max-iters", args.max_iters, 1)?,
        tol: positive("tol", args.tol)?,
        seed: args.seed,
    };
    let initial: Vec<f64> = match args.init {
        InitArg::Uniform => vec![1.0; d - 1],
        InitArg::Random => {
            // separate stream from the restart jitter
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            rng.set_stream(1);
            (0..d - 1).map(|_| rng.gen_range(0.5..1.5)).collect()
        }
    };
    let result = optimize_couplings(&config, &initial).map_err(|e| Failure::library("optimize", e))?;
    let value = OptimizeReport {
        d,
        couplings: result.gauge_fixed(),
        fidelity: result.fidelity,
        iterations: result.iterations,
        converged: result.converged,
    };
    let document = report(
        format,
        &value,
        &["d", "couplings", "fidelity", "iterations", "converged"],
        vec![
            d.to_string(),
            float_list(&value.couplings),
            float(value.fidelity),
            value.iterations.to_string(),
            value.converged.to_string(),
        ],
    )?;
    let ok = result.converged && result.fidelity >= OPTIMIZE_MIN_FIDELITY;
    Ok(Outcome {
        document,
        summary: format!(
            "optimize d={d}: fidelity {} after {} iterations, raw couplings [{}] ({})",
            result.fidelity,
            result.iterations,
            float_list(&result.couplings).replace(';', ", "),
            if ok {
                "ok"
            } else if result.converged {
                "fidelity below target"
            } else {
                "not converged"
            }
        ),
        code: if ok { EXIT_OK } else { EXIT_TOLERANCE },
    })
}
