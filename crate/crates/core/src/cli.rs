//! Command-line surface.
//!
//! Exit codes: 0 success/accept, 1 input or usage error, 2 solve failure or
//! certificate rejection. All report output is line-oriented and stable so
//! sweeps and golden-file tests can script against it.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::Tolerances;
use crate::error::SolveError;
use crate::instances::{
    gen_degenerate, gen_gadget, gen_random, DegenerateKind, Distribution, GadgetSpec,
};
use crate::io;
use crate::radon::radon_partition_exact;
use crate::scalar::format_rat;
use crate::solver::{solve_detailed, verify, SolverConfig, Strategy, VerifyMode};
use crate::sweep::{run_sweep, SweepCell, SweepConfig};

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_FAILURE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "tvtrans",
    about = "Solver and verifier for 2-part Tverberg transversals",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file (gadget, random, or degenerate family).
    Gen(GenArgs),
    /// Solve an instance and write a certificate.
    Solve(SolveArgs),
    /// Verify a certificate against its instance.
    Verify(VerifyArgs),
    /// Exact Radon partition of a points file.
    Radon(RadonArgs),
    /// Monte-Carlo sweep over (d, k) cells.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct GenArgs {
    /// The parallel-planes gadget with its known exact certificate.
    #[arg(long, conflicts_with_all = ["random", "degenerate"])]
    gadget: bool,
    /// Random instance.
    #[arg(long, conflicts_with = "degenerate")]
    random: bool,
    /// Degenerate family: collinear-set, repeated-point or coplanar-all.
    #[arg(long, value_name = "KIND")]
    degenerate: Option<DegenerateKind>,
    #[arg(short = 'd', long)]
    dim: usize,
    #[arg(short = 'k', long)]
    flat_dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Coordinate distribution for --random: unit-cube or gaussian.
    #[arg(long, default_value = "unit-cube")]
    dist: Distribution,
    /// Output path; the gadget writes a sibling <stem>.cert.json as well.
    #[arg(short = 'o', long, default_value = "instance.json")]
    output: PathBuf,
}

#[derive(Args, Clone)]
struct SolverFlags {
    /// Success threshold on the certificate residual.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// radon-trace, enumerate or sphere-sweep.
    #[arg(long, default_value = "radon-trace")]
    strategy: Strategy,
    #[arg(long, default_value_t = 48)]
    restarts: usize,
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
    /// Worker threads (default: logical processors).
    #[arg(long)]
    threads: Option<usize>,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    time_budget: Option<f64>,
}

impl SolverFlags {
    fn to_config(&self) -> SolverConfig {
        SolverConfig {
            strategy: self.strategy,
            restarts: self.restarts,
            max_iters: self.max_iters,
            tol_success: self.tol,
            seed: self.seed,
            time_budget: self.time_budget,
        }
    }

    fn install_pool<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T, String> {
        match self.threads {
            None => Ok(f()),
            Some(n) => {
                if n == 0 {
                    return Err("--threads must be positive".into());
                }
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| format!("thread pool: {e}"))?;
                Ok(pool.install(f))
            }
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file.
    instance: PathBuf,
    /// Certificate output path (default: <instance stem>.cert.json).
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(Args)]
struct VerifyArgs {
    instance: PathBuf,
    certificate: PathBuf,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Accept only exact (all-rational, residual exactly zero) certificates.
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct RadonArgs {
    /// Points file: {"points": [[coord, ...], ...]}.
    points: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Cells as d:k, comma separated (for example 2:1,3:1,3:2).
    #[arg(long, value_delimiter = ',', required = true)]
    cells: Vec<SweepCell>,
    /// Random trials per cell.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Extra degenerate trials per kind per cell.
    #[arg(long, default_value_t = 0)]
    degenerate_trials: usize,
    /// Machine-readable report path (optional).
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverFlags,
}

/// Entry point used by the binary.
pub fn run() -> ExitCode {
    run_from(std::env::args_os())
}

/// Testable entry point.
pub fn run_from<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Gen(args) => cmd_gen(&args),
        Command::Solve(args) => cmd_solve(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Radon(args) => cmd_radon(&args),
        Command::Sweep(args) => cmd_sweep(&args),
    };
    ExitCode::from(code)
}

fn input_error(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    EXIT_INPUT
}

fn read_file(path: &Path) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), u8> {
    std::fs::write(path, contents)
        .map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn sibling_cert_path(path: &Path) -> PathBuf {
    path.with_extension("cert.json")
}

fn cmd_gen(args: &GenArgs) -> u8 {
    let (d, k) = (args.dim, args.flat_dim);
    if d == 0 || k >= d {
        return input_error(format!("need 0 <= k <= d-1, got d={d}, k={k}"));
    }
    let modes = args.gadget as u8 + args.random as u8 + args.degenerate.is_some() as u8;
    if modes != 1 {
        return input_error("choose exactly one of --gadget, --random, --degenerate <kind>");
    }
    if args.gadget {
        let spec = match GadgetSpec::standard(d, k) {
            Ok(s) => s,
            Err(e) => return input_error(e),
        };
        let (instance, cert) = match gen_gadget(&spec) {
            Ok(pair) => pair,
            Err(e) => return input_error(e),
        };
        if write_file(&args.output, &io::instance_to_json(&instance)).is_err() {
            return EXIT_INPUT;
        }
        let cert_path = sibling_cert_path(&args.output);
        if write_file(&cert_path, &io::certificate_to_json(&cert)).is_err() {
            return EXIT_INPUT;
        }
        println!(
            "wrote {} and {}",
            args.output.display(),
            cert_path.display()
        );
        return EXIT_OK;
    }
    let instance = if let Some(kind) = args.degenerate {
        gen_degenerate(d, k, kind, args.seed)
    } else {
        gen_random(d, k, args.dist, args.seed)
    };
    match instance {
        Ok(instance) => {
            if write_file(&args.output, &io::instance_to_json(&instance)).is_err() {
                return EXIT_INPUT;
            }
            println!("wrote {}", args.output.display());
            EXIT_OK
        }
        Err(e) => input_error(e),
    }
}

fn cmd_solve(args: &SolveArgs) -> u8 {
    let text = match read_file(&args.instance) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let instance = match io::instance_from_json(&text) {
        Ok(i) => i,
        Err(e) => return input_error(e),
    };
    let cfg = args.solver.to_config();
    let outcome = match args.solver.install_pool(|| solve_detailed(&instance, &cfg)) {
        Ok(r) => r,
        Err(e) => return input_error(e),
    };
    let output = args
        .output
        .clone()
        .unwrap_or_else(|| sibling_cert_path(&args.instance));
    match outcome {
        Ok(solved) => {
            if write_file(&output, &io::certificate_to_json(&solved.certificate)).is_err() {
                return EXIT_INPUT;
            }
            println!(
                "solved: residual {:.3e} (restarts used {}), wrote {}",
                solved.certificate.residual,
                solved.restarts_used,
                output.display()
            );
            EXIT_OK
        }
        Err(SolveError::InvalidInstance(msg)) => input_error(msg),
        Err(e) => {
            let diagnostic = match &e {
                SolveError::Failed(report) => serde_json::json!({
                    "failure": {
                        "best_residual": report.best_residual,
                        "restarts": report.restarts,
                        "message": report.message,
                    }
                }),
                other => serde_json::json!({ "failure": { "message": other.to_string() } }),
            };
            let _ = write_file(&output, &(diagnostic.to_string() + "\n"));
            eprintln!("solve failed: {e}");
            EXIT_FAILURE
        }
    }
}

fn cmd_verify(args: &VerifyArgs) -> u8 {
    let instance = match read_file(&args.instance).and_then(|t| {
        io::instance_from_json(&t).map_err(input_error)
    }) {
        Ok(i) => i,
        Err(code) => return code,
    };
    let cert = match read_file(&args.certificate).and_then(|t| {
        io::certificate_from_json(&t).map_err(input_error)
    }) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let mode = if args.exact {
        VerifyMode::RequireExact
    } else {
        VerifyMode::Auto
    };
    match verify(&instance, &cert, args.tol, mode, &Tolerances::default()) {
        Ok(report) => {
            println!("{report}");
            if report.accepted {
                EXIT_OK
            } else {
                EXIT_FAILURE
            }
        }
        Err(e) => input_error(e),
    }
}

fn cmd_radon(args: &RadonArgs) -> u8 {
    let points = match read_file(&args.points).and_then(|t| {
        io::points_from_json(&t).map_err(input_error)
    }) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let m = points[0].len();
    if points.len() < m + 2 {
        return input_error(format!(
            "need at least {} points in R^{m}, got {}",
            m + 2,
            points.len()
        ));
    }
    let result = match radon_partition_exact(&points) {
        Ok(r) => r,
        Err(e) => return input_error(e),
    };
    let fmt_set = |v: &[usize]| -> String {
        let inner: Vec<String> = v.iter().map(|i| i.to_string()).collect();
        format!("{{{}}}", inner.join(", "))
    };
    let fmt_vec = |v: &[crate::scalar::Rat]| -> String {
        let inner: Vec<String> = v.iter().map(format_rat).collect();
        format!("({})", inner.join(", "))
    };
    println!(
        "partition: {} | {}",
        fmt_set(&result.part_pos),
        fmt_set(&result.part_neg)
    );
    println!("zeros: {}", fmt_set(&result.zeros));
    println!("point: {}", fmt_vec(&result.point));
    let dep = radon_partition_dependence(&points);
    println!("dependence: {}", fmt_vec(&dep));
    EXIT_OK
}

fn radon_partition_dependence(points: &[Vec<crate::scalar::Rat>]) -> Vec<crate::scalar::Rat> {
    crate::radon::affine_dependence_exact(points)
        .map(|d| d.coefficients)
        .unwrap_or_default()
}

fn cmd_sweep(args: &SweepArgs) -> u8 {
    let cfg = SweepConfig {
        cells: args.cells.clone(),
        trials: args.trials,
        degenerate_trials: args.degenerate_trials,
        seed: args.solver.seed,
        solver: args.solver.to_config(),
    };
    let report = match args.solver.install_pool(|| run_sweep(&cfg)) {
        Ok(r) => r,
        Err(e) => return input_error(e),
    };
    print!("{}", report.to_text());
    if let Some(path) = &args.output {
        if write_file(path, &report.to_json()).is_err() {
            return EXIT_INPUT;
        }
    }
    if report.total_failures() == 0 {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}
