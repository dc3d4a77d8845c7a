//! Front door for the coefficient-asymptotics pipeline.
//!
//! Reads a plain-text spec file describing `Phi(z) = P(z) + Phi(Q(z))`,
//! validates the standing assumptions, and runs one of the pipeline stages:
//!
//! * `analyze`  - constants q, alpha, beta, Q'(q), Psi''(q)
//! * `spectrum` - normalized Fourier coefficients and Gamma-ratios
//! * `kfuncs`   - one period of the functions K_1..K_R
//! * `exact`    - exact coefficients phi_n and normalized values
//! * `compare`  - exact values against 1- and 2-term asymptotic estimates
//!
//! Exit codes: 0 success, 2 validation failure, 3 numerical failure.

mod commands;
mod specfile;

use clap::{Parser, ValueEnum};
use commands::Failure;
use funeq::{validate_spec, ProblemSpec};
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
enum Command {
    Analyze,
    Spectrum,
    Kfuncs,
    Exact,
    Compare,
}

#[derive(Parser, Debug)]
#[command(
    name = "funeq",
    version,
    about = "coefficient asymptotics for Phi(z) = P(z) + Phi(Q(z))"
)]
struct Args {
    /// Spec file with P, Q and an optional fixed-point bracket
    #[arg(long)]
    spec: PathBuf,

    /// Pipeline stage to run
    #[arg(long, value_enum)]
    command: Command,

    /// Line shift for the Fourier grid (Im z = -y)
    #[arg(long, default_value_t = 2.0)]
    y: f64,

    /// Grid size (power of two)
    #[arg(long = "grid-n", default_value_t = 4096)]
    grid_n: usize,

    /// Retained Fourier modes
    #[arg(long = "modes", default_value_t = 10)]
    modes: usize,

    /// Asymptotic terms K_1..K_R
    #[arg(long = "terms", default_value_t = 3)]
    terms: usize,

    /// Largest coefficient index for exact/compare tables
    #[arg(long = "n-max", default_value_t = 10000)]
    n_max: usize,

    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn validation(message: String) -> Failure {
    Failure { code: 2, message }
}

fn run(args: &Args) -> Result<(), Failure> {
    if !args.grid_n.is_power_of_two() {
        return Err(validation(format!(
            "grid size {} is not a power of two",
            args.grid_n
        )));
    }
    if args.modes == 0 || args.modes > args.grid_n / 4 {
        return Err(validation(format!(
            "modes must lie in 1..={}",
            args.grid_n / 4
        )));
    }
    if args.terms == 0 || args.n_max == 0 {
        return Err(validation("terms and n-max must be positive".into()));
    }

    let text = fs::read_to_string(&args.spec)
        .map_err(|e| validation(format!("cannot read {}: {e}", args.spec.display())))?;
    let parsed =
        specfile::parse(&text).map_err(|e| validation(format!("{}: {e}", args.spec.display())))?;

    let diagnostics = validate_spec(&parsed.p, &parsed.q, parsed.bracket);
    if !diagnostics.is_empty() {
        let list: Vec<String> = diagnostics.iter().map(|d| format!("  {d:?}")).collect();
        return Err(validation(format!(
            "spec violates standing assumptions:\n{}",
            list.join("\n")
        )));
    }
    let spec = ProblemSpec::new(parsed.p, parsed.q, parsed.bracket)
        .map_err(|e| validation(format!("spec rejected: {e}")))?;

    let mut sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(std::io::BufWriter::new(
            fs::File::create(path)
                .map_err(|e| validation(format!("cannot create {}: {e}", path.display())))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    };

    match args.command {
        Command::Analyze => commands::analyze(&spec, &mut sink),
        Command::Spectrum => commands::spectrum(&spec, args.y, args.grid_n, args.modes, &mut sink),
        Command::Kfuncs => commands::kfuncs(
            &spec,
            args.y,
            args.grid_n,
            args.modes,
            args.terms,
            &mut sink,
        ),
        Command::Exact => commands::exact(&spec, args.n_max, &mut sink),
        Command::Compare => commands::compare(
            &spec,
            args.y,
            args.grid_n,
            args.modes,
            args.terms,
            args.n_max,
            &mut sink,
        ),
    }?;
    sink.flush().map_err(|e| Failure {
        code: 3,
        message: format!("output stage failed: {e}"),
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
