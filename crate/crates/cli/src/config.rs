//! Argument parsing and validation.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use entropy_lab::entropy::Route;
use entropy_lab::io;
use entropy_lab::orlicz::{BaseTrace, EpsGrid, Profile, YoungFunction};

use crate::CliError;

/// Environment variable that seeds randomized self-tests.
pub const SEED_ENV: &str = "ENTROPY_LAB_SEED";

#[derive(Parser, Debug)]
#[command(name = "entropy-lab", version, about = "Relative entropy reports for matrix and discrete states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quantum relative entropy of density matrices.
    #[command(subcommand)]
    Quantum(QuantumCommand),
    /// Entropy identities for discrete distributions.
    #[command(subcommand)]
    Classical(ClassicalCommand),
    /// Orlicz norms and the regularized entropy.
    #[command(subcommand)]
    Orlicz(OrliczCommand),
    /// Tail traces in the model crossed product.
    #[command(subcommand)]
    Crossed(CrossedCommand),
    /// Route agreement on random states seeded by ENTROPY_LAB_SEED.
    Selftest(SelftestArgs),
}

#[derive(Subcommand, Debug)]
enum QuantumCommand {
    /// S(ρ|σ) along the selected routes.
    Rel(QuantumArgs),
    /// Raw limit-route quotients over the halving schedule.
    SweepT(QuantumArgs),
}

#[derive(Subcommand, Debug)]
enum ClassicalCommand {
    /// H-functional, KL, Gibbs and characteristic-function identities.
    Report(ClassicalArgs),
}

#[derive(Subcommand, Debug)]
enum OrliczCommand {
    /// Luxemburg norm of a discrete density.
    Norm(NormArgs),
    /// Regularized entropy of a density against the base trace.
    Regular(RegularArgs),
}

#[derive(Subcommand, Debug)]
enum CrossedCommand {
    /// τ(χ_(ε,∞)(a ⊗ g(e^t))) over an ε-grid.
    Tail(TailArgs),
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Report destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Acceptance tolerance; each subcommand has its own default.
    #[arg(long, value_parser = positive)]
    tol: Option<f64>,
    /// Record wall time in the elapsed_ms column instead of 0.
    #[arg(long)]
    timings: bool,
}

#[derive(Args, Debug)]
struct QuantumArgs {
    #[arg(long)]
    rho: PathBuf,
    #[arg(long)]
    sigma: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::All)]
    method: Method,
    /// First step of the halving schedule of the limit route.
    #[arg(long, default_value_t = 1e-2, value_parser = positive)]
    t0: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct ClassicalArgs {
    #[arg(long)]
    dist: Option<PathBuf>,
    #[arg(long = "ref")]
    reference: Option<PathBuf>,
    /// CSV `atom,energy[,weight]` for a Gibbs state.
    #[arg(long)]
    energies: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    beta: f64,
    /// Step of the symmetric differences.
    #[arg(long, default_value_t = 1e-4, value_parser = positive)]
    step: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct NormArgs {
    #[arg(long)]
    dist: PathBuf,
    #[arg(long, value_enum, default_value_t = Young::PsiLog)]
    young: Young,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct RegularArgs {
    /// Matrix JSON of the density `a` with τ_ω(a) = 1.
    #[arg(long)]
    density: PathBuf,
    /// Commuting reference density matrix; switches to S(ϑ|φ).
    #[arg(long)]
    sigma: Option<PathBuf>,
    #[arg(long, default_value = "1e-8:1e2:161")]
    eps_grid: String,
    #[arg(long, value_enum, default_value_t = Base::Normalized)]
    base: Base,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct TailArgs {
    /// Matrix JSON of the positive base element `a`.
    #[arg(long)]
    density: PathBuf,
    #[arg(long, default_value = "1e-3:1e3:13")]
    eps_grid: String,
    #[arg(long, value_enum, default_value_t = ProfileArg::Identity)]
    profile: ProfileArg,
    #[arg(long, value_enum, default_value_t = Base::Normalized)]
    base: Base,
    /// Apply the dual action θ_s before taking tails.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    shift: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    /// Random pairs per dimension.
    #[arg(long, default_value_t = 20)]
    pairs: usize,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    dims: Vec<usize>,
    #[command(flatten)]
    output: Output,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` must be positive and finite"))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Divergence,
    Limit,
    Araki,
    Interp,
    All,
}

impl Method {
    pub fn routes(self) -> Vec<Route> {
        match self {
            Method::Divergence => vec![Route::Divergence],
            Method::Limit => vec![Route::Limit],
            Method::Araki => vec![Route::Araki],
            Method::Interp => vec![Route::Interpolated],
            Method::All => Route::ALL.to_vec(),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Young {
    PsiLog,
    PsiEnt,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Base {
    Normalized,
    Counting,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ProfileArg {
    Identity,
    PhiLog,
    PhiEnt,
}

/// Everything a run needs, validated.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub task: Task,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub tol: Option<f64>,
    pub timings: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    QuantumRel {
        rho: PathBuf,
        sigma: PathBuf,
        routes: Vec<Route>,
        t0: f64,
    },
    SweepT {
        rho: PathBuf,
        sigma: PathBuf,
        t0: f64,
    },
    Classical {
        dist: Option<PathBuf>,
        reference: Option<PathBuf>,
        energies: Option<PathBuf>,
        beta: f64,
        step: f64,
    },
    OrliczNorm {
        dist: PathBuf,
        young: YoungFunction,
    },
    Regular {
        density: PathBuf,
        sigma: Option<PathBuf>,
        grid: EpsGrid,
        base: BaseTrace,
    },
    CrossedTail {
        density: PathBuf,
        grid: EpsGrid,
        profile: Profile,
        base: BaseTrace,
        shift: f64,
    },
    Selftest {
        seed: u64,
        pairs: usize,
        dims: Vec<usize>,
    },
}

fn existing(flag: &str, path: PathBuf) -> Result<PathBuf, CliError> {
    if path.is_file() {
        Ok(path)
    } else {
        Err(CliError::Usage(format!("--{flag}: no such file {}", path.display())))
    }
}

fn existing_opt(flag: &str, path: Option<PathBuf>) -> Result<Option<PathBuf>, CliError> {
    path.map(|p| existing(flag, p)).transpose()
}

fn grid(spec: &str) -> Result<EpsGrid, CliError> {
    io::parse_eps_grid(spec).map_err(|e| CliError::Usage(format!("--eps-grid: {e}")))
}

fn base(b: Base) -> BaseTrace {
    match b {
        Base::Normalized => BaseTrace::Normalized,
        Base::Counting => BaseTrace::Counting,
    }
}

/// Reads the self-test seed; unset means 0.
pub fn seed_from_env(value: Option<OsString>) -> Result<u64, CliError> {
    match value {
        None => Ok(0),
        Some(v) => v
            .to_str()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| CliError::Usage(format!("{SEED_ENV} must be an unsigned integer, got {v:?}"))),
    }
}

fn check_out(out: &Option<PathBuf>) -> Result<(), CliError> {
    if let Some(parent) = out.as_deref().and_then(Path::parent) {
        if !parent.as_os_str().is_empty() && !parent.is_dir() {
            return Err(CliError::Usage(format!("--out: directory {} does not exist", parent.display())));
        }
    }
    Ok(())
}

/// Parses `argv` (program name first). Help and version requests come back
/// as [`CliError::Clap`] so the caller decides how to print them.
pub fn parse_and_validate<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(CliError::Clap)?;
    let (task, output) = match cli.command {
        Command::Quantum(QuantumCommand::Rel(a)) => (
            Task::QuantumRel {
                rho: existing("rho", a.rho)?,
                sigma: existing("sigma", a.sigma)?,
                routes: a.method.routes(),
                t0: a.t0,
            },
            a.output,
        ),
        Command::Quantum(QuantumCommand::SweepT(a)) => (
            Task::SweepT {
                rho: existing("rho", a.rho)?,
                sigma: existing("sigma", a.sigma)?,
                t0: a.t0,
            },
            a.output,
        ),
        Command::Classical(ClassicalCommand::Report(a)) => {
            if a.dist.is_none() && a.energies.is_none() {
                return Err(CliError::Usage("classical report needs --dist or --energies".into()));
            }
            if a.reference.is_some() && a.dist.is_none() {
                return Err(CliError::Usage("--ref needs --dist".into()));
            }
            (
                Task::Classical {
                    dist: existing_opt("dist", a.dist)?,
                    reference: existing_opt("ref", a.reference)?,
                    energies: existing_opt("energies", a.energies)?,
                    beta: a.beta,
                    step: a.step,
                },
                a.output,
            )
        }
        Command::Orlicz(OrliczCommand::Norm(a)) => (
            Task::OrliczNorm {
                dist: existing("dist", a.dist)?,
                young: match a.young {
                    Young::PsiLog => YoungFunction::PsiLog,
                    Young::PsiEnt => YoungFunction::PsiEnt,
                },
            },
            a.output,
        ),
        Command::Orlicz(OrliczCommand::Regular(a)) => (
            Task::Regular {
                density: existing("density", a.density)?,
                sigma: existing_opt("sigma", a.sigma)?,
                grid: grid(&a.eps_grid)?,
                base: base(a.base),
            },
            a.output,
        ),
        Command::Crossed(CrossedCommand::Tail(a)) => {
            if !a.shift.is_finite() {
                return Err(CliError::Usage("--shift must be finite".into()));
            }
            (
                Task::CrossedTail {
                    density: existing("density", a.density)?,
                    grid: grid(&a.eps_grid)?,
                    profile: match a.profile {
                        ProfileArg::Identity => Profile::Identity,
                        ProfileArg::PhiLog => Profile::PhiLog,
                        ProfileArg::PhiEnt => Profile::PhiEnt,
                    },
                    base: base(a.base),
                    shift: a.shift,
                },
                a.output,
            )
        }
        Command::Selftest(a) => {
            if a.pairs == 0 || a.dims.is_empty() || a.dims.iter().any(|&d| !(1..=64).contains(&d)) {
                return Err(CliError::Usage("--pairs must be positive and --dims in 1..=64".into()));
            }
            (
                Task::Selftest {
                    seed: seed_from_env(std::env::var_os(SEED_ENV))?,
                    pairs: a.pairs,
                    dims: a.dims,
                },
                a.output,
            )
        }
    };
    check_out(&output.out)?;
    Ok(RunConfig {
        task,
        out: output.out,
        format: output.format,
        tol: output.tol,
        timings: output.timings,
    })
}
