//! Command-line front end: argument parsing, commands and table reproduction.

pub mod commands;
pub mod fixtures;
pub mod reproduce;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};

pub use commands::{
    cmd_optimize, cmd_reproduce, cmd_smoothing_factor, cmd_solve, cmd_two_grid, execute, Lambda0Policy, Objective,
    OptimizeRequest, OptimizeResult, Outcome, ProblemRequest, Report, ReproduceRequest, Request, ResolvedSmoother,
    SmootherRequest, SmoothingRequest, SmoothingResult, SolveRequest, SolveResult, StencilChoice, TwoGridRequest,
    TwoGridResult,
};
pub use fixtures::{published, table, TableFixture, TABLE_IDS};
pub use reproduce::{reproduce_table, CellDiff, RateSummary, ReproduceOptions, TableReport};

use crate::error::{Error, Result};
use crate::lfa::CoarseOperatorMode;
use crate::mg::CycleKind;
use crate::poly::Family;
use crate::symbol::{FrequencySampling, PreconditionerKind};

#[derive(Debug, Parser)]
#[command(name = "polysmooth", version, about = "Polynomial multigrid smoothers: analysis, optimization and solves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Smoothing factor μ over the high frequencies.
    SmoothingFactor(SmoothingArgs),
    /// Two-grid convergence factor from local Fourier analysis.
    TwoGrid(TwoGridArgs),
    /// Measured asymptotic convergence rate of a multigrid cycle.
    Solve(SolveArgs),
    /// Optimal λ₀ or minimal degree.
    Optimize(OptimizeArgs),
    /// Recompute a published table and compare every cell.
    Reproduce(ReproduceArgs),
    /// Re-run the request stored in a JSON report.
    Rerun(RerunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StencilKind {
    Fd2d,
    Fd3d,
    Tri,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    #[arg(long, value_enum, default_value = "fd2d")]
    pub stencil: StencilKind,
    /// JSON stencil document; replaces --stencil.
    #[arg(long)]
    pub stencil_file: Option<PathBuf>,
    /// First base angle of the triangulation, radians.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Second base angle of the triangulation, radians.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Named angles: equilateral, isosceles-80, right.
    #[arg(long)]
    pub angles: Option<String>,
    #[arg(long, default_value = "jacobi")]
    pub preconditioner: PreconditionerKind,
    /// Coarsening exponent: the coarse mesh width is 2^k h.
    #[arg(long)]
    pub k: u32,
    /// Frequency samples per axis.
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    /// Offset of the sampling lattice in units of the sample spacing.
    #[arg(long, default_value_t = 0.5)]
    pub offset: f64,
}

#[derive(Debug, Args)]
pub struct SmootherArgs {
    /// cheb, sa or ba1x.
    #[arg(long)]
    pub family: Family,
    #[arg(long)]
    pub degree: Option<usize>,
    /// Choose the minimal BA1x degree reaching this damping instead of --degree.
    #[arg(long)]
    pub rho_target: Option<f64>,
    /// auto (symbol minimum), opt (ba1x endpoint minimizing μ) or a number.
    #[arg(long, default_value = "auto")]
    pub lambda0: Lambda0Policy,
    /// Overrides the symbol maximum.
    #[arg(long)]
    pub lambda1: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SmoothingArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub smoother: SmootherArgs,
    /// Smoothing steps ν.
    #[arg(long, default_value_t = 1)]
    pub iterations: u32,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TwoGridArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub smoother: SmootherArgs,
    #[arg(long, default_value_t = 1)]
    pub nu1: u32,
    #[arg(long, default_value_t = 0)]
    pub nu2: u32,
    /// galerkin or rediscretized; both when absent.
    #[arg(long)]
    pub coarse: Option<CoarseOperatorMode>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub smoother: SmootherArgs,
    /// Interior points per axis on the finest grid.
    #[arg(long, default_value_t = 255)]
    pub n: usize,
    /// tg, v or w.
    #[arg(long, default_value = "v")]
    pub cycle: CycleKind,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub pre: u32,
    #[arg(long, default_value_t = 1)]
    pub post: u32,
    #[arg(long, default_value = "rediscretized")]
    pub coarse: CoarseOperatorMode,
    #[arg(long, default_value_t = 100)]
    pub iterations: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// smoothing, twogrid or degree.
    #[arg(long)]
    pub objective: Objective,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, value_enum, default_value = "fd2d")]
    pub stencil: StencilKind,
    #[arg(long)]
    pub stencil_file: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub angles: Option<String>,
    #[arg(long, default_value = "jacobi")]
    pub preconditioner: PreconditionerKind,
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    #[arg(long, default_value_t = 0.5)]
    pub offset: f64,
    #[arg(long, default_value = "ba1x")]
    pub family: Family,
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub lambda1: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub nu1: u32,
    #[arg(long, default_value_t = 0)]
    pub nu2: u32,
    #[arg(long)]
    pub coarse: Option<CoarseOperatorMode>,
    /// Target damping for the degree objective.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Condition number λ₁/λ₀ for the degree objective.
    #[arg(long)]
    pub kappa: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// 1, 2, 3, 4, 5, 5-3d, 6 or 7.
    #[arg(long)]
    pub table: String,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Companion JSON with per-cell differences; defaults to the CSV path with
    /// a .json extension when --output is given.
    #[arg(long)]
    pub diff: Option<PathBuf>,
    /// csv prints the table, json the full report.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long, default_value_t = 100)]
    pub iterations: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    /// Skip the W-cycle measurements of the two-grid tables.
    #[arg(long)]
    pub no_w_cycle: bool,
}

#[derive(Debug, Args)]
pub struct RerunArgs {
    /// A JSON report written by any command.
    #[arg(long)]
    pub report: PathBuf,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn stencil_choice(
    kind: StencilKind,
    file: &Option<PathBuf>,
    alpha: Option<f64>,
    beta: Option<f64>,
    angles: &Option<String>,
) -> Result<StencilChoice> {
    let explicit = alpha.is_some() || beta.is_some();
    if let Some(path) = file {
        if explicit || angles.is_some() {
            return Err(Error::InvalidConfig(
                "--stencil-file carries its own geometry; drop --alpha/--beta/--angles".into(),
            ));
        }
        return StencilChoice::from_file(path);
    }
    match kind {
        StencilKind::Tri => match (angles, alpha, beta) {
            (Some(_), _, _) if explicit => Err(Error::InvalidConfig(
                "give either --angles or --alpha/--beta, not both".into(),
            )),
            (Some(name), _, _) => StencilChoice::tri_preset(name),
            (None, Some(alpha), Some(beta)) => Ok(StencilChoice::Tri { alpha, beta }),
            _ => Err(Error::InvalidConfig(
                "--stencil tri needs --angles <preset> or both --alpha and --beta (radians)".into(),
            )),
        },
        _ if explicit || angles.is_some() => Err(Error::InvalidConfig(
            "--alpha/--beta/--angles apply to --stencil tri only".into(),
        )),
        StencilKind::Fd2d => Ok(StencilChoice::Fd2d),
        StencilKind::Fd3d => Ok(StencilChoice::Fd3d),
    }
}

impl ProblemArgs {
    pub fn to_request(&self) -> Result<ProblemRequest> {
        Ok(ProblemRequest {
            stencil: stencil_choice(self.stencil, &self.stencil_file, self.alpha, self.beta, &self.angles)?,
            preconditioner: self.preconditioner,
            k: self.k,
            sampling: FrequencySampling::new(self.samples, self.offset)?,
        })
    }
}

impl SmootherArgs {
    pub fn to_request(&self) -> SmootherRequest {
        SmootherRequest {
            family: self.family,
            degree: self.degree,
            rho_target: self.rho_target,
            lambda0: self.lambda0,
            lambda1: self.lambda1,
        }
    }
}

impl Command {
    /// The resolved request plus output settings.
    pub fn to_request(&self) -> Result<(Request, Format, Option<PathBuf>)> {
        Ok(match self {
            Command::SmoothingFactor(a) => (
                Request::SmoothingFactor(SmoothingRequest {
                    problem: a.problem.to_request()?,
                    smoother: a.smoother.to_request(),
                    iterations: a.iterations,
                }),
                a.out.format,
                a.out.output.clone(),
            ),
            Command::TwoGrid(a) => (
                Request::TwoGrid(TwoGridRequest {
                    problem: a.problem.to_request()?,
                    smoother: a.smoother.to_request(),
                    nu1: a.nu1,
                    nu2: a.nu2,
                    coarse: a.coarse,
                }),
                a.out.format,
                a.out.output.clone(),
            ),
            Command::Solve(a) => (
                Request::Solve(SolveRequest {
                    problem: a.problem.to_request()?,
                    smoother: a.smoother.to_request(),
                    n: a.n,
                    cycle: a.cycle,
                    levels: a.levels,
                    pre: a.pre,
                    post: a.post,
                    coarse: a.coarse,
                    iterations: a.iterations,
                    seed: a.seed,
                }),
                a.out.format,
                a.out.output.clone(),
            ),
            Command::Optimize(a) => {
                let problem = ProblemRequest {
                    stencil: stencil_choice(a.stencil, &a.stencil_file, a.alpha, a.beta, &a.angles)?,
                    preconditioner: a.preconditioner,
                    k: a.k,
                    sampling: FrequencySampling::new(a.samples, a.offset)?,
                };
                if a.objective != Objective::Degree && a.degree.is_none() {
                    return Err(Error::InvalidConfig(format!(
                        "--objective {} needs --degree",
                        match a.objective {
                            Objective::Smoothing => "smoothing",
                            _ => "twogrid",
                        }
                    )));
                }
                (
                    Request::Optimize(OptimizeRequest {
                        objective: a.objective,
                        problem,
                        smoother: SmootherRequest {
                            family: a.family,
                            degree: a.degree,
                            rho_target: None,
                            lambda0: Lambda0Policy::Auto,
                            lambda1: a.lambda1,
                        },
                        nu1: a.nu1,
                        nu2: a.nu2,
                        coarse: a.coarse,
                        rho: a.rho,
                        kappa: a.kappa,
                    }),
                    a.out.format,
                    a.out.output.clone(),
                )
            }
            Command::Reproduce(a) => (
                Request::Reproduce(ReproduceRequest {
                    table: a.table.clone(),
                    options: ReproduceOptions {
                        iterations: a.iterations,
                        seed: a.seed,
                        sampling: FrequencySampling::new(a.samples, 0.5)?,
                        w_cycle: !a.no_w_cycle,
                    },
                }),
                a.format,
                a.output.clone(),
            ),
            Command::Rerun(a) => {
                let text = std::fs::read_to_string(&a.report)
                    .map_err(|e| Error::Io(format!("cannot read report {}: {e}", a.report.display())))?;
                let report: Report = serde_json::from_str(&text)?;
                (report.request, a.out.format, a.out.output.clone())
            }
        })
    }
}

/// Text of a report in the requested format.
pub fn render(report: &Report, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => report.to_json()? + "\n",
        Format::Csv => report.to_csv(),
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
}

/// Runs a parsed command line. Returns the text destined for standard output.
pub fn run(cli: &Cli) -> Result<String> {
    let (request, format, output) = cli.command.to_request()?;
    let report = execute(request)?;
    let text = render(&report, format)?;
    if let Command::Reproduce(a) = &cli.command {
        let diff = a
            .diff
            .clone()
            .or_else(|| a.output.as_ref().map(|p| p.with_extension("json")));
        if let Some(d) = diff {
            write_text(&d, &report.to_json()?)?;
        }
    }
    match output {
        Some(path) => {
            write_text(&path, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

/// Parses `args` (without the program name) and runs them.
pub fn run_args<I, S>(args: I) -> Result<String>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("polysmooth")).chain(args.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    run(&cli)
}

/// Machine-readable error document for standard error.
pub fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": { "kind": kind, "message": message } }).to_string()
}
