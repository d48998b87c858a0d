//! Command implementations. Every command takes a serializable request and
//! returns a report that echoes it, so a saved report can be re-run.

use serde::{Deserialize, Serialize};
use std::path::Path;

use super::reproduce::{reproduce_table, ReproduceOptions, TableReport};
use crate::error::{Error, Result};
use crate::lfa::{
    optimal_lambda0_two_grid, rho_two_grid, smoothing_factor_on, AnalysisRecord, CoarseOperatorMode,
    Lambda0Optimum, TwoGridConfig,
};
use crate::mg::{measure_asymptotic_rate, CycleKind, CycleSpec, GridLevel, RateReport};
use crate::poly::{min_degree, optimal_lambda0_smoothing, Family, SmootherSpec};
use crate::symbol::{
    angle_preset, build_fd_laplace, build_fem_tri_laplace, lambda_bounds, FrequencySampling, GridGeometry,
    LambdaBounds, PreconditionerKind, Stencil,
};

/// Mesh width used for LFA stencils. Jacobi-preconditioned symbols do not
/// depend on it.
pub const LFA_MESH_WIDTH: f64 = 1.0 / 64.0;

/// Which operator to analyse.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StencilChoice {
    Fd2d,
    Fd3d,
    Tri { alpha: f64, beta: f64 },
    Custom { stencil: Stencil },
}

impl StencilChoice {
    /// Triangular stencil from a named angle preset.
    pub fn tri_preset(name: &str) -> Result<Self> {
        let (alpha, beta) = angle_preset(name).ok_or_else(|| {
            Error::InvalidConfig(format!(
                "unknown angle preset '{name}' (expected equilateral, isosceles-80 or right)"
            ))
        })?;
        Ok(StencilChoice::Tri { alpha, beta })
    }

    /// Reads a JSON stencil document.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("cannot read stencil file {}: {e}", path.display())))?;
        let stencil: Stencil = serde_json::from_str(&text)?;
        stencil.validate()?;
        Ok(StencilChoice::Custom { stencil })
    }

    pub fn resolve(&self) -> Result<Stencil> {
        match self {
            StencilChoice::Fd2d => build_fd_laplace(&GridGeometry::uniform(2, LFA_MESH_WIDTH)?),
            StencilChoice::Fd3d => build_fd_laplace(&GridGeometry::uniform(3, LFA_MESH_WIDTH)?),
            StencilChoice::Tri { alpha, beta } => build_fem_tri_laplace(*alpha, *beta, LFA_MESH_WIDTH),
            StencilChoice::Custom { stencil } => {
                stencil.validate()?;
                Ok(stencil.clone())
            }
        }
    }
}

/// How the left interval endpoint is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Lambda0Raw", into = "Lambda0Raw")]
pub enum Lambda0Policy {
    /// Minimum of the preconditioned symbol over the high frequencies.
    Auto,
    /// The BA1x endpoint that minimizes the smoothing factor.
    Opt,
    Value(f64),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Lambda0Raw {
    Value(f64),
    Name(String),
}

impl TryFrom<Lambda0Raw> for Lambda0Policy {
    type Error = Error;
    fn try_from(r: Lambda0Raw) -> Result<Self> {
        match r {
            Lambda0Raw::Value(v) => Ok(Lambda0Policy::Value(v)),
            Lambda0Raw::Name(s) => s.parse(),
        }
    }
}

impl From<Lambda0Policy> for Lambda0Raw {
    fn from(p: Lambda0Policy) -> Self {
        match p {
            Lambda0Policy::Auto => Lambda0Raw::Name("auto".into()),
            Lambda0Policy::Opt => Lambda0Raw::Name("opt".into()),
            Lambda0Policy::Value(v) => Lambda0Raw::Value(v),
        }
    }
}

impl std::str::FromStr for Lambda0Policy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(Lambda0Policy::Auto),
            "opt" | "optimal" => Ok(Lambda0Policy::Opt),
            other => other.parse::<f64>().map(Lambda0Policy::Value).map_err(|_| {
                Error::InvalidConfig(format!("--lambda0 expects auto, opt or a number, got '{s}'"))
            }),
        }
    }
}

/// Operator, preconditioner, coarsening and frequency sampling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemRequest {
    pub stencil: StencilChoice,
    pub preconditioner: PreconditionerKind,
    pub k: u32,
    pub sampling: FrequencySampling,
}

impl ProblemRequest {
    pub fn new(stencil: StencilChoice, k: u32) -> Self {
        ProblemRequest {
            stencil,
            preconditioner: PreconditionerKind::Jacobi,
            k,
            sampling: FrequencySampling::default(),
        }
    }
}

/// Smoother family, degree and interval policy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmootherRequest {
    pub family: Family,
    pub degree: Option<usize>,
    /// Target damping used to pick the minimal BA1x degree when `degree` is absent.
    pub rho_target: Option<f64>,
    pub lambda0: Lambda0Policy,
    pub lambda1: Option<f64>,
}

impl SmootherRequest {
    pub fn new(family: Family, degree: usize, lambda0: Lambda0Policy) -> Self {
        SmootherRequest {
            family,
            degree: Some(degree),
            rho_target: None,
            lambda0,
            lambda1: None,
        }
    }
}

/// A smoother with every automatic choice made.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedSmoother {
    pub spec: SmootherSpec,
    pub bounds: LambdaBounds,
    /// BA1x endpoint minimizing the smoothing factor at this degree.
    pub lambda0_star: Option<f64>,
}

pub fn resolve_smoother(stencil: &Stencil, problem: &ProblemRequest, req: &SmootherRequest) -> Result<ResolvedSmoother> {
    let bounds = lambda_bounds(stencil, problem.preconditioner, problem.k, &problem.sampling)?;
    let lambda1 = req.lambda1.unwrap_or(bounds.lambda1);
    let degree = match (req.degree, req.rho_target) {
        (Some(d), None) => d,
        (None, Some(rho)) => {
            if !(rho > 0.0 && rho < 1.0) {
                return Err(Error::InvalidConfig(format!("--rho-target must lie in (0, 1), got {rho}")));
            }
            min_degree(rho, lambda1 / bounds.lambda0, lambda1)
        }
        (Some(_), Some(_)) => {
            return Err(Error::InvalidConfig("give either --degree or --rho-target, not both".into()))
        }
        (None, None) => {
            return Err(Error::InvalidConfig(
                "--degree is required (or --rho-target to use the minimal BA1x degree)".into(),
            ))
        }
    };
    let lambda0_star = if bounds.lambda0 < lambda1 {
        optimal_lambda0_smoothing(degree, bounds.lambda0, lambda1).ok()
    } else {
        None
    };
    let lambda0 = match (req.lambda0, req.family) {
        (_, Family::Sa) => 0.0,
        (Lambda0Policy::Auto, _) => bounds.lambda0,
        (Lambda0Policy::Value(v), _) => v,
        (Lambda0Policy::Opt, Family::Ba1x) => lambda0_star.ok_or(Error::NoCrossing {
            lambda0: bounds.lambda0,
            lambda1,
        })?,
        (Lambda0Policy::Opt, Family::Chebyshev) => {
            return Err(Error::InvalidConfig(
                "--lambda0 opt is defined for ba1x; for chebyshev use `optimize --objective twogrid`".into(),
            ))
        }
    };
    let spec = SmootherSpec::new(req.family, degree, lambda0, lambda1)?;
    spec.check_admissible()?;
    Ok(ResolvedSmoother {
        spec,
        bounds,
        lambda0_star,
    })
}

fn modes_for(coarse: Option<CoarseOperatorMode>) -> Vec<CoarseOperatorMode> {
    match coarse {
        Some(m) => vec![m],
        None => vec![CoarseOperatorMode::Galerkin, CoarseOperatorMode::Rediscretized],
    }
}

// ---------------------------------------------------------------- smoothing

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothingRequest {
    pub problem: ProblemRequest,
    pub smoother: SmootherRequest,
    /// Number of smoothing steps ν.
    pub iterations: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothingResult {
    pub stencil: Stencil,
    pub smoother: ResolvedSmoother,
    pub lambda0: f64,
    pub lambda1: f64,
    pub lambda0_star: Option<f64>,
    pub degree: usize,
    pub mu: f64,
    pub argmax_x: f64,
}

pub fn cmd_smoothing_factor(req: &SmoothingRequest) -> Result<SmoothingResult> {
    let stencil = req.problem.stencil.resolve()?;
    let sm = resolve_smoother(&stencil, &req.problem, &req.smoother)?;
    let mut bounds = sm.bounds;
    bounds.lambda1 = sm.spec.lambda1;
    let rep = smoothing_factor_on(&sm.spec, &bounds, req.iterations.max(1));
    Ok(SmoothingResult {
        lambda0: sm.bounds.lambda0,
        lambda1: sm.spec.lambda1,
        lambda0_star: sm.lambda0_star,
        degree: sm.spec.degree,
        mu: rep.mu,
        argmax_x: rep.argmax_x,
        stencil,
        smoother: sm,
    })
}

// ---------------------------------------------------------------- two-grid

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoGridRequest {
    pub problem: ProblemRequest,
    pub smoother: SmootherRequest,
    pub nu1: u32,
    pub nu2: u32,
    /// Both modes are analysed when absent.
    pub coarse: Option<CoarseOperatorMode>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoGridResult {
    pub smoother: ResolvedSmoother,
    pub records: Vec<AnalysisRecord>,
}

pub fn cmd_two_grid(req: &TwoGridRequest) -> Result<TwoGridResult> {
    let stencil = req.problem.stencil.resolve()?;
    let sm = resolve_smoother(&stencil, &req.problem, &req.smoother)?;
    let mut bounds = sm.bounds;
    bounds.lambda1 = sm.spec.lambda1;
    let mu = smoothing_factor_on(&sm.spec, &bounds, (req.nu1 + req.nu2).max(1)).mu;
    let mut records = Vec::new();
    for mode in modes_for(req.coarse) {
        let mut cfg = TwoGridConfig::new(stencil.clone(), req.problem.preconditioner, sm.spec, req.problem.k)
            .with_mode(mode);
        cfg.nu1 = req.nu1;
        cfg.nu2 = req.nu2;
        cfg.sampling = req.problem.sampling;
        let r = rho_two_grid(&cfg)?;
        records.push(AnalysisRecord {
            config: cfg,
            lambda0: sm.spec.lambda0,
            lambda1: sm.spec.lambda1,
            lambda0_star: sm.lambda0_star,
            mu: Some(mu),
            rho_lfa: Some(r.rho),
            samples: r.samples,
            coarse_mode: mode,
        });
    }
    Ok(TwoGridResult { smoother: sm, records })
}

// ---------------------------------------------------------------- solve

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveRequest {
    pub problem: ProblemRequest,
    pub smoother: SmootherRequest,
    /// Interior points per axis on the finest grid.
    pub n: usize,
    pub cycle: CycleKind,
    pub levels: Option<usize>,
    pub pre: u32,
    pub post: u32,
    pub coarse: CoarseOperatorMode,
    pub iterations: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub smoother: ResolvedSmoother,
    pub cycle: CycleSpec,
    pub n: usize,
    pub rate: RateReport,
}

/// Operator on the unit square or cube with h = 1/(n+1).
fn solver_level(choice: &StencilChoice, n: usize) -> Result<GridLevel> {
    let h = 1.0 / (n + 1) as f64;
    match choice {
        StencilChoice::Fd2d => GridLevel::laplace(2, n),
        StencilChoice::Fd3d => GridLevel::laplace(3, n),
        StencilChoice::Tri { .. } => Err(Error::InvalidConfig(
            "the solver runs on rectangular grids only; analyse triangular grids with two-grid".into(),
        )),
        StencilChoice::Custom { stencil } => {
            let d = stencil.dimension();
            let g = GridGeometry::uniform(d, h)?;
            // keep the offsets, rescale the coefficients to the new mesh width
            let widths = stencil.geometry.mesh_widths();
            if widths.iter().any(|w| (w - widths[0]).abs() > 1e-12 * widths[0]) {
                return Err(Error::InvalidConfig("the solver needs equal mesh widths on every axis".into()));
            }
            let s = (widths[0] / h).powi(2);
            let entries = stencil.entries.iter().map(|e| (e.offset.clone(), e.coefficient * s)).collect();
            GridLevel::new(d, n, Stencil::new(g, entries)?)
        }
    }
}

pub fn cmd_solve(req: &SolveRequest) -> Result<SolveResult> {
    let level = solver_level(&req.problem.stencil, req.n)?;
    let sm = resolve_smoother(&level.stencil, &req.problem, &req.smoother)?;
    let mut spec = CycleSpec::new(req.cycle, req.problem.k, req.pre, req.post, sm.spec);
    spec.levels = req.levels;
    spec.preconditioner = req.problem.preconditioner;
    spec.coarse_mode = req.coarse;
    let rate = measure_asymptotic_rate(&spec, &level, req.iterations, req.seed)?;
    Ok(SolveResult {
        smoother: sm,
        cycle: spec,
        n: req.n,
        rate,
    })
}

// ---------------------------------------------------------------- optimize

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Smoothing,
    Twogrid,
    Degree,
}

impl std::str::FromStr for Objective {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "smoothing" => Ok(Objective::Smoothing),
            "twogrid" | "two-grid" => Ok(Objective::Twogrid),
            "degree" => Ok(Objective::Degree),
            _ => Err(Error::InvalidConfig(format!(
                "unknown objective '{s}' (expected smoothing, twogrid or degree)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizeRequest {
    pub objective: Objective,
    pub problem: ProblemRequest,
    pub smoother: SmootherRequest,
    pub nu1: u32,
    pub nu2: u32,
    pub coarse: Option<CoarseOperatorMode>,
    /// Degree objective inputs.
    pub rho: Option<f64>,
    pub kappa: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoGridOptimum {
    pub coarse_mode: CoarseOperatorMode,
    pub optimum: Lambda0Optimum,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "objective", rename_all = "lowercase")]
pub enum OptimizeResult {
    Smoothing {
        smoother: ResolvedSmoother,
        lambda0_star: f64,
        mu_at_lambda0: f64,
        mu_at_lambda0_star: f64,
    },
    Twogrid {
        smoother: ResolvedSmoother,
        optima: Vec<TwoGridOptimum>,
    },
    Degree {
        rho: f64,
        kappa: f64,
        lambda1: f64,
        degree: usize,
    },
}

pub fn cmd_optimize(req: &OptimizeRequest) -> Result<OptimizeResult> {
    if req.objective == Objective::Degree {
        let (rho, kappa) = match (req.rho, req.kappa) {
            (Some(r), Some(k)) => (r, k),
            _ => return Err(Error::InvalidConfig("--objective degree needs --rho and --kappa".into())),
        };
        if !(rho > 0.0 && rho < 1.0) || !(kappa > 1.0) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < rho < 1 and kappa > 1, got rho = {rho}, kappa = {kappa}"
            )));
        }
        let lambda1 = req.smoother.lambda1.unwrap_or(2.0);
        return Ok(OptimizeResult::Degree {
            rho,
            kappa,
            lambda1,
            degree: min_degree(rho, kappa, lambda1),
        });
    }
    let stencil = req.problem.stencil.resolve()?;
    let mut sreq = req.smoother.clone();
    // the search starts from the symbol minimum
    sreq.lambda0 = Lambda0Policy::Auto;
    let sm = resolve_smoother(&stencil, &req.problem, &sreq)?;
    match req.objective {
        Objective::Smoothing => {
            let star = sm.lambda0_star.ok_or(Error::NoCrossing {
                lambda0: sm.bounds.lambda0,
                lambda1: sm.spec.lambda1,
            })?;
            let mut bounds = sm.bounds;
            bounds.lambda1 = sm.spec.lambda1;
            let at = |l0: f64| -> Result<f64> {
                let s = SmootherSpec::ba1x(sm.spec.degree, l0, sm.spec.lambda1)?;
                Ok(smoothing_factor_on(&s, &bounds, 1).mu)
            };
            Ok(OptimizeResult::Smoothing {
                mu_at_lambda0: at(sm.bounds.lambda0)?,
                mu_at_lambda0_star: at(star)?,
                lambda0_star: star,
                smoother: sm,
            })
        }
        Objective::Twogrid => {
            let mut optima = Vec::new();
            for mode in modes_for(req.coarse) {
                let mut cfg = TwoGridConfig::new(stencil.clone(), req.problem.preconditioner, sm.spec, req.problem.k)
                    .with_mode(mode);
                cfg.nu1 = req.nu1;
                cfg.nu2 = req.nu2;
                cfg.sampling = req.problem.sampling;
                optima.push(TwoGridOptimum {
                    coarse_mode: mode,
                    optimum: optimal_lambda0_two_grid(&cfg)?,
                });
            }
            Ok(OptimizeResult::Twogrid { smoother: sm, optima })
        }
        Objective::Degree => unreachable!("handled above"),
    }
}

// ---------------------------------------------------------------- dispatch

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReproduceRequest {
    pub table: String,
    pub options: ReproduceOptions,
}

pub fn cmd_reproduce(req: &ReproduceRequest) -> Result<TableReport> {
    reproduce_table(&req.table, &req.options)
}

/// Any command, fully resolved.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Request {
    SmoothingFactor(SmoothingRequest),
    TwoGrid(TwoGridRequest),
    Solve(SolveRequest),
    Optimize(OptimizeRequest),
    Reproduce(ReproduceRequest),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Outcome {
    SmoothingFactor(SmoothingResult),
    TwoGrid(TwoGridResult),
    Solve(SolveResult),
    Optimize(OptimizeResult),
    Reproduce(TableReport),
}

/// A request together with its result; the JSON form of every command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub request: Request,
    pub result: Outcome,
}

pub fn execute(request: Request) -> Result<Report> {
    let result = match &request {
        Request::SmoothingFactor(r) => Outcome::SmoothingFactor(cmd_smoothing_factor(r)?),
        Request::TwoGrid(r) => Outcome::TwoGrid(cmd_two_grid(r)?),
        Request::Solve(r) => Outcome::Solve(cmd_solve(r)?),
        Request::Optimize(r) => Outcome::Optimize(cmd_optimize(r)?),
        Request::Reproduce(r) => Outcome::Reproduce(cmd_reproduce(r)?),
    };
    Ok(Report { request, result })
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Re-runs the echoed request.
    pub fn rerun(&self) -> Result<Report> {
        execute(self.request.clone())
    }

    pub fn to_csv(&self) -> String {
        match &self.result {
            Outcome::SmoothingFactor(r) => format!(
                "family,degree,k,lambda0,lambda1,lambda0_star,mu\n{},{},{},{},{},{},{}\n",
                r.smoother.spec.family,
                r.degree,
                self.k(),
                r.lambda0,
                r.lambda1,
                opt_csv(r.lambda0_star),
                r.mu
            ),
            Outcome::TwoGrid(r) => {
                let mut s = String::from("coarse_mode,family,degree,k,lambda0,lambda1,mu,rho_lfa\n");
                for rec in &r.records {
                    s.push_str(&format!(
                        "{},{},{},{},{},{},{},{}\n",
                        rec.coarse_mode,
                        rec.config.smoother.family,
                        rec.config.smoother.degree,
                        rec.config.k,
                        rec.lambda0,
                        rec.lambda1,
                        opt_csv(rec.mu),
                        opt_csv(rec.rho_lfa)
                    ));
                }
                s
            }
            Outcome::Solve(r) => r.rate.to_csv(),
            Outcome::Optimize(o) => match o {
                OptimizeResult::Smoothing {
                    lambda0_star,
                    mu_at_lambda0,
                    mu_at_lambda0_star,
                    smoother,
                } => format!(
                    "lambda0,lambda0_star,mu_at_lambda0,mu_at_lambda0_star\n{},{},{},{}\n",
                    smoother.bounds.lambda0, lambda0_star, mu_at_lambda0, mu_at_lambda0_star
                ),
                OptimizeResult::Twogrid { optima, .. } => {
                    let mut s = String::from("coarse_mode,lambda0,rho,seed_lambda0,seed_rho,unimodal\n");
                    for o in optima {
                        s.push_str(&format!(
                            "{},{},{},{},{},{}\n",
                            o.coarse_mode,
                            o.optimum.lambda0,
                            o.optimum.rho,
                            o.optimum.seed_lambda0,
                            o.optimum.seed_rho,
                            o.optimum.unimodal
                        ));
                    }
                    s
                }
                OptimizeResult::Degree {
                    rho,
                    kappa,
                    lambda1,
                    degree,
                } => format!("rho,kappa,lambda1,degree\n{rho},{kappa},{lambda1},{degree}\n"),
            },
            Outcome::Reproduce(t) => t.to_csv(),
        }
    }

    fn k(&self) -> u32 {
        match &self.request {
            Request::SmoothingFactor(r) => r.problem.k,
            Request::TwoGrid(r) => r.problem.k,
            Request::Solve(r) => r.problem.k,
            Request::Optimize(r) => r.problem.k,
            Request::Reproduce(_) => 0,
        }
    }
}

fn opt_csv(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}
