use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::coarse::{galerkin_stencil, CoarseSolver};
use super::grid::{apply_operator, GridLevel, GridVector};
use super::smoother::Smoother;
use super::transfer::{coarse_size, prolongate, restrict};
use crate::error::{Error, Result};
use crate::lfa::CoarseOperatorMode;
use crate::poly::SmootherSpec;
use crate::symbol::PreconditionerKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CycleKind {
    #[serde(alias = "tg")]
    TwoGrid,
    V,
    W,
}

impl std::str::FromStr for CycleKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tg" | "twogrid" | "two-grid" => Ok(CycleKind::TwoGrid),
            "v" => Ok(CycleKind::V),
            "w" => Ok(CycleKind::W),
            _ => Err(Error::InvalidConfig(format!("unknown cycle '{s}' (expected tg, v or w)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleSpec {
    pub kind: CycleKind,
    pub k: u32,
    /// Maximum number of levels; `None` coarsens as far as the grid allows.
    pub levels: Option<usize>,
    pub pre: u32,
    pub post: u32,
    pub smoother: SmootherSpec,
    pub preconditioner: PreconditionerKind,
    pub coarse_mode: CoarseOperatorMode,
}

impl CycleSpec {
    pub fn new(kind: CycleKind, k: u32, pre: u32, post: u32, smoother: SmootherSpec) -> Self {
        CycleSpec {
            kind,
            k,
            levels: None,
            pre,
            post,
            smoother,
            preconditioner: PreconditionerKind::Jacobi,
            coarse_mode: CoarseOperatorMode::Rediscretized,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidConfig("coarsening exponent k must be at least 1".into()));
        }
        if self.pre + self.post == 0 {
            return Err(Error::InvalidConfig("pre + post smoothing steps must be at least 1".into()));
        }
        if let Some(l) = self.levels {
            if l < 2 {
                return Err(Error::InvalidConfig("a cycle needs at least two levels".into()));
            }
        }
        self.smoother.validate()?;
        self.smoother.check_admissible()
    }
}

/// Grid levels from fine to coarse plus the coarsest-level solver.
pub struct Hierarchy {
    pub levels: Vec<GridLevel>,
    pub spec: CycleSpec,
    smoothers: Vec<Smoother>,
    solver: CoarseSolver,
}

impl Hierarchy {
    /// Coarsens `fine` by 2^k until an axis would have fewer than 2^k + 1
    /// interior points, or until the level cap is reached. Two-grid cycles
    /// stop after one coarsening.
    pub fn build(fine: GridLevel, spec: &CycleSpec) -> Result<Self> {
        spec.validate()?;
        let m = 1usize << spec.k;
        let cap = match spec.kind {
            CycleKind::TwoGrid => 2,
            _ => spec.levels.unwrap_or(usize::MAX),
        };
        let mut levels = vec![fine];
        while levels.len() < cap {
            let cur = levels.last().expect("non-empty");
            if cur.n < m + 1 {
                break;
            }
            let nc = match coarse_size(cur.n, spec.k) {
                Some(nc) => nc,
                None => break,
            };
            let stencil = match spec.coarse_mode {
                CoarseOperatorMode::Rediscretized => cur.stencil.rediscretized(m as f64),
                CoarseOperatorMode::Galerkin => galerkin_stencil(&cur.stencil, spec.k)?,
            };
            levels.push(GridLevel::new(cur.dim, nc, stencil)?);
        }
        if levels.len() < 2 {
            return Err(Error::Hierarchy(format!(
                "{} points per axis cannot be coarsened by 2^{}",
                levels[0].n, spec.k
            )));
        }
        let solver = CoarseSolver::new(levels.last().expect("non-empty"))?;
        let smoothers = levels[..levels.len() - 1]
            .iter()
            .map(|l| Smoother::new(l, spec.smoother, spec.preconditioner))
            .collect::<Result<Vec<_>>>()?;
        Ok(Hierarchy {
            levels,
            spec: spec.clone(),
            smoothers,
            solver,
        })
    }

    pub fn fine(&self) -> &GridLevel {
        &self.levels[0]
    }

    /// One multigrid iteration for A u = f starting from `u`.
    pub fn cycle(&self, f: &GridVector, u: &GridVector) -> Result<GridVector> {
        f.matches(self.fine())?;
        u.matches(self.fine())?;
        self.cycle_at(0, f, u.clone())
    }

    fn smooth(&self, l: usize, f: &GridVector, u: &mut GridVector, steps: u32) -> Result<()> {
        for _ in 0..steps {
            let r = f.sub(&apply_operator(&self.levels[l], u)?);
            let c = self.smoothers[l].apply(&self.levels[l], &r.data);
            u.data.iter_mut().zip(c).for_each(|(a, b)| *a += b);
        }
        Ok(())
    }

    fn cycle_at(&self, l: usize, f: &GridVector, mut u: GridVector) -> Result<GridVector> {
        let last = self.levels.len() - 1;
        if l == last {
            return Ok(self.solver.solve(f));
        }
        self.smooth(l, f, &mut u, self.spec.pre)?;
        let r = f.sub(&apply_operator(&self.levels[l], &u)?);
        let rc = restrict(&r, self.spec.k)?;
        let gamma = match self.spec.kind {
            CycleKind::W if l + 1 < last => 2,
            _ => 1,
        };
        let mut ec = GridVector::zeros(rc.dim, rc.n);
        for _ in 0..gamma {
            ec = self.cycle_at(l + 1, &rc, ec)?;
        }
        u.axpy(1.0, &prolongate(&ec, self.spec.k)?);
        self.smooth(l, f, &mut u, self.spec.post)?;
        Ok(u)
    }
}

/// One multigrid iteration on `fine`.
pub fn run_cycle(spec: &CycleSpec, fine: &GridLevel, rhs: &GridVector, u0: &GridVector) -> Result<GridVector> {
    Hierarchy::build(fine.clone(), spec)?.cycle(rhs, u0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub rate: f64,
    /// ‖e_{m+1}‖_A / ‖e_m‖_A per iteration.
    pub ratios: Vec<f64>,
    pub seed: u64,
    pub iterations: usize,
    pub levels: usize,
    pub fine_points: usize,
    /// Every ratio is at most 1 (up to 1e−12).
    pub monotone: bool,
}

impl RateReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("iteration,ratio\n");
        for (i, r) in self.ratios.iter().enumerate() {
            s.push_str(&format!("{},{}\n", i + 1, r));
        }
        s
    }
}

/// Asymptotic convergence factor of the homogeneous problem: geometric mean of
/// the last 10 A-norm reduction ratios, starting from a seeded random guess.
pub fn measure_asymptotic_rate(spec: &CycleSpec, grid: &GridLevel, iterations: usize, seed: u64) -> Result<RateReport> {
    if iterations < 30 {
        return Err(Error::InvalidConfig(format!(
            "rate measurement needs at least 30 iterations, got {iterations}"
        )));
    }
    let h = Hierarchy::build(grid.clone(), spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fine = h.fine();
    let f = fine.zeros();
    let mut u = GridVector {
        dim: fine.dim,
        n: fine.n,
        data: (0..fine.len()).map(|_| rng.gen_range(-1.0..1.0)).collect(),
    };
    let a_norm = |v: &GridVector| -> Result<f64> { Ok(v.dot(&apply_operator(fine, v)?).max(0.0).sqrt()) };
    let mut nu = a_norm(&u)?;
    u.scale(1.0 / nu);
    let mut ratios = Vec::with_capacity(iterations);
    for it in 0..iterations {
        let next = h.cycle(&f, &u)?;
        nu = a_norm(&next)?;
        let ratio = nu;
        ratios.push(ratio);
        if it >= 5 && ratio > 1.0 + 1e-6 {
            return Err(Error::Divergence { iterate: it, ratio });
        }
        if nu == 0.0 {
            break;
        }
        u = next;
        u.scale(1.0 / nu);
    }
    let tail = &ratios[ratios.len().saturating_sub(10)..];
    let rate = (tail.iter().map(|r| r.max(1e-300).ln()).sum::<f64>() / tail.len() as f64).exp();
    Ok(RateReport {
        rate,
        monotone: ratios.iter().all(|&r| r <= 1.0 + 1e-12),
        ratios,
        seed,
        iterations,
        levels: h.levels.len(),
        fine_points: fine.len(),
    })
}
