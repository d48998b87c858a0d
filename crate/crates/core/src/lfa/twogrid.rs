use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::harmonics::harmonics;
use super::transfer::mode_prolongation;
use crate::error::{Error, Result};
use crate::poly::SmootherSpec;
use crate::search::pattern_maximize;
use crate::smallmat::{spectral_radius, ComplexMatrix};
use crate::symbol::{
    evaluate_symbol, preconditioner_symbol, sample_frequencies, Frequency, FrequencySampling,
    PreconditionerKind, Stencil,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoarseOperatorMode {
    Galerkin,
    #[serde(alias = "rediscretised")]
    Rediscretized,
}

impl std::str::FromStr for CoarseOperatorMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "galerkin" | "gal" => Ok(CoarseOperatorMode::Galerkin),
            "rediscretized" | "rediscretised" | "redisc" => Ok(CoarseOperatorMode::Rediscretized),
            _ => Err(Error::InvalidConfig(format!(
                "unknown coarse mode '{s}' (expected galerkin or rediscretized)"
            ))),
        }
    }
}

impl std::fmt::Display for CoarseOperatorMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CoarseOperatorMode::Galerkin => "galerkin",
            CoarseOperatorMode::Rediscretized => "rediscretized",
        })
    }
}

fn default_refine() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoGridConfig {
    pub stencil: Stencil,
    pub preconditioner: PreconditionerKind,
    pub smoother: SmootherSpec,
    pub k: u32,
    pub nu1: u32,
    pub nu2: u32,
    pub coarse_mode: CoarseOperatorMode,
    pub sampling: FrequencySampling,
    /// Polish the worst lattice frequencies by local search.
    #[serde(default = "default_refine")]
    pub refine: bool,
}

impl TwoGridConfig {
    /// One pre-smoothing step, Galerkin coarse symbol, default sampling.
    pub fn new(stencil: Stencil, preconditioner: PreconditionerKind, smoother: SmootherSpec, k: u32) -> Self {
        TwoGridConfig {
            stencil,
            preconditioner,
            smoother,
            k,
            nu1: 1,
            nu2: 0,
            coarse_mode: CoarseOperatorMode::Galerkin,
            sampling: FrequencySampling::default(),
            refine: true,
        }
    }

    pub fn with_mode(mut self, mode: CoarseOperatorMode) -> Self {
        self.coarse_mode = mode;
        self
    }

    pub fn with_smoother(mut self, smoother: SmootherSpec) -> Self {
        self.smoother = smoother;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.stencil.validate()?;
        self.smoother.validate()?;
        self.sampling.validate(self.k)?;
        if self.k == 0 {
            return Err(Error::InvalidConfig("coarsening exponent k must be at least 1".into()));
        }
        if self.nu1 + self.nu2 == 0 {
            return Err(Error::InvalidConfig("nu1 + nu2 must be at least 1".into()));
        }
        Ok(())
    }
}

/// Per-harmonic data of one two-grid block.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicBlock {
    pub base: Frequency,
    pub harmonics: Vec<Frequency>,
    pub fine: Vec<f64>,
    pub smoother: Vec<f64>,
    /// Prolongation normalized to 1 at the zero frequency.
    pub prolongation: Vec<f64>,
    pub restriction: Vec<f64>,
    pub coarse: f64,
}

fn real_symbol(s: &Stencil, f: &Frequency) -> Result<f64> {
    let a = evaluate_symbol(s, f);
    if a.im.abs() > 1e-12 * s.abs_sum() {
        return Err(Error::NonRealSymbol {
            theta: f.theta().to_vec(),
            imag: a.im,
        });
    }
    Ok(a.re)
}

/// Populates everything except the coarse symbol.
pub fn build_block(
    stencil: &Stencil,
    preconditioner: PreconditionerKind,
    smoother: &SmootherSpec,
    k: u32,
    theta0: &Frequency,
) -> Result<HarmonicBlock> {
    let g = &stencil.geometry;
    let hs = harmonics(theta0, k, g);
    let d = preconditioner_symbol(stencil, preconditioner);
    let fine = hs.iter().map(|f| real_symbol(stencil, f)).collect::<Result<Vec<_>>>()?;
    let smooth = fine.iter().map(|a| smoother.error_poly(a / d)).collect();
    let prolongation: Vec<f64> = hs.iter().map(|f| mode_prolongation(f, k, g)).collect();
    Ok(HarmonicBlock {
        base: *theta0,
        restriction: prolongation.clone(),
        harmonics: hs,
        fine,
        smoother: smooth,
        prolongation,
        coarse: f64::NAN,
    })
}

/// Coarse-grid symbol Ã_{2^k h}(θ⁰).
pub fn coarse_symbol(block: &HarmonicBlock, mode: CoarseOperatorMode, s: &Stencil, k: u32) -> Result<f64> {
    let value = match mode {
        CoarseOperatorMode::Rediscretized => {
            let coarse = s.rediscretized((1u64 << k) as f64);
            real_symbol(&coarse, &block.base)?
        }
        CoarseOperatorMode::Galerkin => block
            .prolongation
            .iter()
            .zip(&block.restriction)
            .zip(&block.fine)
            .map(|((p, r), a)| r * a * p)
            .sum(),
    };
    if value.abs() < 1e-14 * s.abs_sum() {
        return Err(Error::SingularCoarseSymbol {
            theta: block.base.theta().to_vec(),
            value,
        });
    }
    Ok(value)
}

/// Coarse-grid correction symbol C̃ = I − P̃ Ã_H⁻¹ R̃ Ã.
pub fn coarse_correction(block: &HarmonicBlock) -> ComplexMatrix {
    let n = block.harmonics.len();
    let mut c = ComplexMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            c[(i, j)] -= Complex64::new(
                block.prolongation[i] * block.restriction[j] * block.fine[j] / block.coarse,
                0.0,
            );
        }
    }
    c
}

/// Two-grid block S̃^{ν₂} C̃ S̃^{ν₁} at the low frequency θ⁰.
pub fn two_grid_block(cfg: &TwoGridConfig, theta0: &Frequency) -> Result<ComplexMatrix> {
    let (m, _) = block_and_matrix(cfg, theta0)?;
    Ok(m)
}

pub fn block_and_matrix(cfg: &TwoGridConfig, theta0: &Frequency) -> Result<(ComplexMatrix, HarmonicBlock)> {
    let mut b = build_block(&cfg.stencil, cfg.preconditioner, &cfg.smoother, cfg.k, theta0)?;
    b.coarse = coarse_symbol(&b, cfg.coarse_mode, &cfg.stencil, cfg.k)?;
    let mut c = coarse_correction(&b);
    let n = b.harmonics.len();
    for i in 0..n {
        let left = b.smoother[i].powi(cfg.nu2 as i32);
        for j in 0..n {
            c[(i, j)] *= left * b.smoother[j].powi(cfg.nu1 as i32);
        }
    }
    Ok((c, b))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoReport {
    pub rho: f64,
    pub argmax: Frequency,
    /// Maximum over the lattice alone, before local polishing.
    pub rho_lattice: f64,
    pub samples: usize,
}

fn block_radius(cfg: &TwoGridConfig, theta0: &Frequency) -> Result<f64> {
    spectral_radius(&two_grid_block(cfg, theta0)?)
}

/// Asymptotic two-grid convergence factor: the largest spectral radius of the
/// block symbols over the sampled low frequencies.
pub fn rho_two_grid(cfg: &TwoGridConfig) -> Result<RhoReport> {
    cfg.validate()?;
    let g = &cfg.stencil.geometry;
    let (low, _) = sample_frequencies(g, cfg.k, &cfg.sampling)?;
    let mut scored = low
        .par_iter()
        .map(|f| Ok((block_radius(cfg, f)?, *f)))
        .collect::<Result<Vec<(f64, Frequency)>>>()?;
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    let (rho_lattice, arg) = scored[0];
    let mut best = (rho_lattice, arg);
    if cfg.refine {
        let widths = g.mesh_widths();
        let m = (1u64 << cfg.k) as f64;
        let n = cfg.sampling.samples_per_axis as f64;
        let step: Vec<f64> = widths.iter().map(|h| PI / (n * h)).collect();
        // stay inside the closed low box and away from the singular origin
        let feasible = |t: &[f64]| {
            let mut outer = 0.0f64;
            for (&x, &h) in t.iter().zip(&widths) {
                let r = x.abs() * m * h / PI;
                if r > 1.0 {
                    return false;
                }
                outer = outer.max(r);
            }
            outer >= 1e-4
        };
        let refined = scored
            .par_iter()
            .take(3)
            .map(|(_, start)| {
                pattern_maximize(
                    |t| block_radius(cfg, &Frequency::new(t)).unwrap_or(f64::NAN),
                    feasible,
                    start.theta(),
                    &step,
                    1e-3,
                    200,
                )
            })
            .collect::<Vec<_>>();
        for (v, x) in refined {
            if v > best.0 {
                best = (v, Frequency::new(&x));
            }
        }
    }
    Ok(RhoReport {
        rho: best.0,
        argmax: best.1,
        rho_lattice,
        samples: low.len(),
    })
}
