use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::frequency::{extremum, sample_frequencies, Frequency, FrequencySampling};
use super::stencil::{preconditioned_symbol, PreconditionerKind, Stencil};
use crate::error::{Error, Result};

/// Spectral interval of the preconditioned operator on the high frequencies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaBounds {
    pub lambda0: f64,
    pub lambda1: f64,
    /// Maximum over all of Θ_h.
    pub lambda1_all: f64,
    pub argmin: Frequency,
    pub argmax: Frequency,
}

impl LambdaBounds {
    /// Whether the global symbol maximum is reached on the high frequencies.
    pub fn max_is_high(&self) -> bool {
        (self.lambda1_all - self.lambda1).abs() <= 1e-9 * self.lambda1_all.abs().max(1.0)
    }

    pub fn kappa(&self) -> f64 {
        self.lambda1 / self.lambda0
    }
}

/// Minimum and maximum of |X̃(θ)| over the high frequencies of coarsening
/// factor 2^k.
///
/// The sweep uses the closed lattice at the requested resolution, so the
/// boundary of the low box is hit exactly, and the best lattice points are
/// polished by a local pattern search.
pub fn lambda_bounds(
    s: &Stencil,
    p: PreconditionerKind,
    k: u32,
    sampling: &FrequencySampling,
) -> Result<LambdaBounds> {
    s.validate()?;
    sampling.validate(k)?;
    let g = &s.geometry;
    let (low, high) = sample_frequencies(g, k, &sampling.closed())?;
    // Surface non-real or indefinite symbols before the polished search.
    high.par_iter().chain(low.par_iter()).try_for_each(|f| {
        let x = preconditioned_symbol(s, p, f)?;
        let zero = f.theta().iter().all(|t| t.abs() < 1e-14);
        if x <= 0.0 && !(zero && x.abs() < 1e-10) {
            return Err(Error::IndefiniteSymbol {
                theta: f.theta().to_vec(),
                value: x,
            });
        }
        Ok(())
    })?;
    let x = |f: &Frequency| preconditioned_symbol(s, p, f).map(f64::abs).unwrap_or(f64::NAN);
    let n = sampling.samples_per_axis;
    let (lambda0, argmin) = extremum(g, Some(k), n, x, false);
    let (lambda1, argmax) = extremum(g, Some(k), n, x, true);
    let (lambda1_all, _) = extremum(g, None, n, x, true);
    if !(lambda0 > 0.0) {
        return Err(Error::IndefiniteSymbol {
            theta: argmin.theta().to_vec(),
            value: lambda0,
        });
    }
    Ok(LambdaBounds {
        lambda0,
        lambda1,
        lambda1_all,
        argmin,
        argmax,
    })
}
