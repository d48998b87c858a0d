use rayon::prelude::*;

use super::grid::{apply_into, GridLevel, GridVector};
use crate::error::Result;
use crate::poly::{sa_weight, BaCoefficients, ChebCache, Family, SmootherSpec};
use crate::symbol::PreconditionerKind;

/// Diagonal preconditioner R₀ as a per-point vector. The ℓ₁ variant sums
/// |a_ij| over neighbours inside the domain only.
pub fn preconditioner_diagonal(level: &GridLevel, p: PreconditionerKind) -> Vec<f64> {
    let centre = level.stencil.center();
    match p {
        PreconditionerKind::Jacobi => vec![1.0 / centre; level.len()],
        PreconditionerKind::L1Jacobi => {
            let n = level.n as isize;
            (0..level.len())
                .into_par_iter()
                .map(|q| {
                    let idx = level.unflatten(q);
                    let mut s = 0.0;
                    for (o, c) in level.taps() {
                        if o.iter().all(|&x| x == 0) {
                            s += c;
                            continue;
                        }
                        let inside = (0..level.dim).all(|d| {
                            let x = idx[d] as isize + o[d];
                            (0..n).contains(&x)
                        });
                        if inside {
                            s += c.abs();
                        }
                    }
                    1.0 / s
                })
                .collect()
        }
    }
}

/// Workspace for repeated smoother applications on one level.
#[derive(Clone, Debug)]
pub struct Smoother {
    spec: SmootherSpec,
    r0: Vec<f64>,
    cheb: Option<ChebCache>,
}

impl Smoother {
    pub fn new(level: &GridLevel, spec: SmootherSpec, p: PreconditionerKind) -> Result<Self> {
        spec.validate()?;
        spec.check_admissible()?;
        let cheb = match spec.family {
            Family::Chebyshev => Some(ChebCache::new(spec.lambda0, spec.lambda1, spec.degree)?),
            _ => None,
        };
        Ok(Smoother {
            spec,
            r0: preconditioner_diagonal(level, p),
            cheb,
        })
    }

    pub fn spec(&self) -> &SmootherSpec {
        &self.spec
    }

    /// R r = q(R₀A) R₀ r, using `degree` operator applications on `level`,
    /// which must be the level the smoother was built for.
    pub fn apply(&self, level: &GridLevel, r: &[f64]) -> Vec<f64> {
        let rbar: Vec<f64> = r.par_iter().zip(&self.r0).map(|(a, b)| a * b).collect();
        let mut work = vec![0.0; r.len()];
        match self.spec.family {
            Family::Chebyshev => self.chebyshev(level, r, &rbar, &mut work),
            Family::Ba1x => self.ba1x(level, r, &rbar, &mut work),
            Family::Sa => self.sa(level, &rbar, &mut work),
        }
    }

    /// R₀ (r − A v), written into `out`.
    fn precond_residual(&self, level: &GridLevel, r: &[f64], v: &[f64], av: &mut [f64], out: &mut [f64]) {
        apply_into(level, v, av);
        out.par_iter_mut()
            .zip(r.par_iter().zip(av.par_iter()).zip(&self.r0))
            .for_each(|(o, ((r, a), d))| *o = d * (r - a));
    }

    fn chebyshev(&self, level: &GridLevel, r: &[f64], rbar: &[f64], av: &mut [f64]) -> Vec<f64> {
        let c = self.cheb.as_ref().expect("chebyshev cache");
        let (zeta, a) = (c.zeta, c.a);
        let mut prev = vec![0.0; r.len()];
        let mut cur: Vec<f64> = rbar.iter().map(|x| zeta * x).collect();
        let mut z = vec![0.0; r.len()];
        for j in 1..=self.spec.degree {
            self.precond_residual(level, r, &cur, av, &mut z);
            let alpha = 2.0 * zeta * a * c.t(j) / c.t(j + 1);
            let beta = c.t(j - 1) / c.t(j + 1);
            let next: Vec<f64> = cur
                .par_iter()
                .zip(z.par_iter().zip(prev.par_iter()))
                .map(|(v, (z, p))| v + alpha * z + beta * (v - p))
                .collect();
            prev = std::mem::replace(&mut cur, next);
        }
        cur
    }

    fn ba1x(&self, level: &GridLevel, r: &[f64], rbar: &[f64], av: &mut [f64]) -> Vec<f64> {
        let b = BaCoefficients::new(self.spec.lambda0, self.spec.lambda1);
        let mut prev: Vec<f64> = rbar.iter().map(|x| b.p0() * x).collect();
        if self.spec.degree == 0 {
            return prev;
        }
        let (c0, c1) = b.p1();
        // X r̄ = R₀ A r̄
        apply_into(level, rbar, av);
        let mut cur: Vec<f64> = rbar
            .par_iter()
            .zip(av.par_iter().zip(&self.r0))
            .map(|(x, (a, d))| c0 * x - c1 * d * a)
            .collect();
        let d2 = b.delta * b.delta;
        let mut z = vec![0.0; r.len()];
        for _ in 1..self.spec.degree {
            self.precond_residual(level, r, &cur, av, &mut z);
            let next: Vec<f64> = cur
                .par_iter()
                .zip(prev.par_iter().zip(z.par_iter()))
                .map(|(w, (p, z))| w + d2 * (w - p) + b.c * z)
                .collect();
            prev = std::mem::replace(&mut cur, next);
        }
        cur
    }

    // q_{n+1} = (2 w_n Y q_n − w_{n−1} q_{n−1})/w_{n+1} − (4/λ₁)(w_n/w_{n+1}) r̄,
    // Y = 2X/λ₁ − I, w_n = W_n(−1).
    fn sa(&self, level: &GridLevel, rbar: &[f64], av: &mut [f64]) -> Vec<f64> {
        let l1 = self.spec.lambda1;
        let len = rbar.len();
        let mut prev = vec![0.0; len];
        let mut cur = vec![0.0; len];
        for n in 0..=self.spec.degree as i64 {
            let (wn, wm, wp) = (sa_weight(n), sa_weight(n - 1), sa_weight(n + 1));
            let next: Vec<f64> = if n == 0 {
                rbar.iter().map(|x| -(4.0 / l1) * (wn / wp) * x).collect()
            } else {
                apply_into(level, &cur, av);
                (0..len)
                    .into_par_iter()
                    .map(|i| {
                        let y = 2.0 * self.r0[i] * av[i] / l1 - cur[i];
                        (2.0 * wn * y - wm * prev[i]) / wp - (4.0 / l1) * (wn / wp) * rbar[i]
                    })
                    .collect()
            };
            prev = std::mem::replace(&mut cur, next);
        }
        cur
    }
}

/// Applies the polynomial smoother to a residual: returns R r.
pub fn apply_smoother(
    level: &GridLevel,
    spec: &SmootherSpec,
    p: PreconditionerKind,
    r: &GridVector,
) -> Result<GridVector> {
    r.matches(level)?;
    let s = Smoother::new(level, *spec, p)?;
    Ok(GridVector {
        dim: r.dim,
        n: r.n,
        data: s.apply(level, &r.data),
    })
}
