use rayon::prelude::*;
use rustfft::{num_complex::Complex64, FftPlanner};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use super::grid::{apply_into, GridLevel, GridVector};
use crate::error::{Error, Result};
use crate::symbol::Stencil;

/// Exact solver for a level's operator.
pub enum CoarseSolver {
    /// Fast diagonalization by sine transforms; valid for stencils of reach 1
    /// that are symmetric under every axis reflection.
    Sine {
        dim: usize,
        n: usize,
        inv_eigen: Vec<f64>,
        fft: Arc<dyn rustfft::Fft<f64>>,
    },
    /// Dense Cholesky factor (row-major lower triangle).
    Dense { n_total: usize, l: Vec<f64> },
}

impl CoarseSolver {
    pub fn new(level: &GridLevel) -> Result<Self> {
        let s = &level.stencil;
        if s.reach() <= 1 && s.is_axis_reflection_symmetric(1e-12) {
            Self::sine(level)
        } else {
            Self::dense(level)
        }
    }

    fn sine(level: &GridLevel) -> Result<Self> {
        let (n, dim) = (level.n, level.dim);
        let np1 = (n + 1) as f64;
        let mut inv = vec![0.0; level.len()];
        for (p, v) in inv.iter_mut().enumerate() {
            let idx = level.unflatten(p);
            let mut lam = 0.0;
            for e in &level.stencil.entries {
                let mut t = e.coefficient;
                for d in 0..dim {
                    t *= (PI * (idx[d] + 1) as f64 * e.offset[d] as f64 / np1).cos();
                }
                lam += t;
            }
            if lam.abs() < 1e-300 {
                return Err(Error::Hierarchy("coarsest operator is singular".into()));
            }
            *v = 1.0 / lam;
        }
        let fft = FftPlanner::new().plan_fft_forward(2 * (n + 1));
        Ok(CoarseSolver::Sine {
            dim,
            n,
            inv_eigen: inv,
            fft,
        })
    }

    fn dense(level: &GridLevel) -> Result<Self> {
        let nt = level.len();
        if nt > 20_000 {
            return Err(Error::Hierarchy(format!(
                "coarsest level with {nt} unknowns is too large for a dense solve"
            )));
        }
        let mut a = vec![0.0; nt * nt];
        let mut e = vec![0.0; nt];
        let mut col = vec![0.0; nt];
        for j in 0..nt {
            e[j] = 1.0;
            apply_into(level, &e, &mut col);
            for i in 0..nt {
                a[i * nt + j] = col[i];
            }
            e[j] = 0.0;
        }
        for j in 0..nt {
            let mut d = a[j * nt + j];
            for k in 0..j {
                d -= a[j * nt + k] * a[j * nt + k];
            }
            if d <= 0.0 {
                return Err(Error::Hierarchy("coarsest operator is not positive definite".into()));
            }
            let d = d.sqrt();
            a[j * nt + j] = d;
            for i in j + 1..nt {
                let mut s = a[i * nt + j];
                for k in 0..j {
                    s -= a[i * nt + k] * a[j * nt + k];
                }
                a[i * nt + j] = s / d;
            }
        }
        Ok(CoarseSolver::Dense { n_total: nt, l: a })
    }

    pub fn solve(&self, f: &GridVector) -> GridVector {
        match self {
            CoarseSolver::Sine { dim, n, inv_eigen, fft } => {
                let mut x = f.data.clone();
                for axis in 0..*dim {
                    dst_axis(&mut x, *n, *dim, axis, fft.as_ref());
                }
                let scale = (2.0 / (*n + 1) as f64).powi(*dim as i32);
                x.par_iter_mut().zip(inv_eigen).for_each(|(v, l)| *v *= l * scale);
                for axis in 0..*dim {
                    dst_axis(&mut x, *n, *dim, axis, fft.as_ref());
                }
                GridVector { data: x, ..*f }
            }
            CoarseSolver::Dense { n_total, l } => {
                let nt = *n_total;
                let mut y = f.data.clone();
                for i in 0..nt {
                    let mut s = y[i];
                    for k in 0..i {
                        s -= l[i * nt + k] * y[k];
                    }
                    y[i] = s / l[i * nt + i];
                }
                for i in (0..nt).rev() {
                    let mut s = y[i];
                    for k in i + 1..nt {
                        s -= l[k * nt + i] * y[k];
                    }
                    y[i] = s / l[i * nt + i];
                }
                GridVector { data: y, ..*f }
            }
        }
    }
}

/// Unnormalized DST-I, y_k = Σ_j x_j sin(π (j+1)(k+1)/(n+1)), along one axis.
fn dst_axis(data: &mut [f64], n: usize, dim: usize, axis: usize, fft: &dyn rustfft::Fft<f64>) {
    let inner = n.pow((dim - 1 - axis) as u32);
    let outer = n.pow(axis as u32);
    let len = 2 * (n + 1);
    let lines: Vec<(usize, usize)> = (0..outer).flat_map(|o| (0..inner).map(move |i| (o, i))).collect();
    let results: Vec<Vec<f64>> = lines
        .par_iter()
        .map(|&(o, i)| {
            let mut buf = vec![Complex64::new(0.0, 0.0); len];
            for j in 0..n {
                let v = data[(o * n + j) * inner + i];
                buf[j + 1] = Complex64::new(v, 0.0);
                buf[len - 1 - j] = Complex64::new(-v, 0.0);
            }
            fft.process(&mut buf);
            (0..n).map(|k| -0.5 * buf[k + 1].im).collect()
        })
        .collect();
    for (&(o, i), r) in lines.iter().zip(results) {
        for (j, v) in r.into_iter().enumerate() {
            data[(o * n + j) * inner + i] = v;
        }
    }
}

/// Infinite-lattice Galerkin stencil R A P with R = Pᵀ/2^{kd} for
/// multilinear transfers.
pub fn galerkin_stencil(s: &Stencil, k: u32) -> Result<Stencil> {
    let m = 1i32 << k;
    let d = s.dimension();
    let mut w: BTreeMap<Vec<i32>, f64> = BTreeMap::new();
    let span = (2 * m - 1) as usize;
    for flat in 0..span.pow(d as u32) {
        let mut f = flat;
        let mut j = vec![0i32; d];
        for c in (0..d).rev() {
            j[c] = (f % span) as i32 - (m - 1);
            f /= span;
        }
        let v: f64 = j.iter().map(|&x| 1.0 - x.abs() as f64 / m as f64).product();
        w.insert(j, v);
    }
    let conv = |a: &BTreeMap<Vec<i32>, f64>, b: &BTreeMap<Vec<i32>, f64>| {
        let mut out: BTreeMap<Vec<i32>, f64> = BTreeMap::new();
        for (oa, ca) in a {
            for (ob, cb) in b {
                let o: Vec<i32> = oa.iter().zip(ob).map(|(x, y)| x + y).collect();
                *out.entry(o).or_insert(0.0) += ca * cb;
            }
        }
        out
    };
    let a: BTreeMap<Vec<i32>, f64> = s.entries.iter().map(|e| (e.offset.clone(), e.coefficient)).collect();
    let full = conv(&conv(&w, &a), &w);
    let scale = 1.0 / (m as f64).powi(d as i32);
    let entries: Vec<(Vec<i32>, f64)> = full
        .into_iter()
        .filter(|(o, c)| o.iter().all(|x| x % m == 0) && c.abs() > 1e-14 * s.abs_sum())
        .map(|(o, c)| (o.iter().map(|x| x / m).collect(), c * scale))
        .collect();
    Stencil::new(s.geometry.scaled(m as f64), entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lfa::{coarse_symbol, CoarseOperatorMode, build_block};
    use crate::poly::SmootherSpec;
    use crate::symbol::{evaluate_symbol, Frequency, PreconditionerKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sine_solver_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (dim, n) in [(2, 7), (2, 12), (3, 5)] {
            let level = GridLevel::laplace(dim, n).unwrap();
            let mut f = level.zeros();
            f.data.iter_mut().for_each(|x| *x = rng.gen_range(-1.0..1.0));
            let a = CoarseSolver::sine(&level).unwrap().solve(&f);
            let b = CoarseSolver::dense(&level).unwrap().solve(&f);
            let diff = a.sub(&b).norm();
            assert!(diff < 1e-10 * b.norm(), "{dim}D diff {diff}");
            let back = crate::mg::apply_operator(&level, &a).unwrap();
            assert!(back.sub(&f).norm() < 1e-9 * f.norm());
        }
    }

    #[test]
    fn galerkin_stencil_symbol_matches_lfa() {
        let level = GridLevel::laplace(2, 63).unwrap();
        let s = &level.stencil;
        let spec = SmootherSpec::chebyshev(2, 0.5, 2.0).unwrap();
        for k in 1..=2 {
            let g = galerkin_stencil(s, k).unwrap();
            assert!(g.row_sum().abs() < 1e-9 * g.abs_sum());
            let t = Frequency::new(&[3.0, -5.0]);
            let b = build_block(s, PreconditionerKind::Jacobi, &spec, k, &t).unwrap();
            let lfa = coarse_symbol(&b, CoarseOperatorMode::Galerkin, s, k).unwrap();
            let direct = evaluate_symbol(&g, &t).re;
            assert!((lfa - direct).abs() < 1e-9 * lfa.abs(), "k={k}: {lfa} vs {direct}");
        }
        // the factor-two Galerkin Laplacian is the 9-point stencil
        assert_eq!(galerkin_stencil(s, 1).unwrap().entries.len(), 9);
    }
}
