use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbol::{build_fd_laplace, GridGeometry, Stencil};

/// One level of a structured grid on the unit square or cube with zero
/// Dirichlet boundary: `n` interior points per axis, h = 1/(n+1).
#[derive(Clone, Debug, PartialEq)]
pub struct GridLevel {
    pub dim: usize,
    pub n: usize,
    pub h: f64,
    pub stencil: Stencil,
    taps: Vec<(Vec<isize>, f64)>,
}

impl GridLevel {
    pub fn new(dim: usize, n: usize, stencil: Stencil) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidConfig(format!("dimension {dim} not supported")));
        }
        if n == 0 {
            return Err(Error::Hierarchy("a level needs at least one interior point".into()));
        }
        if stencil.dimension() != dim {
            return Err(Error::DimensionMismatch(format!(
                "stencil of dimension {} on a {dim}D grid",
                stencil.dimension()
            )));
        }
        if stencil.geometry.is_triangular() {
            return Err(Error::InvalidGeometry("the solver supports rectangular grids only".into()));
        }
        let taps = stencil
            .entries
            .iter()
            .filter(|e| e.coefficient != 0.0)
            .map(|e| (e.offset.iter().map(|&o| o as isize).collect(), e.coefficient))
            .collect();
        Ok(GridLevel {
            dim,
            n,
            h: 1.0 / (n + 1) as f64,
            stencil,
            taps,
        })
    }

    /// Finite difference Laplacian on an n^d interior grid.
    pub fn laplace(dim: usize, n: usize) -> Result<Self> {
        let h = 1.0 / (n + 1) as f64;
        let s = build_fd_laplace(&GridGeometry::uniform(dim, h)?)?;
        Self::new(dim, n, s)
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn zeros(&self) -> GridVector {
        GridVector::zeros(self.dim, self.n)
    }

    pub(crate) fn taps(&self) -> &[(Vec<isize>, f64)] {
        &self.taps
    }

    /// Multi-index of a flat position (axis 0 slowest).
    pub fn unflatten(&self, mut p: usize) -> [usize; 3] {
        let mut idx = [0; 3];
        for d in (0..self.dim).rev() {
            idx[d] = p % self.n;
            p /= self.n;
        }
        idx
    }
}

/// Values at the interior points of a level; the boundary is implicitly zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridVector {
    pub dim: usize,
    pub n: usize,
    pub data: Vec<f64>,
}

impl GridVector {
    pub fn zeros(dim: usize, n: usize) -> Self {
        GridVector {
            dim,
            n,
            data: vec![0.0; n.pow(dim as u32)],
        }
    }

    pub fn from_fn(level: &GridLevel, f: impl Fn(&[f64]) -> f64) -> Self {
        let data = (0..level.len())
            .map(|p| {
                let idx = level.unflatten(p);
                let x: Vec<f64> = idx[..level.dim].iter().map(|&i| (i + 1) as f64 * level.h).collect();
                f(&x)
            })
            .collect();
        GridVector {
            dim: level.dim,
            n: level.n,
            data,
        }
    }

    pub fn matches(&self, level: &GridLevel) -> Result<()> {
        if self.dim != level.dim || self.n != level.n || self.data.len() != level.len() {
            return Err(Error::DimensionMismatch(format!(
                "vector on a {}D grid with {} points per axis, level has {}D with {}",
                self.dim, self.n, level.dim, level.n
            )));
        }
        Ok(())
    }

    /// Fixed-size chunks keep the summation order, and so the result,
    /// independent of the thread count.
    pub fn dot(&self, other: &GridVector) -> f64 {
        const CHUNK: usize = 4096;
        let partial: Vec<f64> = self
            .data
            .par_chunks(CHUNK)
            .zip(other.data.par_chunks(CHUNK))
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>())
            .collect();
        partial.iter().sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&mut self, s: f64) {
        self.data.par_iter_mut().for_each(|v| *v *= s);
    }

    /// self += s * other
    pub fn axpy(&mut self, s: f64, other: &GridVector) {
        self.data.par_iter_mut().zip(&other.data).for_each(|(a, b)| *a += s * b);
    }

    pub fn sub(&self, other: &GridVector) -> GridVector {
        let data = self.data.par_iter().zip(&other.data).map(|(a, b)| a - b).collect();
        GridVector { data, ..*self }
    }
}

/// Matrix-free stencil application with a zero Dirichlet halo.
pub fn apply_operator(level: &GridLevel, u: &GridVector) -> Result<GridVector> {
    u.matches(level)?;
    let mut out = level.zeros();
    apply_into(level, &u.data, &mut out.data);
    Ok(out)
}

pub(crate) fn apply_into(level: &GridLevel, u: &[f64], out: &mut [f64]) {
    let n = level.n as isize;
    let dim = level.dim;
    let taps = level.taps();
    // offsets of each tap in flat storage
    let strides: Vec<isize> = (0..dim).map(|d| n.pow((dim - 1 - d) as u32)).collect();
    let flat: Vec<isize> = taps
        .iter()
        .map(|(o, _)| o.iter().zip(&strides).map(|(a, s)| a * s).sum())
        .collect();
    let row = level.n;
    out.par_chunks_mut(row).enumerate().for_each(|(r, chunk)| {
        // all axes except the last are fixed within a row
        let mut outer = [0isize; 3];
        let mut rem = r as isize;
        for d in (0..dim - 1).rev() {
            outer[d] = rem % n;
            rem /= n;
        }
        let base = r as isize * n;
        chunk.iter_mut().for_each(|o| *o = 0.0);
        for ((off, c), f) in taps.iter().zip(&flat) {
            let inside = (0..dim - 1).all(|d| {
                let x = outer[d] + off[d];
                x >= 0 && x < n
            });
            if !inside {
                continue;
            }
            // valid range of i such that 0 <= i + off_last < n
            let last = off[dim - 1];
            let lo = (-last).max(0);
            let hi = (n - last).min(n);
            if lo >= hi {
                continue;
            }
            let src = &u[(base + lo + f) as usize..(base + hi + f) as usize];
            for (o, v) in chunk[lo as usize..hi as usize].iter_mut().zip(src) {
                *o += c * v;
            }
        }
    });
}

/// ⟨u, A u⟩.
pub fn energy(level: &GridLevel, u: &GridVector) -> Result<f64> {
    Ok(u.dot(&apply_operator(level, u)?))
}
