use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::f64::consts::PI;

use super::frequency::Frequency;
use super::geometry::{GeometryKind, GridGeometry};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StencilEntry {
    pub offset: Vec<i32>,
    pub coefficient: f64,
}

/// Constant-coefficient operator on an infinite lattice.
///
/// Offsets are integer lattice vectors; the geometry supplies the physical
/// scaling when the symbol is evaluated, so the same offsets serve every mesh
/// width. Stencils are assumed to discretize a second-order operator, which
/// fixes how they are rediscretized on coarser grids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stencil {
    pub geometry: GridGeometry,
    pub entries: Vec<StencilEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreconditionerKind {
    Jacobi,
    L1Jacobi,
}

impl std::str::FromStr for PreconditionerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jacobi" => Ok(PreconditionerKind::Jacobi),
            "l1" | "l1-jacobi" | "l1_jacobi" | "l1jacobi" => Ok(PreconditionerKind::L1Jacobi),
            _ => Err(Error::InvalidConfig(format!(
                "unknown preconditioner '{s}' (expected jacobi or l1-jacobi)"
            ))),
        }
    }
}

impl Stencil {
    pub fn new(geometry: GridGeometry, entries: Vec<(Vec<i32>, f64)>) -> Result<Self> {
        let s = Stencil {
            geometry,
            entries: entries
                .into_iter()
                .map(|(offset, coefficient)| StencilEntry { offset, coefficient })
                .collect(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        let d = self.geometry.dimension;
        let mut seen = HashSet::new();
        let mut center = None;
        for e in &self.entries {
            if e.offset.len() != d {
                return Err(Error::InvalidStencil(format!(
                    "offset {:?} has wrong length for dimension {d}",
                    e.offset
                )));
            }
            if !e.coefficient.is_finite() {
                return Err(Error::InvalidStencil(format!("coefficient at {:?} is not finite", e.offset)));
            }
            if !seen.insert(e.offset.clone()) {
                return Err(Error::InvalidStencil(format!("duplicate offset {:?}", e.offset)));
            }
            if e.offset.iter().all(|&o| o == 0) {
                center = Some(e.coefficient);
            }
        }
        match center {
            Some(c) if c > 0.0 => Ok(()),
            Some(c) => Err(Error::InvalidStencil(format!("center coefficient {c} is not positive"))),
            None => Err(Error::InvalidStencil("missing center entry".into())),
        }
    }

    pub fn dimension(&self) -> usize {
        self.geometry.dimension
    }

    pub fn center(&self) -> f64 {
        self.entries
            .iter()
            .find(|e| e.offset.iter().all(|&o| o == 0))
            .map(|e| e.coefficient)
            .unwrap_or(0.0)
    }

    pub fn coefficient(&self, offset: &[i32]) -> f64 {
        self.entries
            .iter()
            .find(|e| e.offset == offset)
            .map(|e| e.coefficient)
            .unwrap_or(0.0)
    }

    pub fn row_sum(&self) -> f64 {
        self.entries.iter().map(|e| e.coefficient).sum()
    }

    /// Sum of absolute coefficients, used as the scale for relative tolerances.
    pub fn abs_sum(&self) -> f64 {
        self.entries.iter().map(|e| e.coefficient.abs()).sum()
    }

    /// True when the coefficient at `-o` equals the one at `o` for every entry.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.entries.iter().all(|e| {
            let neg: Vec<i32> = e.offset.iter().map(|o| -o).collect();
            (self.coefficient(&neg) - e.coefficient).abs() <= tol * self.abs_sum()
        })
    }

    /// True when the stencil is invariant under reflection of each axis on its
    /// own. Such stencils are diagonalized by the discrete sine transform on a
    /// box with homogeneous Dirichlet boundary.
    pub fn is_axis_reflection_symmetric(&self, tol: f64) -> bool {
        let d = self.dimension();
        self.entries.iter().all(|e| {
            (0..d).all(|axis| {
                let mut r = e.offset.clone();
                r[axis] = -r[axis];
                (self.coefficient(&r) - e.coefficient).abs() <= tol * self.abs_sum()
            })
        })
    }

    /// Largest absolute offset component.
    pub fn reach(&self) -> usize {
        self.entries
            .iter()
            .flat_map(|e| e.offset.iter().map(|o| o.unsigned_abs() as usize))
            .max()
            .unwrap_or(0)
    }

    /// The same operator rediscretized on a lattice `factor` times coarser:
    /// offsets are kept, geometry widths scale by `factor` and coefficients by
    /// `factor^-2`.
    pub fn rediscretized(&self, factor: f64) -> Stencil {
        let s = 1.0 / (factor * factor);
        Stencil {
            geometry: self.geometry.scaled(factor),
            entries: self
                .entries
                .iter()
                .map(|e| StencilEntry {
                    offset: e.offset.clone(),
                    coefficient: e.coefficient * s,
                })
                .collect(),
        }
    }
}

/// Standard second-order finite difference Laplacian: 5-point in 2D, 7-point in 3D.
pub fn build_fd_laplace(geometry: &GridGeometry) -> Result<Stencil> {
    let h = match &geometry.kind {
        GeometryKind::Rectangular { h } => h.clone(),
        GeometryKind::Triangular { .. } => {
            return Err(Error::InvalidGeometry(
                "finite difference Laplacian needs a rectangular geometry".into(),
            ))
        }
    };
    geometry.validate()?;
    let d = geometry.dimension;
    let mut entries = vec![(vec![0; d], h.iter().map(|w| 2.0 / (w * w)).sum())];
    for axis in 0..d {
        for sign in [1, -1] {
            let mut o = vec![0; d];
            o[axis] = sign;
            entries.push((o, -1.0 / (h[axis] * h[axis])));
        }
    }
    Stencil::new(geometry.clone(), entries)
}

/// Linear finite element Laplacian on a regular triangulation with base angles
/// `alpha`, `beta`. Neighbours sit at ±(1,0) (weight cot γ), ±(0,1) (cot α) and
/// ±(1,1) (cot β); the whole stencil carries the factor (cot α + cot β)/h².
pub fn build_fem_tri_laplace(alpha: f64, beta: f64, h: f64) -> Result<Stencil> {
    let geometry = GridGeometry::triangular(alpha, beta, h)?;
    let gamma = PI - alpha - beta;
    let (ca, cb, cg) = (1.0 / alpha.tan(), 1.0 / beta.tan(), 1.0 / gamma.tan());
    let f = (ca + cb) / (h * h);
    Stencil::new(
        geometry,
        vec![
            (vec![0, 0], f * 2.0 * (ca + cb + cg)),
            (vec![1, 0], -f * cg),
            (vec![-1, 0], -f * cg),
            (vec![0, 1], -f * ca),
            (vec![0, -1], -f * ca),
            (vec![1, 1], -f * cb),
            (vec![-1, -1], -f * cb),
        ],
    )
}

/// Fourier symbol Σ c_j exp(i θ·x_j), x_j = offset_j ∘ h.
pub fn evaluate_symbol(s: &Stencil, f: &Frequency) -> Complex64 {
    let h = s.geometry.mesh_widths();
    let theta = f.theta();
    s.entries
        .iter()
        .map(|e| {
            let phase: f64 = e
                .offset
                .iter()
                .zip(theta)
                .zip(&h)
                .map(|((&o, &t), &w)| t * w * o as f64)
                .sum();
            Complex64::from_polar(e.coefficient, phase)
        })
        .sum()
}

/// Symbol of the diagonal preconditioner's inverse, a scalar for constant
/// coefficients.
pub fn preconditioner_symbol(s: &Stencil, p: PreconditionerKind) -> f64 {
    match p {
        PreconditionerKind::Jacobi => s.center(),
        PreconditionerKind::L1Jacobi => {
            s.center()
                + s.entries
                    .iter()
                    .filter(|e| e.offset.iter().any(|&o| o != 0))
                    .map(|e| e.coefficient.abs())
                    .sum::<f64>()
        }
    }
}

/// Symbol of the preconditioned operator, which must be real.
pub fn preconditioned_symbol(s: &Stencil, p: PreconditionerKind, f: &Frequency) -> Result<f64> {
    let a = evaluate_symbol(s, f);
    if a.im.abs() > 1e-12 * s.abs_sum() {
        return Err(Error::NonRealSymbol {
            theta: f.theta().to_vec(),
            imag: a.im,
        });
    }
    Ok(a.re / preconditioner_symbol(s, p))
}
