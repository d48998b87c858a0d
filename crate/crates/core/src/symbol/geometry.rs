use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Shape of the infinite lattice a stencil lives on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum GeometryKind {
    /// Axis-aligned lattice with one mesh width per axis.
    Rectangular { h: Vec<f64> },
    /// Regular triangulation spanned by two unit vectors enclosing the angle
    /// `alpha`, `beta` at the base of the reference triangle. Frequencies are
    /// expressed in the reciprocal basis, so all index ranges match the
    /// rectangular case.
    Triangular { alpha: f64, beta: f64, h: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridGeometry {
    pub dimension: usize,
    pub kind: GeometryKind,
}

impl GridGeometry {
    pub fn rectangular(h: Vec<f64>) -> Result<Self> {
        let g = GridGeometry {
            dimension: h.len(),
            kind: GeometryKind::Rectangular { h },
        };
        g.validate()?;
        Ok(g)
    }

    /// Uniform rectangular geometry with the same width on every axis.
    pub fn uniform(dimension: usize, h: f64) -> Result<Self> {
        Self::rectangular(vec![h; dimension])
    }

    pub fn triangular(alpha: f64, beta: f64, h: f64) -> Result<Self> {
        let g = GridGeometry {
            dimension: 2,
            kind: GeometryKind::Triangular { alpha, beta, h },
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            GeometryKind::Rectangular { h } => {
                if !(self.dimension == 2 || self.dimension == 3) {
                    return Err(Error::InvalidGeometry(format!(
                        "dimension must be 2 or 3, got {}",
                        self.dimension
                    )));
                }
                if h.len() != self.dimension {
                    return Err(Error::InvalidGeometry(format!(
                        "{} mesh widths for dimension {}",
                        h.len(),
                        self.dimension
                    )));
                }
                if h.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
                    return Err(Error::InvalidGeometry(format!("mesh widths must be positive: {h:?}")));
                }
            }
            GeometryKind::Triangular { alpha, beta, h } => {
                if self.dimension != 2 {
                    return Err(Error::InvalidGeometry("triangular grids are two-dimensional".into()));
                }
                let gamma = PI - alpha - beta;
                for (name, a) in [("alpha", *alpha), ("beta", *beta), ("gamma", gamma)] {
                    if !(a > 0.0 && a < PI) {
                        return Err(Error::InvalidGeometry(format!("{name} = {a} outside (0, pi)")));
                    }
                }
                if !(*h > 0.0) || !h.is_finite() {
                    return Err(Error::InvalidGeometry(format!("mesh width must be positive: {h}")));
                }
            }
        }
        Ok(())
    }

    pub fn is_triangular(&self) -> bool {
        matches!(self.kind, GeometryKind::Triangular { .. })
    }

    /// Mesh width per lattice axis (the triangular width is repeated).
    pub fn mesh_widths(&self) -> Vec<f64> {
        match &self.kind {
            GeometryKind::Rectangular { h } => h.clone(),
            GeometryKind::Triangular { h, .. } => vec![*h; 2],
        }
    }

    /// Same geometry with every mesh width multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> GridGeometry {
        let kind = match &self.kind {
            GeometryKind::Rectangular { h } => GeometryKind::Rectangular {
                h: h.iter().map(|w| w * factor).collect(),
            },
            GeometryKind::Triangular { alpha, beta, h } => GeometryKind::Triangular {
                alpha: *alpha,
                beta: *beta,
                h: h * factor,
            },
        };
        GridGeometry {
            dimension: self.dimension,
            kind,
        }
    }
}

/// Named angle presets for triangular grids.
pub fn angle_preset(name: &str) -> Option<(f64, f64)> {
    match name {
        "equilateral" => Some((PI / 3.0, PI / 3.0)),
        "isosceles-80" => Some((4.0 * PI / 9.0, 4.0 * PI / 9.0)),
        "right" => Some((PI / 4.0, PI / 4.0)),
        _ => None,
    }
}
