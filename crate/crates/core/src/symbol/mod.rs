//! Grid geometries, stencils and their Fourier symbols.

pub mod bounds;
pub mod frequency;
pub mod geometry;
pub mod stencil;

pub use bounds::{lambda_bounds, LambdaBounds};
pub use frequency::{sample_frequencies, Frequency, FrequencySampling};
pub use geometry::{angle_preset, GeometryKind, GridGeometry};
pub use stencil::{
    build_fd_laplace, build_fem_tri_laplace, evaluate_symbol, preconditioned_symbol,
    preconditioner_symbol, PreconditionerKind, Stencil, StencilEntry,
};
