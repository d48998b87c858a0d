//! Matrix-free geometric multigrid on the unit square and cube.

pub mod coarse;
pub mod cycle;
pub mod grid;
pub mod smoother;
pub mod transfer;

pub use coarse::{galerkin_stencil, CoarseSolver};
pub use cycle::{measure_asymptotic_rate, run_cycle, CycleKind, CycleSpec, Hierarchy, RateReport};
pub use grid::{apply_operator, energy, GridLevel, GridVector};
pub use smoother::{apply_smoother, preconditioner_diagonal, Smoother};
pub use transfer::{coarse_size, prolongate, restrict};
