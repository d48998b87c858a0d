//! Local Fourier analysis of smoothing and two-grid cycles under 2^k coarsening.

pub mod harmonics;
pub mod optimize;
pub mod record;
pub mod smoothing;
pub mod transfer;
pub mod twogrid;

pub use harmonics::{harmonic_offsets, harmonics, is_low};
pub use optimize::{optimal_lambda0_two_grid, Lambda0Optimum};
pub use record::AnalysisRecord;
pub use smoothing::{smoother_symbol, smoothing_factor, smoothing_factor_on, SmoothingReport};
pub use transfer::{mode_prolongation, prolongation_symbol, prolongation_symbol_direct, prolongation_weights};
pub use twogrid::{
    block_and_matrix, build_block, coarse_correction, coarse_symbol, rho_two_grid, two_grid_block,
    CoarseOperatorMode, HarmonicBlock, RhoReport, TwoGridConfig,
};
