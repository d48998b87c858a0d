//! Polynomial smoothers for aggressive-coarsening multigrid, with local
//! Fourier analysis and a geometric solver for constant-coefficient stencils.

pub mod cli;
pub mod error;
pub mod lfa;
pub mod mg;
pub mod poly;
pub mod search;
pub mod smallmat;
pub mod symbol;

pub use error::{Error, Result};
