// Two-grid local Fourier analysis with both coarse operators, and the λ₀
// that minimizes the two-grid factor.

use polysmooth::lfa::{optimal_lambda0_two_grid, rho_two_grid, CoarseOperatorMode, TwoGridConfig};
use polysmooth::poly::SmootherSpec;
use polysmooth::symbol::{build_fd_laplace, GridGeometry, PreconditionerKind};

pub fn run() -> polysmooth::Result<()> {
    let stencil = build_fd_laplace(&GridGeometry::uniform(2, 1.0 / 64.0)?)?;
    let spec = SmootherSpec::chebyshev(2, 0.5, 2.0)?;
    for mode in [CoarseOperatorMode::Galerkin, CoarseOperatorMode::Rediscretized] {
        let cfg = TwoGridConfig::new(stencil.clone(), PreconditionerKind::Jacobi, spec, 1).with_mode(mode);
        let r = rho_two_grid(&cfg)?;
        println!("{:>14}: rho = {:.4} at theta = {:?}", mode.to_string(), r.rho, r.argmax.theta());
        let opt = optimal_lambda0_two_grid(&cfg)?;
        println!("{:>14}  optimal lambda0 = {:.4}, rho = {:.4}", "", opt.lambda0, opt.rho);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> polysmooth::Result<()> {
    run()
}
