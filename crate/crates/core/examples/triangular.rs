// LFA on structured triangular grids with linear finite elements.

use polysmooth::lfa::{rho_two_grid, smoothing_factor, TwoGridConfig};
use polysmooth::poly::SmootherSpec;
use polysmooth::symbol::{angle_preset, build_fem_tri_laplace, FrequencySampling, PreconditionerKind};

pub fn run() -> polysmooth::Result<()> {
    for name in ["equilateral", "isosceles-80"] {
        let (alpha, beta) = angle_preset(name).expect("known preset");
        let stencil = build_fem_tri_laplace(alpha, beta, 1.0 / 64.0)?;
        let probe = SmootherSpec::chebyshev(1, 0.5, 1.5)?;
        let rep = smoothing_factor(&stencil, PreconditionerKind::Jacobi, &probe, 1, 1, &FrequencySampling::default())?;
        let (l0, l1) = (rep.bounds.lambda0, rep.bounds.lambda1);
        let spec = SmootherSpec::chebyshev(1, l0, l1)?;
        let cfg = TwoGridConfig::new(stencil, PreconditionerKind::Jacobi, spec, 1);
        println!(
            "{name:>13}: lambda0 = {l0:.4}, lambda1 = {l1:.6}, two-grid rho = {:.4}",
            rho_two_grid(&cfg)?.rho
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> polysmooth::Result<()> {
    run()
}
