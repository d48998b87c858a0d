// Smoothing factors of the three polynomial smoothers for the 5-point
// Laplacian under aggressive coarsening.

use polysmooth::lfa::smoothing_factor;
use polysmooth::poly::{optimal_lambda0_smoothing, SmootherSpec};
use polysmooth::symbol::{build_fd_laplace, FrequencySampling, GridGeometry, PreconditionerKind};

pub fn run() -> polysmooth::Result<()> {
    let stencil = build_fd_laplace(&GridGeometry::uniform(2, 1.0 / 64.0)?)?;
    let sampling = FrequencySampling::default();
    println!("k  degree  lambda0  cheb     sa       ba1x     ba1x*");
    for (k, degree) in [(1u32, 2usize), (2, 6), (3, 17)] {
        let probe = SmootherSpec::chebyshev(degree, 0.5, 2.0)?;
        let bounds = smoothing_factor(&stencil, PreconditionerKind::Jacobi, &probe, k, 1, &sampling)?.bounds;
        let (l0, l1) = (bounds.lambda0, bounds.lambda1);
        let star = optimal_lambda0_smoothing(degree, l0, l1)?;
        let mu = |spec: SmootherSpec| spec.max_abs_error(l0, l1, 20_001);
        println!(
            "{k}  {degree:>6}  {l0:.3}    {:.4}   {:.4}   {:.4}   {:.4}",
            mu(SmootherSpec::chebyshev(degree, l0, l1)?),
            mu(SmootherSpec::sa(degree, l1)?),
            mu(SmootherSpec::ba1x(degree, l0, l1)?),
            mu(SmootherSpec::ba1x(degree, star, l1)?),
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> polysmooth::Result<()> {
    run()
}
