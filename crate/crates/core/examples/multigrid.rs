// Matrix-free multigrid on the unit square: measured asymptotic rates of
// two-grid, V- and W-cycles with a Chebyshev smoother.

use polysmooth::mg::{measure_asymptotic_rate, CycleKind, CycleSpec, GridLevel};
use polysmooth::poly::SmootherSpec;

pub fn run() -> polysmooth::Result<()> {
    let grid = GridLevel::laplace(2, 63)?;
    let spec = SmootherSpec::chebyshev(2, 0.5, 2.0)?;
    for kind in [CycleKind::TwoGrid, CycleKind::V, CycleKind::W] {
        let (pre, post) = if kind == CycleKind::TwoGrid { (1, 0) } else { (1, 1) };
        let r = measure_asymptotic_rate(&CycleSpec::new(kind, 1, pre, post, spec), &grid, 40, 42)?;
        println!(
            "{kind:?}({pre},{post}): rate {:.4} over {} levels, monotone {}",
            r.rate, r.levels, r.monotone
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> polysmooth::Result<()> {
    run()
}
