// Error polynomials e(x) = 1 - x q(x) of the smoother families, the optimal
// left endpoint and the minimal BA1x degree for a damping target.

use polysmooth::poly::{min_degree, optimal_lambda0_smoothing, SmootherSpec};

pub fn run() -> polysmooth::Result<()> {
    let (l0, l1, m) = (0.146, 2.0, 6);
    let specs = [
        ("chebyshev", SmootherSpec::chebyshev(m, l0, l1)?),
        ("sa", SmootherSpec::sa(m, l1)?),
        ("ba1x", SmootherSpec::ba1x(m, l0, l1)?),
    ];
    println!("x       {:>10} {:>10} {:>10}", specs[0].0, specs[1].0, specs[2].0);
    for i in 0..=8 {
        let x = l0 + (l1 - l0) * i as f64 / 8.0;
        let e: Vec<String> = specs.iter().map(|(_, s)| format!("{:>10.5}", s.error_poly(x))).collect();
        println!("{x:.4}  {}", e.join(" "));
    }
    let star = optimal_lambda0_smoothing(m, l0, l1)?;
    println!("optimal lambda0 for BA1x degree {m} on [{l0}, {l1}]: {star:.4}");
    for rho in [0.1, 0.05, 0.01] {
        println!("min BA1x degree for damping {rho} at kappa 50: {}", min_degree(rho, 50.0, l1));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> polysmooth::Result<()> {
    run()
}
