// Eigenvalues and spectral radius of a small complex matrix.

use num_complex::Complex64;
use polysmooth::smallmat::{eigenvalues, spectral_radius, ComplexMatrix};

pub fn run() -> polysmooth::Result<()> {
    // rotation by 90 degrees scaled by 2, plus a real eigenvalue 0.5
    let i = Complex64::new(0.0, 1.0);
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let m = ComplexMatrix::new(
        3,
        3,
        vec![z, -2.0 * one, z, 2.0 * one, z, z, z, i, 0.5 * one],
    )?;
    for ev in eigenvalues(&m)? {
        println!("eigenvalue {:+.6} {:+.6}i", ev.re, ev.im);
    }
    println!("spectral radius {:.6}", spectral_radius(&m)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> polysmooth::Result<()> {
    run()
}
