use std::f64::consts::PI;

use crate::symbol::frequency::wrap_component;
use crate::symbol::{Frequency, GridGeometry};

/// Multi-indices α ∈ {0, …, m−1}^d in lexicographic order; α = 0 comes first.
pub fn harmonic_offsets(dim: usize, k: u32) -> Vec<Vec<usize>> {
    let m = 1usize << k;
    let total = m.pow(dim as u32);
    (0..total)
        .map(|mut flat| {
            let mut a = vec![0; dim];
            for d in (0..dim).rev() {
                a[d] = flat % m;
                flat /= m;
            }
            a
        })
        .collect()
}

/// The 2^{kd} frequencies aliased to `theta0` on the grid of width 2^k h,
/// wrapped into (−π/h, π/h]. The first entry is `theta0` itself.
pub fn harmonics(theta0: &Frequency, k: u32, g: &GridGeometry) -> Vec<Frequency> {
    let widths = g.mesh_widths();
    let m = (1u64 << k) as f64;
    harmonic_offsets(g.dimension, k)
        .into_iter()
        .map(|a| {
            let t: Vec<f64> = theta0
                .theta()
                .iter()
                .zip(&a)
                .zip(&widths)
                .map(|((&t, &ad), &h)| wrap_component(t + 2.0 * PI * ad as f64 / (m * h), h))
                .collect();
            Frequency::new(&t)
        })
        .collect()
}

/// Whether θ lies in the half-open low box (−π/(m h), π/(m h)]^d.
pub fn is_low(theta: &Frequency, k: u32, g: &GridGeometry) -> bool {
    let m = (1u64 << k) as f64;
    theta
        .theta()
        .iter()
        .zip(g.mesh_widths())
        .all(|(&t, h)| t > -PI / (m * h) && t <= PI / (m * h))
}
