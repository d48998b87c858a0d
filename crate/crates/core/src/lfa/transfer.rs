use crate::symbol::{Frequency, GeometryKind, GridGeometry};

/// Interpolation weights of the nested piecewise (multi)linear space of
/// factor 2^k, indexed by fine lattice offset.
pub fn prolongation_weights(g: &GridGeometry, k: u32) -> Vec<(Vec<i32>, f64)> {
    let m = 1i32 << k;
    let d = g.dimension;
    let span = (2 * m - 1) as usize;
    let mut out = Vec::new();
    for flat in 0..span.pow(d as u32) {
        let mut f = flat;
        let mut j = vec![0i32; d];
        for c in (0..d).rev() {
            j[c] = (f % span) as i32 - (m - 1);
            f /= span;
        }
        let w = match g.kind {
            GeometryKind::Rectangular { .. } => j
                .iter()
                .map(|&x| 1.0 - (x.abs() as f64) / m as f64)
                .product::<f64>(),
            GeometryKind::Triangular { .. } => {
                let (x, y) = (j[0] as f64 / m as f64, j[1] as f64 / m as f64);
                1.0 - x.abs().max(y.abs()).max((x - y).abs())
            }
        };
        if w > 0.0 {
            out.push((j, w));
        }
    }
    out
}

/// Symbol of prolongation, Σ_j w(j) e^{iθ·jh}; equals 2^{kd} at θ = 0.
///
/// Rectangular grids use the closed product form. Triangular grids compose
/// k factor-two symbols, which equals the direct weight sum by nestedness.
pub fn prolongation_symbol(theta: &Frequency, k: u32, g: &GridGeometry) -> f64 {
    let widths = g.mesh_widths();
    match g.kind {
        GeometryKind::Rectangular { .. } => {
            let m = (1u64 << k) as f64;
            theta
                .theta()
                .iter()
                .zip(&widths)
                .map(|(&t, &h)| {
                    let s = (0.5 * t * h).sin();
                    if s.abs() < 1e-12 {
                        // limit m plus the leading correction
                        let x = 0.5 * t * h;
                        m * (1.0 - (m * m - 1.0) * x * x / 3.0)
                    } else {
                        let r = (0.5 * m * t * h).sin() / s;
                        r * r / m
                    }
                })
                .product()
        }
        GeometryKind::Triangular { .. } => {
            let (t1, t2) = (theta.theta()[0] * widths[0], theta.theta()[1] * widths[1]);
            (0..k)
                .map(|i| {
                    let s = (1u64 << i) as f64;
                    1.0 + (s * t1).cos() + (s * t2).cos() + (s * (t1 + t2)).cos()
                })
                .product()
        }
    }
}

/// Prolongation symbol summed directly from the interpolation weights.
pub fn prolongation_symbol_direct(theta: &Frequency, k: u32, g: &GridGeometry) -> f64 {
    let widths = g.mesh_widths();
    prolongation_weights(g, k)
        .iter()
        .map(|(j, w)| {
            let phase: f64 = j
                .iter()
                .zip(theta.theta())
                .zip(&widths)
                .map(|((&o, &t), &h)| o as f64 * t * h)
                .sum();
            w * phase.cos()
        })
        .sum()
}

/// Prolongation symbol normalized to 1 at θ = 0, the form that enters the
/// two-grid block together with restriction R = Pᵀ/2^{kd}.
pub fn mode_prolongation(theta: &Frequency, k: u32, g: &GridGeometry) -> f64 {
    prolongation_symbol(theta, k, g) / (1u64 << (k as usize * g.dimension)) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::angle_preset;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_theta(rng: &mut ChaCha8Rng, g: &GridGeometry) -> Frequency {
        let t: Vec<f64> = g.mesh_widths().iter().map(|h| rng.gen_range(-PI..PI) / h).collect();
        Frequency::new(&t)
    }

    #[test]
    fn closed_form_matches_weight_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (a, b) = angle_preset("isosceles-80").unwrap();
        let geoms = [
            GridGeometry::uniform(2, 0.1).unwrap(),
            GridGeometry::rectangular(vec![0.1, 0.05, 0.2]).unwrap(),
            GridGeometry::triangular(PI / 3.0, PI / 3.0, 0.1).unwrap(),
            GridGeometry::triangular(a, b, 0.1).unwrap(),
        ];
        for g in &geoms {
            for k in 1..=3 {
                for _ in 0..20 {
                    let t = random_theta(&mut rng, g);
                    let fast = prolongation_symbol(&t, k, g);
                    let slow = prolongation_symbol_direct(&t, k, g);
                    assert!((fast - slow).abs() < 1e-10 * (1u64 << (2 * k)) as f64, "{g:?} k={k}");
                }
            }
        }
    }

    #[test]
    fn zero_and_nyquist() {
        let g = GridGeometry::uniform(2, 0.25).unwrap();
        for k in 1..=3 {
            let m = (1u64 << k) as f64;
            let zero = Frequency::new(&[0.0, 0.0]);
            assert!((prolongation_symbol(&zero, k, &g) - m * m).abs() < 1e-12);
            assert!((mode_prolongation(&zero, k, &g) - 1.0).abs() < 1e-12);
            let nyq = Frequency::new(&[PI / 0.25, 0.3]);
            assert!(prolongation_symbol(&nyq, k, &g).abs() < 1e-12);
        }
    }

    #[test]
    fn bilinear_factor_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = GridGeometry::uniform(2, 1.0).unwrap();
        for _ in 0..20 {
            let t = random_theta(&mut rng, &g);
            let (x, y) = (t.theta()[0], t.theta()[1]);
            let expect = 4.0 * (x / 2.0).cos().powi(2) * (y / 2.0).cos().powi(2);
            assert!((prolongation_symbol(&t, 1, &g) - expect).abs() < 1e-12);
        }
        let w = prolongation_weights(&g, 1);
        assert_eq!(w.len(), 9);
        let at = |o: [i32; 2]| w.iter().find(|(j, _)| j[..] == o).unwrap().1;
        assert_eq!(at([0, 0]), 1.0);
        assert_eq!(at([1, 0]), 0.5);
        assert_eq!(at([1, -1]), 0.25);
    }
}
