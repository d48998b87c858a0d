mod common;

use common::{char_poly, naive_matmul, poly_roots, remez_reciprocal, to_dmatrix};
use nalgebra::Schur;
use num_complex::Complex64;
use polysmooth::lfa::{two_grid_block, CoarseOperatorMode, TwoGridConfig};
use polysmooth::poly::SmootherSpec;
use polysmooth::smallmat::{eigenvalues, matmul, spectral_radius, ComplexMatrix};
use polysmooth::symbol::{build_fd_laplace, Frequency, GridGeometry, PreconditionerKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let data = (0..n * n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::new(n, n, data).unwrap()
}

/// Largest distance from each value in `a` to its nearest partner in `b`,
/// with every partner used once.
fn match_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.partial_cmp(&q.1).unwrap())
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

#[test]
fn eigenvalues_match_characteristic_polynomial_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in 1..=6 {
        for _ in 0..10 {
            let m = random_matrix(&mut rng, n);
            let ours = eigenvalues(&m).unwrap();
            let roots = poly_roots(&char_poly(&m));
            assert!(match_distance(&ours, &roots) < 1e-8, "n = {n}");
        }
    }
}

#[test]
fn eigenvalues_match_dense_schur() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for n in [4, 8, 16, 64] {
        let m = random_matrix(&mut rng, n);
        let ours = eigenvalues(&m).unwrap();
        let t = Schur::new(to_dmatrix(&m)).unpack().1;
        let reference: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
        assert!(match_distance(&ours, &reference) < 1e-9, "n = {n}");
    }
}

#[test]
fn two_grid_block_radius_matches_schur() {
    let s = build_fd_laplace(&GridGeometry::uniform(2, 1.0 / 64.0).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for k in 1..=3u32 {
        let spec = SmootherSpec::chebyshev(3, 0.1, 2.0).unwrap();
        for mode in [CoarseOperatorMode::Galerkin, CoarseOperatorMode::Rediscretized] {
            let cfg = TwoGridConfig::new(s.clone(), PreconditionerKind::Jacobi, spec, k).with_mode(mode);
            let m = (1u32 << k) as f64;
            let t = [
                rng.gen_range(0.1..1.0) * std::f64::consts::PI * 64.0 / m,
                -rng.gen_range(0.1..1.0) * std::f64::consts::PI * 64.0 / m,
            ];
            let b = two_grid_block(&cfg, &Frequency::new(&t)).unwrap();
            let t = Schur::new(to_dmatrix(&b)).unpack().1;
            let reference = (0..b.rows()).map(|i| t[(i, i)].norm()).fold(0.0, f64::max);
            assert!((spectral_radius(&b).unwrap() - reference).abs() < 1e-10, "k = {k}");
        }
    }
}

#[test]
fn matmul_matches_naive_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for n in [1, 3, 7, 16] {
        let (a, b) = (random_matrix(&mut rng, n), random_matrix(&mut rng, n));
        let d = matmul(&a, &b).unwrap().sub(&naive_matmul(&a, &b)).unwrap();
        assert!(d.norm_inf() < 1e-12);
    }
}

#[test]
fn ba1x_matches_remez_on_the_documented_case() {
    let spec = SmootherSpec::ba1x(5, 0.146, 2.0).unwrap();
    let r = remez_reciprocal(5, 0.146, 2.0);
    let worst = (0..10_000)
        .map(|i| 0.146 + (2.0 - 0.146) * i as f64 / 9999.0)
        .map(|x| (spec.q_value(x) - r.eval(x)).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-8, "max deviation {worst}");
}

#[test]
fn ba1x_endpoint_error_is_the_levelled_remez_error() {
    // |1 − λ₁ q(λ₁)| = λ₁ E where E is the equioscillation level of 1/x − q
    let r = remez_reciprocal(2, 0.5, 2.0);
    assert!((2.0 * r.error - 1.0 / 6.0).abs() < 1e-10);
}
