//! Acceptance criteria 1–9. Prints one PASS/FAIL line per criterion.
//!
//! Table criteria report honest outcomes and do not fail the run; the
//! self-contained numerical criteria (3, 4 and 9) must pass.

mod common;

use std::f64::consts::PI;
use std::io::Write;
use std::time::Instant;

use common::{assemble, remez_reciprocal};
use nalgebra::{DVector, SymmetricEigen};
use polysmooth::cli::reproduce::{reproduce_table, CellDiff, ReproduceOptions, TableReport};
use polysmooth::lfa::{
    block_and_matrix, build_block, coarse_correction, coarse_symbol, harmonics, is_low, CoarseOperatorMode,
    TwoGridConfig,
};
use polysmooth::mg::{apply_smoother, GridLevel, GridVector};
use polysmooth::poly::{ba1x_endpoint_errors, min_degree, SmootherSpec};
use polysmooth::smallmat::matmul;
use polysmooth::symbol::{
    build_fd_laplace, build_fem_tri_laplace, evaluate_symbol, Frequency, GridGeometry, PreconditionerKind, Stencil,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const H: f64 = 1.0 / 64.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(n: usize, title: &str, o: &Outcome) {
    let mut out = std::io::stdout().lock();
    let verdict = if o.pass { "PASS" } else { "FAIL" };
    writeln!(out, "criterion {n}: {verdict} {title}: {}", o.detail).unwrap();
    out.flush().unwrap();
}

fn describe(cells: &[&CellDiff]) -> String {
    let bad: Vec<String> = cells
        .iter()
        .filter(|c| !c.within)
        .map(|c| {
            format!(
                "k={} {} computed {:.4} vs {:.4} (tol {})",
                c.k, c.column, c.computed, c.reference, c.tolerance
            )
        })
        .collect();
    let ok = cells.len() - bad.len();
    if bad.is_empty() {
        format!("{ok}/{} cells within tolerance", cells.len())
    } else {
        format!("{ok}/{} cells within tolerance; outside: {}", cells.len(), bad.join("; "))
    }
}

fn table_outcome(r: &TableReport, filter: impl Fn(&CellDiff) -> bool) -> Outcome {
    let cells: Vec<&CellDiff> = r.cells.iter().filter(|c| filter(c)).collect();
    Outcome {
        pass: cells.iter().all(|c| c.within),
        detail: describe(&cells),
    }
}

fn criterion_2(r: &TableReport) -> Outcome {
    let mut o = table_outcome(r, |_| true);
    let flagged = r
        .cell(2, "lambda0")
        .map(|c| c.note.is_some() && (c.computed - 0.0976).abs() <= 1e-3)
        .unwrap_or(false);
    o.pass &= flagged;
    o.detail += if flagged {
        "; k=2 lambda0 corrected from printed 0.976 to 0.0976"
    } else {
        "; k=2 lambda0 correction missing"
    };
    o
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let m = rng.gen_range(1..=40);
        let kappa = rng.gen_range(1.5..100.0);
        let lambda1 = rng.gen_range(0.5..4.0);
        let lambda0 = lambda1 / kappa;
        let spec = SmootherSpec::ba1x(m, lambda0, lambda1).unwrap();
        let (at1, _) = ba1x_endpoint_errors(m, lambda0, lambda0, lambda1).unwrap();
        worst = worst.max((at1 - spec.error_poly(lambda1).abs()).abs());
    }
    let (sixth, _) = ba1x_endpoint_errors(2, 0.5, 0.5, 2.0).unwrap();
    let sixth_err = (sixth - 1.0 / 6.0).abs();
    Outcome {
        pass: worst < 1e-10 && sixth_err < 1e-10,
        detail: format!("max |closed form - recurrence| {worst:.1e} over 100 cases; m=2 on [0.5, 2] off 1/6 by {sixth_err:.1e}"),
    }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let m = rng.gen_range(1..=12);
        let lambda1 = rng.gen_range(1.0..3.0);
        let lambda0 = lambda1 / rng.gen_range(2.0..40.0);
        let spec = SmootherSpec::ba1x(m, lambda0, lambda1).unwrap();
        let remez = remez_reciprocal(m, lambda0, lambda1);
        for i in 0..10_000 {
            let x = lambda0 + (lambda1 - lambda0) * i as f64 / 9999.0;
            worst = worst.max((spec.q_value(x) - remez.eval(x)).abs());
        }
    }
    Outcome {
        pass: worst < 1e-8,
        detail: format!("max deviation {worst:.1e} over 20 random intervals and degrees"),
    }
}

fn criterion_5(r: &TableReport) -> Outcome {
    let mut o = table_outcome(r, |_| true);
    if let Some(c) = r.cell(1, "chebyshev_rho_lfa") {
        o.detail += &format!("; smoke pair k=1 chebyshev rho_lfa {:.4}", c.computed);
    }
    if let Some(c) = r.cell(1, "chebyshev_rho_w") {
        o.detail += &format!(", measured {:.4}", c.computed);
    }
    o
}

fn criterion_7(r2: &TableReport, r3: &TableReport) -> Outcome {
    let rate_cols = ["ba1x", "ba1x_star", "chebyshev"];
    let cells: Vec<&CellDiff> = r2
        .cells
        .iter()
        .chain(&r3.cells)
        .filter(|c| rate_cols.contains(&c.column.as_str()))
        .collect();
    Outcome {
        pass: cells.iter().all(|c| c.within),
        detail: describe(&cells),
    }
}

/// Galerkin and rediscretized coarse symbols of the nested triangular FEM
/// discretizations, compared at random low frequencies.
fn fem_mode_identity() -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let spec = SmootherSpec::chebyshev(1, 0.3, 1.5).unwrap();
    let mut worst = 0.0f64;
    for (alpha, beta) in [(PI / 3.0, PI / 3.0), (4.0 * PI / 9.0, 4.0 * PI / 9.0)] {
        let s = build_fem_tri_laplace(alpha, beta, H).unwrap();
        for k in 1..=3u32 {
            let m = (1u32 << k) as f64;
            for _ in 0..50 {
                let t = [
                    rng.gen_range(-1.0..1.0) * PI / (m * H),
                    rng.gen_range(-1.0..1.0) * PI / (m * H),
                ];
                let block = build_block(&s, PreconditionerKind::Jacobi, &spec, k, &Frequency::new(&t)).unwrap();
                let g = coarse_symbol(&block, CoarseOperatorMode::Galerkin, &s, k).unwrap();
                let r = coarse_symbol(&block, CoarseOperatorMode::Rediscretized, &s, k).unwrap();
                worst = worst.max((g - r).abs() / s.abs_sum());
            }
        }
    }
    worst
}

fn criterion_8(r6: &TableReport, r7: &TableReport) -> Outcome {
    let l_eq = r6.lambda1[0];
    let l_iso = r7.lambda1[0];
    let eq_ok = (l_eq - 1.5).abs() < 1e-6;
    let iso_ok = (l_iso - 17.0 / 9.0).abs() < 1e-6;
    let t6 = table_outcome(r6, |_| true);
    let t7 = table_outcome(r7, |_| true);
    let identity = fem_mode_identity();
    Outcome {
        pass: eq_ok && iso_ok && t6.pass && t7.pass && identity < 1e-10,
        detail: format!(
            "lambda1 equilateral {l_eq:.9} ({}), isosceles {l_iso:.9} vs 17/9 ({}); table 6: {}; table 7: {}; \
             Galerkin vs rediscretized coarse symbol max relative gap {identity:.1e}",
            if eq_ok { "ok" } else { "off" },
            if iso_ok { "ok" } else { "off" },
            t6.detail,
            t7.detail
        ),
    }
}

fn stencils() -> Vec<Stencil> {
    vec![
        build_fd_laplace(&GridGeometry::uniform(2, H).unwrap()).unwrap(),
        build_fd_laplace(&GridGeometry::uniform(3, H).unwrap()).unwrap(),
        build_fem_tri_laplace(PI / 3.0, PI / 3.0, H).unwrap(),
        build_fem_tri_laplace(4.0 * PI / 9.0, 4.0 * PI / 9.0, H).unwrap(),
    ]
}

fn random_frequency(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> Frequency {
    let t: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0) * scale * PI / H).collect();
    Frequency::new(&t)
}

fn criterion_9(reports: &[&TableReport]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut failures = Vec::new();

    let mut conj = 0.0f64;
    let mut partition = true;
    let mut idem = 0.0f64;
    for s in stencils() {
        let d = s.dimension();
        for _ in 0..100 {
            let f = random_frequency(&mut rng, d, 1.0);
            let a = evaluate_symbol(&s, &f);
            let b = evaluate_symbol(&s, &f.negated());
            conj = conj.max((a - b.conj()).norm() / s.abs_sum());
        }
        for k in 1..=3u32 {
            let m = (1u32 << k) as f64;
            for _ in 0..20 {
                let f0 = random_frequency(&mut rng, d, 0.999 / m);
                let hs = harmonics(&f0, k, &s.geometry);
                partition &= hs.len() == (1usize << k).pow(d as u32)
                    && is_low(&hs[0], k, &s.geometry)
                    && hs[1..].iter().all(|f| !is_low(f, k, &s.geometry));
            }
        }
        let spec = SmootherSpec::chebyshev(2, 0.3, 1.5).unwrap();
        for k in 1..=2u32 {
            let m = (1u32 << k) as f64;
            let cfg = TwoGridConfig::new(s.clone(), PreconditionerKind::Jacobi, spec, k);
            for _ in 0..10 {
                let f0 = random_frequency(&mut rng, d, 0.95 / m);
                let Ok((_, block)) = block_and_matrix(&cfg, &f0) else {
                    continue;
                };
                let c = coarse_correction(&block);
                let c2 = matmul(&c, &c).unwrap();
                idem = idem.max(c2.sub(&c).unwrap().norm_inf() / c.norm_inf().max(1.0));
            }
        }
    }
    if conj > 1e-12 {
        failures.push(format!("conjugate symmetry gap {conj:.1e}"));
    }
    if !partition {
        failures.push("harmonic partition".to_string());
    }
    if idem > 1e-9 {
        failures.push(format!("coarse correction idempotence gap {idem:.1e}"));
    }

    // smoother eigenbasis on the 7×7 interior grid
    let level = GridLevel::laplace(2, 7).unwrap();
    let a = assemble(&level);
    let diag = level.stencil.center();
    let eig = SymmetricEigen::new(a.clone());
    let mut eig_gap = 0.0f64;
    for spec in [
        SmootherSpec::chebyshev(3, 0.3, 2.0).unwrap(),
        SmootherSpec::sa(3, 2.0).unwrap(),
        SmootherSpec::ba1x(3, 0.3, 2.0).unwrap(),
    ] {
        for (j, &lam) in eig.eigenvalues.iter().enumerate() {
            let v = eig.eigenvectors.column(j).into_owned();
            let r = GridVector {
                dim: 2,
                n: 7,
                data: (&a * &v).iter().cloned().collect(),
            };
            let rav = apply_smoother(&level, &spec, PreconditionerKind::Jacobi, &r).unwrap();
            let ev = &v - DVector::from_vec(rav.data);
            eig_gap = eig_gap.max((ev - &v * spec.error_poly(lam / diag)).amax());
        }
    }
    if eig_gap > 1e-8 {
        failures.push(format!("eigenbasis oracle gap {eig_gap:.1e}"));
    }

    let rates: Vec<_> = reports.iter().flat_map(|r| r.rates.iter()).collect();
    let non_monotone = rates.iter().filter(|r| !r.monotone).count();
    if non_monotone > 0 {
        failures.push(format!("{non_monotone} non-monotone A-norm histories"));
    }

    // minimal degree against a brute-force scan
    let mut scan_bad = 0;
    for _ in 0..50 {
        let rho = rng.gen_range(0.01..0.5);
        let kappa = rng.gen_range(2.0..200.0);
        let lambda1 = rng.gen_range(1.0..3.0);
        let lambda0 = lambda1 / kappa;
        let m = min_degree(rho, kappa, lambda1);
        let good = |m: usize| {
            SmootherSpec::ba1x(m, lambda0, lambda1)
                .map(|s| {
                    s.max_abs_error(lambda0, lambda1, 2001) <= rho
                        && (1..=2000).all(|i| s.q_value(lambda1 * i as f64 / 2000.0) > 0.0)
                })
                .unwrap_or(false)
        };
        let scanned = (0..=200).find(|&j| good(j)).unwrap_or(usize::MAX);
        // the positivity term of the bound is sufficient but can exceed the scan by one
        let damping_decides = min_degree(rho, kappa, f64::INFINITY) == m;
        if m < scanned || (damping_decides && m != scanned) || !good(m) {
            scan_bad += 1;
        }
    }
    if scan_bad > 0 {
        failures.push(format!("min_degree disagrees with the scan in {scan_bad}/50 cases"));
    }

    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!(
                "symmetry {conj:.1e}, partition exact, idempotence {idem:.1e}, eigenbasis {eig_gap:.1e}, \
                 {} monotone rate histories, min_degree scan 50/50",
                rates.len()
            )
        } else {
            failures.join("; ")
        },
    }
}

fn main() {
    let start = Instant::now();
    let opts = ReproduceOptions {
        w_cycle: false,
        ..ReproduceOptions::default()
    };
    let run = |id: &str| {
        let t = Instant::now();
        let r = reproduce_table(id, &opts).unwrap_or_else(|e| panic!("table {id}: {e}"));
        eprintln!("table {id} reproduced in {:.1}s", t.elapsed().as_secs_f64());
        r
    };

    let t1 = run("1");
    report(1, "table 1 smoothing factors (2D)", &table_outcome(&t1, |_| true));
    let t2 = run("2");
    report(2, "table 2 smoothing factors (3D)", &criterion_2(&t2));
    let c3 = criterion_3();
    report(3, "closed-form endpoint errors vs recurrence", &c3);
    let c4 = criterion_4();
    report(4, "BA1x vs Remez best approximation", &c4);
    let t3 = run("3");
    report(5, "table 3 two-grid factors and measured rates", &criterion_5(&t3));
    let t4 = run("4");
    report(6, "table 4 two-grid optimal lambda0", &table_outcome(&t4, |_| true));
    let t5 = run("5");
    let t5_3d = run("5-3d");
    report(7, "V(1,1) measured rates (2D and 3D)", &criterion_7(&t5, &t5_3d));
    let t6 = run("6");
    let t7 = run("7");
    report(8, "triangular LFA", &criterion_8(&t6, &t7));
    let c9 = criterion_9(&[&t1, &t2, &t3, &t4, &t5, &t5_3d, &t6, &t7]);
    report(9, "property suites", &c9);

    eprintln!("acceptance run took {:.1}s", start.elapsed().as_secs_f64());
    if !(c3.pass && c4.pass && c9.pass) {
        std::process::exit(1);
    }
}
