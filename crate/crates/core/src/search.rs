//! Derivative-free local refinement used to sharpen lattice extrema.

/// Compass/diagonal pattern search maximizing `f` over the set accepted by
/// `feasible`, starting from a feasible point. `step` is the initial step per
/// coordinate; the search stops once the steps have shrunk by `shrink_to`.
pub(crate) fn pattern_maximize<F, C>(
    f: F,
    feasible: C,
    start: &[f64],
    step: &[f64],
    shrink_to: f64,
    max_evals: usize,
) -> (f64, Vec<f64>)
where
    F: Fn(&[f64]) -> f64,
    C: Fn(&[f64]) -> bool,
{
    let d = start.len();
    let dirs = directions(d);
    let mut x = start.to_vec();
    let mut best = f(&x);
    let mut scale = 1.0;
    let mut evals = 1;
    let mut trial = vec![0.0; d];
    while scale > shrink_to && evals < max_evals {
        let mut improved = false;
        for dir in &dirs {
            for i in 0..d {
                trial[i] = x[i] + dir[i] * step[i] * scale;
            }
            if !feasible(&trial) {
                continue;
            }
            let v = f(&trial);
            evals += 1;
            if v > best {
                best = v;
                x.copy_from_slice(&trial);
                improved = true;
                break;
            }
        }
        if !improved {
            scale *= 0.5;
        }
    }
    (best, x)
}

fn directions(d: usize) -> Vec<Vec<f64>> {
    let mut dirs = Vec::new();
    for a in 0..d {
        for s in [1.0, -1.0] {
            let mut v = vec![0.0; d];
            v[a] = s;
            dirs.push(v);
        }
    }
    for a in 0..d {
        for b in a + 1..d {
            for (sa, sb) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut v = vec![0.0; d];
                v[a] = sa;
                v[b] = sb;
                dirs.push(v);
            }
        }
    }
    dirs
}

/// Golden-section minimization of a unimodal function on `[lo, hi]`.
pub(crate) fn golden_minimize<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - r * (hi - lo);
    let mut d = lo + r * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while hi - lo > tol {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - r * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + r * (hi - lo);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
