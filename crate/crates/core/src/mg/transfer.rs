use rayon::prelude::*;

use super::grid::GridVector;
use crate::error::{Error, Result};

/// Interior points per axis after coarsening by 2^k, if the grid nests.
pub fn coarse_size(n: usize, k: u32) -> Option<usize> {
    let m = 1usize << k;
    ((n + 1).is_multiple_of(m) && (n + 1) / m >= 2).then(|| (n + 1) / m - 1)
}

/// Applies a 1D map along `axis` of a d-dimensional array with per-axis sizes
/// `dims`, producing size `out_len` on that axis.
fn along_axis(
    data: &[f64],
    dims: &[usize],
    axis: usize,
    out_len: usize,
    f: &(dyn Fn(&[f64], &mut [f64]) + Sync),
) -> (Vec<f64>, Vec<usize>) {
    let inner: usize = dims[axis + 1..].iter().product();
    let outer: usize = dims[..axis].iter().product();
    let len = dims[axis];
    let mut out_dims = dims.to_vec();
    out_dims[axis] = out_len;
    let mut out = vec![0.0; outer * out_len * inner];
    out.par_chunks_mut(out_len * inner).enumerate().for_each(|(o, block)| {
        let mut line = vec![0.0; len];
        let mut res = vec![0.0; out_len];
        for i in 0..inner {
            for (j, v) in line.iter_mut().enumerate() {
                *v = data[(o * len + j) * inner + i];
            }
            f(&line, &mut res);
            for (j, v) in res.iter().enumerate() {
                block[j * inner + i] = *v;
            }
        }
    });
    (out, out_dims)
}

fn prolongate_line(m: usize, coarse: &[f64], fine: &mut [f64]) {
    fine.iter_mut().for_each(|v| *v = 0.0);
    let nf = fine.len() as isize;
    for (jc, &c) in coarse.iter().enumerate() {
        let centre = (m * (jc + 1)) as isize - 1;
        for t in -(m as isize - 1)..=(m as isize - 1) {
            let i = centre + t;
            if i >= 0 && i < nf {
                fine[i as usize] += (1.0 - t.unsigned_abs() as f64 / m as f64) * c;
            }
        }
    }
}

fn restrict_line(m: usize, fine: &[f64], coarse: &mut [f64]) {
    let nf = fine.len() as isize;
    for (jc, c) in coarse.iter_mut().enumerate() {
        let centre = (m * (jc + 1)) as isize - 1;
        let mut acc = 0.0;
        for t in -(m as isize - 1)..=(m as isize - 1) {
            let i = centre + t;
            if i >= 0 && i < nf {
                acc += (1.0 - t.unsigned_abs() as f64 / m as f64) * fine[i as usize];
            }
        }
        *c = acc;
    }
}

/// Multilinear interpolation from the grid of width 2^k h.
pub fn prolongate(coarse: &GridVector, k: u32) -> Result<GridVector> {
    let m = 1usize << k;
    let nf = (coarse.n + 1) * m - 1;
    let mut data = coarse.data.clone();
    let mut dims = vec![coarse.n; coarse.dim];
    for axis in 0..coarse.dim {
        let (d, nd) = along_axis(&data, &dims, axis, nf, &|c, f| prolongate_line(m, c, f));
        data = d;
        dims = nd;
    }
    Ok(GridVector {
        dim: coarse.dim,
        n: nf,
        data,
    })
}

/// Adjoint of [`prolongate`] scaled by 2^{-kd}.
pub fn restrict(fine: &GridVector, k: u32) -> Result<GridVector> {
    let m = 1usize << k;
    let nc = coarse_size(fine.n, k).ok_or_else(|| {
        Error::Hierarchy(format!(
            "{} points per axis do not coarsen by a factor {m}",
            fine.n
        ))
    })?;
    let mut data = fine.data.clone();
    let mut dims = vec![fine.n; fine.dim];
    for axis in 0..fine.dim {
        let (d, nd) = along_axis(&data, &dims, axis, nc, &|f, c| restrict_line(m, f, c));
        data = d;
        dims = nd;
    }
    let s = 1.0 / (m.pow(fine.dim as u32)) as f64;
    data.par_iter_mut().for_each(|v| *v *= s);
    Ok(GridVector {
        dim: fine.dim,
        n: nc,
        data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(dim: usize, n: usize, rng: &mut ChaCha8Rng) -> GridVector {
        let mut v = GridVector::zeros(dim, n);
        v.data.iter_mut().for_each(|x| *x = rng.gen_range(-1.0..1.0));
        v
    }

    #[test]
    fn sizes() {
        assert_eq!(coarse_size(15, 1), Some(7));
        assert_eq!(coarse_size(15, 3), Some(1));
        assert_eq!(coarse_size(15, 4), None);
        assert_eq!(coarse_size(14, 1), None);
    }

    #[test]
    fn adjointness() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (dim, n, k) in [(2, 31, 1), (2, 31, 2), (3, 15, 1), (3, 15, 2), (2, 63, 3)] {
            let nc = coarse_size(n, k).unwrap();
            let c = random(dim, nc, &mut rng);
            let f = random(dim, n, &mut rng);
            let lhs = prolongate(&c, k).unwrap().dot(&f);
            let rhs = (1usize << (k as usize * dim)) as f64 * c.dot(&restrict(&f, k).unwrap());
            assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0), "{dim} {n} {k}");
        }
    }

    #[test]
    fn reproduces_linear_functions() {
        let (n, k) = (31usize, 2u32);
        let nc = coarse_size(n, k).unwrap();
        let f = |x: f64, y: f64| x * y;
        let hc = 1.0 / (nc + 1) as f64;
        let h = 1.0 / (n + 1) as f64;
        let mut c = GridVector::zeros(2, nc);
        for i in 0..nc {
            for j in 0..nc {
                c.data[i * nc + j] = f((i + 1) as f64 * hc, (j + 1) as f64 * hc);
            }
        }
        let p = prolongate(&c, k).unwrap();
        // x·y vanishes on the two axes through the origin, so only the far boundary layer differs
        let m = 1 << k;
        for i in 0..n - m {
            for j in 0..n - m {
                let want = f((i + 1) as f64 * h, (j + 1) as f64 * h);
                assert!((p.data[i * n + j] - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn bilinear_weights() {
        let mut c = GridVector::zeros(2, 3);
        c.data[4] = 1.0;
        let p = prolongate(&c, 1).unwrap();
        let at = |i: usize, j: usize| p.data[i * 7 + j];
        assert_eq!(at(3, 3), 1.0);
        assert_eq!(at(2, 3), 0.5);
        assert_eq!(at(2, 2), 0.25);
        assert_eq!(p.data.iter().sum::<f64>(), 4.0);
    }
}
