//! Independent reference implementations used only by tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use polysmooth::mg::GridLevel;
use polysmooth::smallmat::ComplexMatrix;

/// Best uniform polynomial approximation of 1/x on [a, b], found by the Remez
/// exchange algorithm in a Chebyshev basis.
pub struct Remez {
    pub a: f64,
    pub b: f64,
    pub coeffs: Vec<f64>,
    /// Levelled error at the final reference.
    pub error: f64,
}

impl Remez {
    pub fn eval(&self, x: f64) -> f64 {
        let t = (2.0 * x - self.a - self.b) / (self.b - self.a);
        // Clenshaw
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * t * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        t * b1 - b2 + self.coeffs[0]
    }

    fn err(&self, x: f64) -> f64 {
        1.0 / x - self.eval(x)
    }
}

fn cheb_basis(t: f64, n: usize) -> Vec<f64> {
    let mut v = vec![1.0; n];
    if n > 1 {
        v[1] = t;
    }
    for j in 2..n {
        v[j] = 2.0 * t * v[j - 1] - v[j - 2];
    }
    v
}

pub fn remez_reciprocal(degree: usize, a: f64, b: f64) -> Remez {
    let n = degree + 2;
    let mut refs: Vec<f64> = (0..n)
        .map(|i| 0.5 * (a + b) - 0.5 * (b - a) * (std::f64::consts::PI * i as f64 / (n - 1) as f64).cos())
        .collect();
    let grid_n = 20_000;
    let grid: Vec<f64> = (0..=grid_n).map(|i| a + (b - a) * i as f64 / grid_n as f64).collect();
    let mut r = Remez {
        a,
        b,
        coeffs: vec![0.0; degree + 1],
        error: 0.0,
    };
    for _ in 0..200 {
        let mut m = DMatrix::<f64>::zeros(n, n);
        let mut rhs = DVector::<f64>::zeros(n);
        for (i, &x) in refs.iter().enumerate() {
            let t = (2.0 * x - a - b) / (b - a);
            for (j, v) in cheb_basis(t, degree + 1).into_iter().enumerate() {
                m[(i, j)] = v;
            }
            m[(i, degree + 1)] = if i % 2 == 0 { 1.0 } else { -1.0 };
            rhs[i] = 1.0 / x;
        }
        let sol = m.lu().solve(&rhs).expect("reference system is regular");
        r.coeffs = sol.iter().take(degree + 1).cloned().collect();
        r.error = sol[degree + 1].abs();
        // extrema of the error between its sign changes
        let vals: Vec<f64> = grid.iter().map(|&x| r.err(x)).collect();
        let mut ext: Vec<(f64, f64)> = Vec::new();
        let mut start = 0;
        for i in 1..=grid.len() {
            if i == grid.len() || vals[i].signum() != vals[start].signum() {
                let best = (start..i)
                    .max_by(|&p, &q| vals[p].abs().partial_cmp(&vals[q].abs()).unwrap())
                    .unwrap();
                ext.push((grid[best], vals[best]));
                start = i;
            }
        }
        while ext.len() > n {
            if ext[0].1.abs() < ext[ext.len() - 1].1.abs() {
                ext.remove(0);
            } else {
                ext.pop();
            }
        }
        if ext.len() < n {
            break;
        }
        // polish each interior extremum by golden section on |err|
        let h = (b - a) / grid_n as f64;
        for e in ext.iter_mut() {
            let (mut lo, mut hi) = ((e.0 - h).max(a), (e.0 + h).min(b));
            let g = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..60 {
                let x1 = hi - g * (hi - lo);
                let x2 = lo + g * (hi - lo);
                if r.err(x1).abs() > r.err(x2).abs() {
                    hi = x2;
                } else {
                    lo = x1;
                }
            }
            let x = 0.5 * (lo + hi);
            if r.err(x).abs() > e.1.abs() {
                *e = (x, r.err(x));
            }
        }
        let new_refs: Vec<f64> = ext.iter().map(|e| e.0).collect();
        let mags: Vec<f64> = ext.iter().map(|e| e.1.abs()).collect();
        let (mx, mn) = (
            mags.iter().cloned().fold(0.0, f64::max),
            mags.iter().cloned().fold(f64::INFINITY, f64::min),
        );
        refs = new_refs;
        if (mx - mn) <= 1e-13 * mx {
            break;
        }
    }
    r
}

/// Coefficients c_0..c_n of det(zI − A) = Σ c_j z^j by Faddeev–LeVerrier.
pub fn char_poly(a: &ComplexMatrix) -> Vec<Complex64> {
    let n = a.rows();
    let get = |m: &Vec<Complex64>, i: usize, j: usize| m[i * n + j];
    let am: Vec<Complex64> = (0..n * n).map(|p| a[(p / n, p % n)]).collect();
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    c[n] = Complex64::new(1.0, 0.0);
    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    for k in 1..=n {
        // M_k = A M_{k−1} + c_{n−k+1} I
        let mut next = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for l in 0..n {
                    s += get(&am, i, l) * get(&m, l, j);
                }
                next[i * n + j] = s;
            }
            next[i * n + i] += c[n - k + 1];
        }
        m = next;
        // c_{n−k} = −tr(A M_k)/k
        let mut tr = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for l in 0..n {
                tr += get(&am, i, l) * get(&m, l, i);
            }
        }
        c[n - k] = -tr / k as f64;
    }
    c
}

/// All roots of a monic polynomial by Durand–Kerner iteration.
pub fn poly_roots(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &ci| acc * z + ci);
    let radius = 1.0 + c[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32) * radius * 0.5).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    z
}

/// Textbook triple-loop product.
pub fn naive_matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (n, m, p) = (a.rows(), a.cols(), b.cols());
    let mut data = vec![Complex64::new(0.0, 0.0); n * p];
    for i in 0..n {
        for j in 0..p {
            for k in 0..m {
                data[i * p + j] += a[(i, k)] * b[(k, j)];
            }
        }
    }
    ComplexMatrix::new(n, p, data).unwrap()
}

/// Dense matrix of a level's operator, built entry by entry from the stencil.
pub fn assemble(level: &GridLevel) -> DMatrix<f64> {
    let (n, d) = (level.n as i64, level.dim);
    let total = level.len();
    let mut a = DMatrix::<f64>::zeros(total, total);
    let index = |c: &[i64]| -> Option<usize> {
        if c.iter().any(|&x| x < 0 || x >= n) {
            return None;
        }
        Some(c.iter().fold(0usize, |acc, &x| acc * n as usize + x as usize))
    };
    for row in 0..total {
        let mut c = vec![0i64; d];
        let mut r = row;
        for axis in (0..d).rev() {
            c[axis] = (r % n as usize) as i64;
            r /= n as usize;
        }
        for e in &level.stencil.entries {
            let nb: Vec<i64> = c.iter().zip(&e.offset).map(|(x, o)| x + *o as i64).collect();
            if let Some(col) = index(&nb) {
                a[(row, col)] += e.coefficient;
            }
        }
    }
    a
}

pub fn to_dmatrix(m: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}
