//! Polynomial smoothers as scalar functions of the preconditioned eigenvalue.
//!
//! Every smoother is described by an approximant `q` of `1/x`; the error
//! polynomial is `e(x) = 1 - x q(x)`, so `e(0) = 1` always.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    #[serde(alias = "cheb")]
    Chebyshev,
    #[serde(alias = "SA")]
    Sa,
    #[serde(alias = "ba", alias = "BA1x")]
    Ba1x,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Chebyshev => "chebyshev",
            Family::Sa => "sa",
            Family::Ba1x => "ba1x",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cheb" | "chebyshev" => Ok(Family::Chebyshev),
            "sa" => Ok(Family::Sa),
            "ba" | "ba1x" => Ok(Family::Ba1x),
            _ => Err(Error::InvalidSmoother(format!(
                "unknown family '{s}' (expected cheb, sa or ba1x)"
            ))),
        }
    }
}

/// A polynomial smoother. `degree` is ν for Chebyshev and SA (error polynomial
/// of degree ν+1) and m for BA1x.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmootherSpec {
    pub family: Family,
    pub degree: usize,
    pub lambda0: f64,
    pub lambda1: f64,
}

impl SmootherSpec {
    pub fn new(family: Family, degree: usize, lambda0: f64, lambda1: f64) -> Result<Self> {
        let s = SmootherSpec {
            family,
            degree,
            lambda0,
            lambda1,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn chebyshev(degree: usize, lambda0: f64, lambda1: f64) -> Result<Self> {
        Self::new(Family::Chebyshev, degree, lambda0, lambda1)
    }

    pub fn sa(degree: usize, lambda1: f64) -> Result<Self> {
        Self::new(Family::Sa, degree, 0.0, lambda1)
    }

    pub fn ba1x(degree: usize, lambda0: f64, lambda1: f64) -> Result<Self> {
        Self::new(Family::Ba1x, degree, lambda0, lambda1)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSmoother(m));
        if !(self.lambda1.is_finite() && self.lambda1 > 0.0) {
            return bad(format!("lambda1 must be positive, got {}", self.lambda1));
        }
        match self.family {
            Family::Sa => Ok(()),
            Family::Chebyshev => {
                if !(self.lambda0 >= 0.0 && self.lambda0 < self.lambda1) {
                    return bad(format!(
                        "chebyshev needs 0 <= lambda0 < lambda1, got [{}, {}]",
                        self.lambda0, self.lambda1
                    ));
                }
                Ok(())
            }
            Family::Ba1x => {
                if !(self.lambda0 > 0.0 && self.lambda0 < self.lambda1) {
                    return bad(format!(
                        "ba1x needs 0 < lambda0 < lambda1, got [{}, {}]",
                        self.lambda0, self.lambda1
                    ));
                }
                Ok(())
            }
        }
    }

    /// Same family and degree on a different interval.
    pub fn with_lambda0(&self, lambda0: f64) -> Result<Self> {
        Self::new(self.family, self.degree, lambda0, self.lambda1)
    }

    /// Degree of the error polynomial in x.
    pub fn error_degree(&self) -> usize {
        match self.family {
            Family::Chebyshev | Family::Sa => self.degree + 1,
            Family::Ba1x => self.degree + 1,
        }
    }

    /// Operator applications needed to apply `q(X)` to a vector.
    pub fn matvecs(&self) -> usize {
        self.degree
    }

    pub fn error_poly(&self, x: f64) -> f64 {
        error_poly(self, x)
    }

    pub fn q_value(&self, x: f64) -> f64 {
        q_value(self, x)
    }

    /// Max of |e| over `n` equispaced points of [lo, hi], endpoints included.
    pub fn max_abs_error(&self, lo: f64, hi: f64, n: usize) -> f64 {
        let n = n.max(2);
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .map(|x| self.error_poly(x).abs())
            .fold(0.0, f64::max)
    }

    /// Checks max |e| < 1 on (0, λ₁], the proxy for A-norm convergence.
    pub fn check_admissible(&self) -> Result<()> {
        let h = self.lambda1;
        let mut worst = self.max_abs_error(h * 1e-6, h, 8192);
        if let Family::Chebyshev | Family::Ba1x = self.family {
            worst = worst.max(self.max_abs_error(self.lambda0 * 0.5, self.lambda0 * 1.5, 512));
        }
        if worst >= 1.0 {
            return Err(Error::InadmissibleSmoother { max_error: worst });
        }
        Ok(())
    }
}

/// First-kind Chebyshev polynomial T_k(t).
pub fn cheb_t(k: usize, t: f64) -> f64 {
    if t.abs() <= 1.0 {
        let (mut a, mut b) = (1.0, t);
        if k == 0 {
            return 1.0;
        }
        for _ in 1..k {
            let c = 2.0 * t * b - a;
            a = b;
            b = c;
        }
        b
    } else {
        let s = (t * t - 1.0).sqrt();
        0.5 * ((t - s).powi(k as i32) + (t + s).powi(k as i32))
    }
}

/// Second-kind Chebyshev polynomial U_k(t), with U_{-1} = 0.
pub fn cheb_u(k: i64, t: f64) -> f64 {
    if k < 0 {
        return 0.0;
    }
    // the closed form cancels badly as t → ±1, where the recurrence is safe
    if t.abs() <= 1.01 {
        let (mut a, mut b) = (0.0, 1.0);
        for _ in 0..k {
            let c = 2.0 * t * b - a;
            a = b;
            b = c;
        }
        b
    } else {
        let s = (t * t - 1.0).sqrt();
        let n = (k + 1) as i32;
        ((t + s).powi(n) - (t - s).powi(n)) / (2.0 * s)
    }
}

/// Chebyshev recurrence constants for the interval [λ₀, λ₁].
#[derive(Clone, Debug, PartialEq)]
pub struct ChebCache {
    pub a: f64,
    pub zeta: f64,
    t: Vec<f64>,
}

impl ChebCache {
    /// Caches T_0(a) .. T_{degree+1}(a).
    pub fn new(lambda0: f64, lambda1: f64, degree: usize) -> Result<Self> {
        if !(lambda0 >= 0.0 && lambda0 < lambda1) {
            return Err(Error::InvalidSmoother(format!(
                "chebyshev interval [{lambda0}, {lambda1}] is empty"
            )));
        }
        let a = (lambda1 + lambda0) / (lambda1 - lambda0);
        let t = (0..=degree + 1).map(|k| cheb_t(k, a)).collect();
        Ok(ChebCache {
            a,
            zeta: 2.0 / (lambda0 + lambda1),
            t,
        })
    }

    pub fn t(&self, k: usize) -> f64 {
        self.t[k]
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// W_n(-1) for the fourth-kind polynomials used by SA: (-1)^n (2n+1).
pub fn sa_weight(n: i64) -> f64 {
    let v = (2 * n + 1) as f64;
    if n.rem_euclid(2) == 0 {
        v
    } else {
        -v
    }
}

fn sa_error(nu: usize, lambda1: f64, x: f64) -> f64 {
    let n = nu as i64 + 1;
    let y = 2.0 * x / lambda1 - 1.0;
    if y.abs() <= 1.0 {
        // W_{j+1} = 2y W_j - W_{j-1}, W_0 = W_{-1} = 1; W_n(2s²-1) = T_{2n+1}(s)/s
        let (mut a, mut b) = (1.0, 1.0);
        for _ in 0..n {
            let c = 2.0 * y * b - a;
            a = b;
            b = c;
        }
        b / sa_weight(n)
    } else {
        let s = (x / lambda1).sqrt();
        cheb_t((2 * n + 1) as usize, s) / s / sa_weight(n)
    }
}

/// BA1x recurrence constants.
#[derive(Clone, Copy, Debug)]
pub struct BaCoefficients {
    pub mu0: f64,
    pub mu1: f64,
    pub delta: f64,
    pub c: f64,
}

impl BaCoefficients {
    pub fn new(lambda0: f64, lambda1: f64) -> Self {
        let (mu0, mu1) = (1.0 / lambda1, 1.0 / lambda0);
        let kappa = lambda1 / lambda0;
        let sk = kappa.sqrt();
        let ss = mu0.sqrt() + mu1.sqrt();
        BaCoefficients {
            mu0,
            mu1,
            delta: (sk - 1.0) / (sk + 1.0),
            c: 4.0 * mu0 * mu1 / (ss * ss),
        }
    }

    pub fn p0(&self) -> f64 {
        0.5 * (self.mu0 + self.mu1)
    }

    /// p_1(x) = p1_const - p1_slope x
    pub fn p1(&self) -> (f64, f64) {
        let ss = self.mu0.sqrt() + self.mu1.sqrt();
        (0.5 * ss * ss, self.mu0 * self.mu1)
    }
}

fn ba_q(m: usize, lambda0: f64, lambda1: f64, x: f64) -> f64 {
    let b = BaCoefficients::new(lambda0, lambda1);
    let mut prev = b.p0();
    if m == 0 {
        return prev;
    }
    let (c0, c1) = b.p1();
    let mut cur = c0 - c1 * x;
    let d2 = b.delta * b.delta;
    for _ in 1..m {
        let next = cur + d2 * (cur - prev) + b.c * (1.0 - x * cur);
        prev = cur;
        cur = next;
    }
    cur
}

/// Error polynomial e(x) = 1 - x q(x).
pub fn error_poly(spec: &SmootherSpec, x: f64) -> f64 {
    match spec.family {
        Family::Chebyshev => {
            let k = spec.degree + 1;
            let (l0, l1) = (spec.lambda0, spec.lambda1);
            cheb_t(k, (l0 + l1 - 2.0 * x) / (l1 - l0)) / cheb_t(k, (l1 + l0) / (l1 - l0))
        }
        Family::Sa => {
            if x == 0.0 {
                1.0
            } else {
                sa_error(spec.degree, spec.lambda1, x)
            }
        }
        Family::Ba1x => 1.0 - x * ba_q(spec.degree, spec.lambda0, spec.lambda1, x),
    }
}

/// The approximant q(x) = (1 - e(x))/x.
pub fn q_value(spec: &SmootherSpec, x: f64) -> f64 {
    match spec.family {
        Family::Ba1x => ba_q(spec.degree, spec.lambda0, spec.lambda1, x),
        _ => (1.0 - error_poly(spec, x)) / x,
    }
}

/// Closed-form endpoint errors of the BA1x polynomial built on [λ, λ₁]:
/// `|1 - λ₁ p_m(λ₁; λ)|` and `|λ₀ E_m(λ₀; λ)|`.
pub fn ba1x_endpoint_errors(m: usize, lambda: f64, lambda0: f64, lambda1: f64) -> Result<(f64, f64)> {
    if m == 0 {
        return Err(Error::InvalidSmoother("endpoint errors need m >= 1".into()));
    }
    if !(lambda > 0.0 && lambda < lambda1) {
        return Err(Error::InvalidSmoother(format!(
            "lambda = {lambda} must lie in (0, lambda1 = {lambda1})"
        )));
    }
    let kappa = lambda1 / lambda;
    let b = BaCoefficients::new(lambda, lambda1);
    let at1 = b.delta.powi(m as i32) * (kappa - 1.0) / 2.0;
    let x = lambda0;
    let (c0, c1) = b.p1();
    let e0 = 1.0 / x - b.p0();
    let e1 = 1.0 / x - (c0 - c1 * x);
    let y = (1.0 + b.delta * b.delta - b.c * x) / (2.0 * b.delta);
    let mi = m as i64;
    let em = -b.delta.powi(m as i32) * e0 * cheb_u(mi - 2, y)
        + b.delta.powi(m as i32 - 1) * e1 * cheb_u(mi - 1, y);
    Ok((at1.abs(), (x * em).abs()))
}

/// Left endpoint λ* in [λ₀, λ₁) balancing the BA1x errors at λ₀ and λ₁.
pub fn optimal_lambda0_smoothing(m: usize, lambda0: f64, lambda1: f64) -> Result<f64> {
    if !(lambda0 > 0.0 && lambda0 < lambda1) {
        return Err(Error::InvalidSmoother(format!(
            "need 0 < lambda0 < lambda1, got [{lambda0}, {lambda1}]"
        )));
    }
    let gap = |lam: f64| -> Option<f64> {
        let (a1, a0) = ba1x_endpoint_errors(m, lam, lambda0, lambda1).ok()?;
        let g = a1 - a0;
        g.is_finite().then_some(g)
    };
    let g_lo = gap(lambda0).ok_or(Error::NoCrossing { lambda0, lambda1 })?;
    if g_lo <= 0.0 {
        return Err(Error::NoCrossing { lambda0, lambda1 });
    }
    // Approach λ₁ until the gap turns negative; the closed form loses
    // precision very close to λ₁.
    let mut lo = lambda0;
    let mut hi = None;
    for i in 1..=60 {
        let cand = lambda1 - (lambda1 - lambda0) * 0.5f64.powi(i);
        match gap(cand) {
            Some(g) if g < 0.0 => {
                hi = Some(cand);
                break;
            }
            Some(_) => lo = cand,
            None => break,
        }
    }
    let mut hi = hi.ok_or(Error::NoCrossing { lambda0, lambda1 })?;
    // the loop above only advances lo through points with a positive gap
    while hi - lo > 1e-10 * lo {
        let mid = 0.5 * (lo + hi);
        match gap(mid) {
            Some(g) if g > 0.0 => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Smallest BA1x degree with damping ≤ ρ on [λ₁/κ, λ₁] and q > 0 on (0, λ₁].
pub fn min_degree(rho: f64, kappa: f64, lambda1: f64) -> usize {
    if kappa <= 1.0 {
        return 0;
    }
    let sk = kappa.sqrt();
    let delta = (sk - 1.0) / (sk + 1.0);
    if delta <= 0.0 {
        return 0;
    }
    let need = |arg: f64| -> usize {
        let v = (-arg.ln()).max(0.0) / delta.ln().abs();
        (v - 1e-9).ceil().max(0.0) as usize
    };
    need(2.0 * rho / (kappa - 1.0)).max(need(2.0 / (lambda1 * (kappa - 1.0))))
}
