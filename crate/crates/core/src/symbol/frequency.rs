use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::geometry::GridGeometry;
use crate::error::{Error, Result};
use crate::search::pattern_maximize;

/// A Fourier frequency θ with one component per lattice axis.
///
/// For triangular geometries the components are reciprocal-basis coordinates,
/// so θ·x is the plain coordinate sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frequency {
    theta: [f64; 3],
    dim: usize,
}

impl Frequency {
    pub fn new(theta: &[f64]) -> Self {
        assert!((1..=3).contains(&theta.len()), "frequency dimension must be 1..=3");
        let mut t = [0.0; 3];
        t[..theta.len()].copy_from_slice(theta);
        Frequency {
            theta: t,
            dim: theta.len(),
        }
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta[..self.dim]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn negated(&self) -> Frequency {
        let v: Vec<f64> = self.theta().iter().map(|t| -t).collect();
        Frequency::new(&v)
    }

    /// True when every component lies in (−π/h_d, π/h_d].
    pub fn in_range(&self, widths: &[f64]) -> bool {
        self.theta()
            .iter()
            .zip(widths)
            .all(|(&t, &h)| t > -PI / h && t <= PI / h)
    }
}

impl Serialize for Frequency {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.theta().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Frequency {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        if !(1..=3).contains(&v.len()) {
            return Err(serde::de::Error::custom("frequency needs 1 to 3 components"));
        }
        Ok(Frequency::new(&v))
    }
}

/// Uniform frequency lattice over Θ_h.
///
/// Sample `j` on an axis sits at −π/h + (j + offset)·2π/(N h). An offset of
/// zero selects the lattice {−π/h + (j+1)·2π/(N h)}, which covers the
/// half-open Θ_h exactly, boundaries of the low-frequency box included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencySampling {
    pub samples_per_axis: usize,
    pub offset_fraction: f64,
}

impl Default for FrequencySampling {
    fn default() -> Self {
        FrequencySampling {
            samples_per_axis: 64,
            offset_fraction: 0.5,
        }
    }
}

impl FrequencySampling {
    pub fn new(samples_per_axis: usize, offset_fraction: f64) -> Result<Self> {
        let s = FrequencySampling {
            samples_per_axis,
            offset_fraction,
        };
        s.validate(0)?;
        Ok(s)
    }

    /// Same resolution, lattice including the box boundaries.
    pub fn closed(&self) -> FrequencySampling {
        FrequencySampling {
            samples_per_axis: self.samples_per_axis,
            offset_fraction: 0.0,
        }
    }

    pub fn validate(&self, k: u32) -> Result<()> {
        let n = self.samples_per_axis;
        if n == 0 {
            return Err(Error::InvalidSampling("samples_per_axis must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.offset_fraction) {
            return Err(Error::InvalidSampling(format!(
                "offset_fraction {} outside [0, 1)",
                self.offset_fraction
            )));
        }
        let m = 1usize << k;
        if !n.is_multiple_of(m) {
            return Err(Error::InvalidSampling(format!(
                "samples_per_axis {n} is not a multiple of 2^{k} = {m}"
            )));
        }
        Ok(())
    }

    /// Lattice position of sample `j`, in units of the sample spacing from −π/h.
    pub(crate) fn position(&self, j: usize) -> f64 {
        let s = if self.offset_fraction > 0.0 {
            self.offset_fraction
        } else {
            1.0
        };
        j as f64 + s
    }

    pub(crate) fn theta(&self, j: usize, h: f64) -> f64 {
        -PI / h + self.position(j) * 2.0 * PI / (self.samples_per_axis as f64 * h)
    }

    /// Whether sample `j` lies in the low-frequency interval (−π/(m h), π/(m h)].
    pub(crate) fn is_low(&self, j: usize, m: usize) -> bool {
        let n = self.samples_per_axis as f64;
        let p = self.position(j);
        let half = n / (2.0 * m as f64);
        p > n / 2.0 - half && p <= n / 2.0 + half
    }
}

/// Iterates the full tensor lattice as multi-indices.
pub(crate) fn lattice_indices(n: usize, dim: usize) -> impl Iterator<Item = [usize; 3]> {
    let total = n.pow(dim as u32);
    (0..total).map(move |mut flat| {
        let mut idx = [0usize; 3];
        for d in (0..dim).rev() {
            idx[d] = flat % n;
            flat /= n;
        }
        idx
    })
}

pub(crate) fn frequency_at(s: &FrequencySampling, idx: &[usize], widths: &[f64]) -> Frequency {
    let v: Vec<f64> = idx.iter().zip(widths).map(|(&j, &h)| s.theta(j, h)).collect();
    Frequency::new(&v)
}

/// Splits the sampled Θ_h into low (Θ_{2^k h}) and high frequencies.
pub fn sample_frequencies(
    g: &GridGeometry,
    k: u32,
    s: &FrequencySampling,
) -> Result<(Vec<Frequency>, Vec<Frequency>)> {
    g.validate()?;
    s.validate(k)?;
    let widths = g.mesh_widths();
    let dim = g.dimension;
    let m = 1usize << k;
    let mut low = Vec::new();
    let mut high = Vec::new();
    for idx in lattice_indices(s.samples_per_axis, dim) {
        let f = frequency_at(s, &idx[..dim], &widths);
        if idx[..dim].iter().all(|&j| s.is_low(j, m)) {
            low.push(f);
        } else {
            high.push(f);
        }
    }
    Ok((low, high))
}

/// Membership in the closed high-frequency set: inside the closure of Θ_h but
/// not in the open low box.
pub(crate) fn in_closed_high(theta: &[f64], widths: &[f64], m: usize) -> bool {
    let mut outer = 0.0f64;
    for (&t, &h) in theta.iter().zip(widths) {
        let r = t.abs() * h / PI;
        if r > 1.0 + 1e-15 {
            return false;
        }
        outer = outer.max(r * m as f64);
    }
    outer >= 1.0 - 1e-12
}

/// Maps a frequency component into (−π/h, π/h].
pub fn wrap_component(t: f64, h: f64) -> f64 {
    let period = 2.0 * PI / h;
    let mut x = t - period * (t * h / (2.0 * PI)).round();
    if x <= -PI / h {
        x += period;
    }
    if x > PI / h {
        x -= period;
    }
    x
}

/// Extremum of `f` over the (closed) high-frequency set, or over all of Θ_h
/// when `k` is `None`: closed lattice sweep followed by a local pattern search
/// from the best few lattice points.
pub(crate) fn extremum<F>(
    g: &GridGeometry,
    k: Option<u32>,
    samples_per_axis: usize,
    f: F,
    maximize: bool,
) -> (f64, Frequency)
where
    F: Fn(&Frequency) -> f64 + Sync,
{
    let widths = g.mesh_widths();
    let dim = g.dimension;
    let sampling = FrequencySampling {
        samples_per_axis,
        offset_fraction: 0.0,
    };
    let m = k.map(|k| 1usize << k);
    let sign = if maximize { 1.0 } else { -1.0 };
    let indices: Vec<[usize; 3]> = lattice_indices(samples_per_axis, dim)
        .filter(|idx| match m {
            Some(m) => !idx[..dim].iter().all(|&j| sampling.is_low(j, m)),
            None => true,
        })
        .collect();
    let mut scored: Vec<(f64, Frequency)> = indices
        .par_iter()
        .map(|idx| {
            let fr = frequency_at(&sampling, &idx[..dim], &widths);
            (sign * f(&fr), fr)
        })
        .collect();
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    let step: Vec<f64> = widths
        .iter()
        .map(|h| PI / (samples_per_axis as f64 * h))
        .collect();
    // Symbols are periodic, so trial points are wrapped back into Θ_h.
    let wrap = |t: &[f64]| -> Vec<f64> {
        t.iter()
            .zip(&widths)
            .map(|(&x, &h)| wrap_component(x, h))
            .collect()
    };
    let feasible = |t: &[f64]| match m {
        Some(m) => in_closed_high(&wrap(t), &widths, m),
        None => true,
    };
    let candidates: Vec<(f64, Frequency)> = scored.into_iter().take(6).collect();
    candidates
        .par_iter()
        .map(|(_, start)| {
            let (v, x) = pattern_maximize(
                |t| sign * f(&Frequency::new(&wrap(t))),
                feasible,
                start.theta(),
                &step,
                1e-10,
                20_000,
            );
            (sign * v, Frequency::new(&wrap(&x)))
        })
        .reduce_with(|a, b| if sign * a.0 >= sign * b.0 { a } else { b })
        .expect("lattice has high frequencies")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(dim: usize, k: u32, n: usize, off: f64) -> (usize, usize) {
        let g = GridGeometry::uniform(dim, 1.0).unwrap();
        let s = FrequencySampling::new(n, off).unwrap();
        let (l, h) = sample_frequencies(&g, k, &s).unwrap();
        (l.len(), h.len())
    }

    #[test]
    fn partition_counts() {
        assert_eq!(counts(2, 1, 4, 0.5), (4, 12));
        assert_eq!(counts(2, 2, 8, 0.5), (4, 60));
        assert_eq!(counts(3, 1, 4, 0.5), (8, 56));
        assert_eq!(counts(2, 3, 64, 0.0), (64, 4032));
        assert_eq!(counts(2, 2, 64, 0.25), (256, 3840));
    }

    #[test]
    fn rejects_incompatible_n() {
        let g = GridGeometry::uniform(2, 1.0).unwrap();
        let s = FrequencySampling {
            samples_per_axis: 12,
            offset_fraction: 0.5,
        };
        assert!(sample_frequencies(&g, 3, &s).is_err());
        assert!(FrequencySampling::new(8, 1.0).is_err());
    }

    #[test]
    fn midpoint_lattice_avoids_zero_and_stays_in_range() {
        let g = GridGeometry::uniform(2, 0.5).unwrap();
        let (low, high) = sample_frequencies(&g, 2, &FrequencySampling::default()).unwrap();
        for f in low.iter().chain(&high) {
            assert!(f.in_range(&[0.5, 0.5]));
            assert!(f.theta().iter().any(|t| t.abs() > 1e-9));
        }
    }

    #[test]
    fn closed_lattice_contains_boundaries() {
        let s = FrequencySampling::new(16, 0.0).unwrap();
        let thetas: Vec<f64> = (0..16).map(|j| s.theta(j, 1.0)).collect();
        assert!(thetas.iter().any(|&t| (t - PI).abs() < 1e-12));
        assert!(thetas.iter().all(|&t| t > -PI + 1e-12));
        assert!(thetas.iter().any(|&t| (t + PI / 2.0).abs() < 1e-12));
        // -pi/2 is high, +pi/2 is low
        let jm = thetas.iter().position(|&t| (t + PI / 2.0).abs() < 1e-12).unwrap();
        let jp = thetas.iter().position(|&t| (t - PI / 2.0).abs() < 1e-12).unwrap();
        assert!(!s.is_low(jm, 2));
        assert!(s.is_low(jp, 2));
    }
}
