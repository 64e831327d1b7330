//! Exact degree distribution of the M1 hierarchy as a level-stratified
//! binomial mixture, and its characteristic function.
//!
//! A node of level `l < k` has degree `4 + Bin(4(l-1), p)`; an external node
//! has degree `2 + Bin(2(k-1), p)`. Levels are picked with probability
//! proportional to their size.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::motif::MotifId;
use crate::sampler::check_probability;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixtureComponent {
    pub level_prob: f64,
    pub base_degree: u32,
    pub binomial_n: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeMixture {
    pub k: u32,
    pub p: f64,
    pub components: Vec<MixtureComponent>,
}

pub fn degree_mixture(motif: MotifId, k: u32, p: f64) -> Result<DegreeMixture> {
    if motif != MotifId::M1 {
        return Err(Error::Unsupported(format!(
            "exact degree mixture is only available for M1, not {motif}"
        )));
    }
    degree_mixture_m1(k, p)
}

pub fn degree_mixture_m1(k: u32, p: f64) -> Result<DegreeMixture> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("degree mixture needs k >= 2, got {k}")));
    }
    check_probability(p)?;
    let kf = k as i32;
    let norm = 1.0 + 3f64.powi(1 - kf);
    let mut components: Vec<_> = (1..k)
        .map(|l| MixtureComponent {
            level_prob: 2.0 * 3f64.powi(-(l as i32)) / norm,
            base_degree: 4,
            binomial_n: 4 * (l - 1),
        })
        .collect();
    components.push(MixtureComponent {
        level_prob: 2.0 / (3f64.powi(kf - 1) + 1.0),
        base_degree: 2,
        binomial_n: 2 * (k - 1),
    });
    Ok(DegreeMixture { k, p, components })
}

/// Binomial probabilities `P(Bin(n, p) = v)` for `v = 0..=n`.
pub fn binomial_pmf(n: u32, p: f64) -> Vec<f64> {
    let n = n as usize;
    let mut out = vec![0.0; n + 1];
    let mut coeff = 1.0f64;
    for (v, slot) in out.iter_mut().enumerate() {
        if v > 0 {
            coeff = coeff * (n - v + 1) as f64 / v as f64;
        }
        *slot = coeff * p.powi(v as i32) * (1.0 - p).powi((n - v) as i32);
    }
    out
}

impl DegreeMixture {
    pub fn max_degree(&self) -> u32 {
        self.components
            .iter()
            .map(|c| c.base_degree + c.binomial_n)
            .max()
            .unwrap_or(0)
    }

    /// `pmf[d] = P(degree = d)` for `d = 0..=max_degree`.
    pub fn pmf(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.max_degree() as usize + 1];
        for c in &self.components {
            for (v, b) in binomial_pmf(c.binomial_n, self.p).into_iter().enumerate() {
                out[c.base_degree as usize + v] += c.level_prob * b;
            }
        }
        out
    }

    /// Mean computed from the full PMF.
    pub fn mean(&self) -> f64 {
        self.pmf()
            .iter()
            .enumerate()
            .map(|(d, w)| d as f64 * w)
            .sum()
    }

    /// Characteristic function by direct summation over the mixture.
    pub fn char_function_direct(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in &self.components {
            for (v, b) in binomial_pmf(c.binomial_n, self.p).into_iter().enumerate() {
                let d = (c.base_degree as usize + v) as f64;
                acc += Complex64::from_polar(c.level_prob * b, t * d);
            }
        }
        acc
    }
}

fn w(p: f64, t: f64) -> Complex64 {
    Complex64::from_polar(p, t) + (1.0 - p)
}

/// Finite-`k` characteristic function in closed form (geometric sum over
/// levels).
pub fn char_function(k: u32, p: f64, t: f64) -> Complex64 {
    let kf = k as i32;
    let w = w(p, t);
    let w4 = w.powi(4);
    let s = 3f64.powi(1 - kf);
    let inner = Complex64::from_polar(2.0 / (1.0 + s), 4.0 * t) * (1.0 - s * w.powi(4 * (kf - 1)))
        / (3.0 - w4);
    let ext = Complex64::from_polar(2.0 / (3f64.powi(kf - 1) + 1.0), 2.0 * t) * w.powi(2 * (kf - 1));
    inner + ext
}

/// `lim_{k→∞}` of the characteristic function: `2 e^{4it} / (3 - w^4)`.
pub fn char_function_limit(p: f64, t: f64) -> Complex64 {
    Complex64::from_polar(2.0, 4.0 * t) / (3.0 - w(p, t).powi(4))
}
