//! Structural characteristics: closed forms and empirical estimators.

pub mod clustering;
pub mod degree;
pub mod diameter;
pub mod formulas;
pub mod patterns;

use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{invalid, Result};
use crate::hierarchy::{build, UnderlyingGraph};
use crate::motif::MotifId;
use crate::sampler::{check_probability, sample, sample_seed, CounterRng, RealizedGraph};

pub use clustering::{clustering_avg, clustering_limit, clustering_local, ClusteringMode, ClusteringReport};
pub use degree::{char_function, char_function_limit, degree_mixture_m1, DegreeMixture};
pub use diameter::diameter;
pub use formulas::{avg_degree, edge_count_expected, motif_count_bare, node_count};
pub use patterns::count_pattern_embeddings;

/// Mean and standard error of a per-sample statistic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SampleStats {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl SampleStats {
    pub fn from_values(values: &[f64]) -> Self {
        // shifted-data variance
        let n = values.len();
        let shift = values.first().copied().unwrap_or(0.0);
        let (s1, s2) = values
            .iter()
            .map(|v| v - shift)
            .fold((0.0, 0.0), |(a, b), d| (a + d, b + d * d));
        let nf = n as f64;
        let mean = shift + s1 / nf;
        let stderr = if n > 1 {
            let var = ((s2 - s1 * s1 / nf) / (nf - 1.0)).max(0.0);
            (var / nf).sqrt()
        } else {
            0.0
        };
        Self { mean, stderr, samples: n }
    }
}

/// Evaluate `stat` on `samples` independent realizations (in parallel); the
/// `i`-th realization uses seed `sample_seed(seed, i)`, so results do not
/// depend on the thread count.
pub fn sample_values<F>(g: &UnderlyingGraph, p: f64, samples: usize, seed: u64, stat: F) -> Result<Vec<f64>>
where
    F: Fn(&RealizedGraph<'_>) -> f64 + Sync,
{
    check_probability(p)?;
    if samples == 0 {
        return Err(invalid("sample count must be positive"));
    }
    Ok((0..samples as u64)
        .into_par_iter()
        .map(|i| stat(&sample(g, p, sample_seed(seed, i)).expect("p checked")))
        .collect())
}

pub fn sample_stats<F>(g: &UnderlyingGraph, p: f64, samples: usize, seed: u64, stat: F) -> Result<SampleStats>
where
    F: Fn(&RealizedGraph<'_>) -> f64 + Sync,
{
    Ok(SampleStats::from_values(&sample_values(g, p, samples, seed, stat)?))
}

pub fn mean_degree(g: &RealizedGraph<'_>) -> f64 {
    2.0 * g.num_edges() as f64 / g.num_nodes() as f64
}

/// Pooled degree histogram over every node of every sample, normalised.
pub fn degree_histogram_pooled(g: &UnderlyingGraph, p: f64, samples: usize, seed: u64) -> Result<Vec<f64>> {
    check_probability(p)?;
    let counts = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let r = sample(g, p, sample_seed(seed, i)).expect("p checked");
            let adj = r.adjacency();
            let mut h = Vec::new();
            for v in 0..adj.num_nodes() {
                let d = adj.degree(v);
                if h.len() <= d {
                    h.resize(d + 1, 0u64);
                }
                h[d] += 1;
            }
            h
        })
        .reduce(Vec::new, |mut a, b| {
            if a.len() < b.len() {
                a.resize(b.len(), 0);
            }
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        });
    let total: u64 = counts.iter().sum();
    Ok(counts.into_iter().map(|c| c as f64 / total as f64).collect())
}

/// Degree of one uniformly chosen node per sampled graph; the node choice
/// uses a separate counter stream so it is independent of the decorations.
pub fn sampled_node_degrees(g: &UnderlyingGraph, p: f64, samples: usize, seed: u64) -> Result<Vec<usize>> {
    check_probability(p)?;
    let n = g.num_nodes();
    Ok((0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let s = sample_seed(seed, i);
            let r = sample(g, p, s).expect("p checked");
            let node = CounterRng::new(s, 1).index(0, n);
            r.edges()
                .filter(|&(u, v)| u as usize == node || v as usize == node)
                .count()
        })
        .collect())
}

/// Pearson chi-square goodness of fit with adjacent low-expectation bins
/// merged until each bin expects at least `min_expected` observations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GoodnessOfFit {
    pub statistic: f64,
    pub dof: usize,
    pub critical: f64,
    pub level: f64,
}

impl GoodnessOfFit {
    pub fn passes(&self) -> bool {
        self.statistic < self.critical
    }
}

pub fn chi_square_gof(observed: &[u64], probs: &[f64], level: f64, min_expected: f64) -> GoodnessOfFit {
    let total: u64 = observed.iter().sum();
    let len = observed.len().max(probs.len());
    let obs = |i: usize| observed.get(i).copied().unwrap_or(0) as f64;
    let exp = |i: usize| probs.get(i).copied().unwrap_or(0.0) * total as f64;

    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for i in 0..len {
        o += obs(i);
        e += exp(i);
        if e >= min_expected {
            bins.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if o > 0.0 || e > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => bins.push((o, e)),
        }
    }
    let statistic = bins
        .iter()
        .filter(|(_, e)| *e > 0.0)
        .map(|(o, e)| (o - e).powi(2) / e)
        .sum();
    let dof = bins.len().saturating_sub(1).max(1);
    let critical = ChiSquared::new(dof as f64).expect("dof > 0").inverse_cdf(level);
    GoodnessOfFit {
        statistic,
        dof,
        critical,
        level,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SmallWorldCheck {
    pub diameter: u32,
    pub constant: f64,
    pub bound: f64,
    pub satisfied: bool,
}

/// Compare `diam(Λ_k)` at `p ∈ {0, 1}` with `C log_{⟨n_k⟩} |V_k|`, using the
/// fully decorated family's constant `C` in both cases.
pub fn small_world_check(motif: MotifId, p: f64, k: u32) -> Result<SmallWorldCheck> {
    let full = if p == 1.0 {
        true
    } else if p == 0.0 {
        false
    } else {
        return Err(invalid(format!("small-world check needs p in {{0, 1}}, got {p}")));
    };
    let g = build(motif, k)?;
    let adj = if full { g.full_adjacency() } else { g.bare_adjacency() };
    let diam = diameter(&adj)?;
    let constant = formulas::small_world_constant(motif);
    let avg = avg_degree(motif, k, p);
    let nodes = node_count(motif, k) as f64;
    let bound = constant * nodes.ln() / avg.ln();
    Ok(SmallWorldCheck {
        diameter: diam,
        constant,
        bound,
        satisfied: diam as f64 <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_degree_exact_at_degenerate_p() {
        for m in MotifId::ALL {
            let g = build(m, 4).unwrap();
            for p in [0.0, 1.0] {
                let s = sample_stats(&g, p, 5, 1, mean_degree).unwrap();
                assert!((s.mean - avg_degree(m, 4, p)).abs() < 1e-12);
                assert_eq!(s.stderr, 0.0);
            }
        }
    }

    #[test]
    fn edge_count_within_three_sigma() {
        for m in MotifId::ALL {
            let g = build(m, 5).unwrap();
            let s = sample_stats(&g, 0.5, 2000, 3, |r| r.num_edges() as f64).unwrap();
            let d = g.decorating_edges().len() as f64;
            let sigma = (d * 0.25 / 2000.0).sqrt();
            assert!((s.mean - edge_count_expected(m, 5, 0.5)).abs() < 3.0 * sigma, "{m}");
        }
    }

    #[test]
    fn chi_square_accepts_exact_and_rejects_shifted() {
        let probs = [0.1, 0.2, 0.3, 0.4];
        let exact = [1000u64, 2000, 3000, 4000];
        assert!(chi_square_gof(&exact, &probs, 0.999, 5.0).passes());
        let shifted = [2000u64, 2000, 3000, 3000];
        assert!(!chi_square_gof(&shifted, &probs, 0.999, 5.0).passes());
    }

    #[test]
    fn small_world_bare_m1_fails() {
        let c = small_world_check(MotifId::M1, 0.0, 10).unwrap();
        assert_eq!(c.diameter, 512);
        assert!(!c.satisfied);
        assert!(small_world_check(MotifId::M1, 0.5, 3).is_err());
    }

    #[test]
    fn small_world_constants() {
        let c = small_world_check(MotifId::M1, 1.0, 6).unwrap();
        assert!((c.constant - 6f64.ln() / 3f64.ln()).abs() < 1e-15);
        let c5 = small_world_check(MotifId::M5, 1.0, 4).unwrap();
        assert!((c5.constant - 1.5).abs() < 1e-15);
    }
}
