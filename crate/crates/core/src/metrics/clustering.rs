//! Local and average clustering, plus the tabulated infinite-level limits.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hierarchy::Adjacency;
use crate::motif::MotifId;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "p", rename_all = "snake_case")]
pub enum ClusteringMode {
    Bare,
    FullyDecorated,
    Sampled(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClusteringReport {
    pub motif: MotifId,
    pub mode: ClusteringMode,
    pub finite_k_value: f64,
    pub limit_value: Option<f64>,
}

fn sorted_intersection(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Number of bonds among the neighbours of `node`.
pub fn triangles_at(adj: &Adjacency, node: usize) -> usize {
    let nb = adj.neighbors(node);
    let twice: usize = nb
        .iter()
        .map(|&j| sorted_intersection(nb, adj.neighbors(j as usize)))
        .sum();
    twice / 2
}

/// `Q(i) = 2 N(i) / (n(i)(n(i)-1))`; nodes of degree below two give 0.
pub fn clustering_local(adj: &Adjacency, node: usize) -> f64 {
    let n = adj.degree(node);
    if n < 2 {
        return 0.0;
    }
    2.0 * triangles_at(adj, node) as f64 / (n * (n - 1)) as f64
}

pub fn clustering_avg(adj: &Adjacency) -> f64 {
    let n = adj.num_nodes();
    if n == 0 {
        return 0.0;
    }
    let local: Vec<f64> = (0..n)
        .into_par_iter()
        .with_min_len(1024)
        .map(|i| clustering_local(adj, i))
        .collect();
    local.iter().sum::<f64>() / n as f64
}

/// Sum a positive series until both the current term and a geometric tail
/// bound drop below `1e-16` (relative to the running sum's order).
fn sum_series(first: usize, ratio_bound: f64, term: impl Fn(usize) -> f64) -> f64 {
    let mut acc = 0.0;
    let mut l = first;
    loop {
        let t = term(l);
        acc += t;
        let tail = t * ratio_bound / (1.0 - ratio_bound);
        if tail < 1e-16 {
            return acc;
        }
        l += 1;
    }
}

/// Infinite-level clustering from the per-level `(n, N)` counts recorded
/// for the bare and fully decorated families.
pub fn clustering_limit(motif: MotifId, mode: ClusteringMode) -> Result<f64> {
    match (motif, mode) {
        (MotifId::M1, ClusteringMode::Bare) => Ok(4.0 / 9.0),
        (MotifId::M1, ClusteringMode::FullyDecorated) => {
            let x = 3f64.powf(-0.25);
            Ok(x * ((1.0 + x) / (1.0 - x)).ln() - 2.0 * x * x.atan())
        }
        (MotifId::M3, ClusteringMode::Bare) => Ok(0.0),
        (MotifId::M3, ClusteringMode::FullyDecorated) => {
            let a = sum_series(2, 0.25, |l| {
                let l = l as f64;
                (l - 1.0) * 4f64.powf(-(l - 1.0)) / (l * (4.0 * l - 1.0))
            });
            let b = sum_series(1, 0.25, |l| {
                let l = l as f64;
                4f64.powf(-l) / (l * (4.0 * l - 1.0))
            });
            Ok(1.5 * a + b)
        }
        (MotifId::M5, ClusteringMode::Bare) => Ok(0.5),
        (MotifId::M5, ClusteringMode::FullyDecorated) => {
            // level l has weight (3/4) 4^{1-l}; n = 6l, N = 9 (l = 1) or 12l + 7
            let level_q = |l: usize| {
                let lf = l as f64;
                let n = 6.0 * lf;
                let big_n = if l == 1 { 9.0 } else { 12.0 * lf + 7.0 };
                2.0 * big_n / (n * (n - 1.0))
            };
            Ok(sum_series(1, 0.25, |l| 0.75 * 4f64.powi(1 - l as i32) * level_q(l)))
        }
        _ => Err(Error::Unsupported(format!(
            "no clustering limit for {motif} in mode {mode:?}"
        ))),
    }
}

/// The M1 fully decorated limit as the series `4 Σ 3^{-l} / (4l - 1)`.
pub fn m1_decorated_limit_series() -> f64 {
    sum_series(1, 1.0 / 3.0, |l| 4.0 * 3f64.powi(-(l as i32)) / (4.0 * l as f64 - 1.0))
}
