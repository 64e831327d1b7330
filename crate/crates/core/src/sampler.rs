//! Random realizations of `Λ_k`: every decorating bond is present
//! independently with probability `p`, basic bonds always.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{capacity, invalid, Result};
use crate::hierarchy::{Adjacency, Edge, GraphDocument, UnderlyingGraph};

/// Largest decoration count accepted by [`enumerate_weighted`].
pub const ENUMERATION_CAP: usize = 24;

/// Counter-based uniform stream: the draw for counter `i` depends only on
/// `(seed, stream, i)`, never on how many draws were taken before.
#[derive(Clone, Debug)]
pub struct CounterRng {
    rng: ChaCha8Rng,
}

impl CounterRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self, counter: u64) -> f64 {
        self.rng.set_word_pos(2 * counter as u128);
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..n` (n > 0).
    pub fn index(&mut self, counter: u64, n: usize) -> usize {
        ((self.uniform(counter) * n as f64) as usize).min(n - 1)
    }
}

/// Seed for the `i`-th of several independent samples drawn from `base`.
pub fn sample_seed(base: u64, i: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = base.wrapping_add(i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct RealizedGraph<'g> {
    pub base: &'g UnderlyingGraph,
    pub present: Vec<bool>,
    pub p: f64,
    pub seed: u64,
}

impl<'g> RealizedGraph<'g> {
    /// Realization with an explicit decoration mask.
    pub fn with_mask(base: &'g UnderlyingGraph, present: Vec<bool>) -> Result<Self> {
        if present.len() != base.decorating_edges().len() {
            return Err(invalid(format!(
                "mask length {} does not match {} decorating edges",
                present.len(),
                base.decorating_edges().len()
            )));
        }
        Ok(Self {
            base,
            present,
            p: f64::NAN,
            seed: 0,
        })
    }

    pub fn bare(base: &'g UnderlyingGraph) -> Self {
        Self {
            base,
            present: vec![false; base.decorating_edges().len()],
            p: 0.0,
            seed: 0,
        }
    }

    pub fn fully_decorated(base: &'g UnderlyingGraph) -> Self {
        Self {
            base,
            present: vec![true; base.decorating_edges().len()],
            p: 1.0,
            seed: 0,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.base.num_nodes()
    }

    pub fn present_count(&self) -> usize {
        self.present.iter().filter(|&&b| b).count()
    }

    pub fn num_edges(&self) -> usize {
        self.base.basic_edges().len() + self.present_count()
    }

    pub fn present_decorations(&self) -> impl Iterator<Item = &Edge> + Clone + '_ {
        self.base
            .decorating_edges()
            .iter()
            .zip(&self.present)
            .filter(|(_, &b)| b)
            .map(|(e, _)| e)
    }

    /// Effective edge set: basic bonds then present decorations.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + Clone + '_ {
        self.base
            .basic_edges()
            .iter()
            .chain(self.present_decorations())
            .copied()
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::from_edges(self.num_nodes(), self.edges())
    }

    pub fn to_document(&self) -> GraphDocument {
        let mut doc = self.base.to_document();
        doc.decorating_edges = self.present_decorations().map(|&(u, v)| [u, v]).collect();
        if self.p.is_finite() {
            doc.p = Some(self.p);
            doc.seed = Some(self.seed);
        }
        doc
    }
}

pub fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(format!("probability p must lie in [0, 1], got {p}")))
    }
}

/// Sample a realization. Decorating bond `i` is present iff the counter
/// stream keyed by `seed` yields `u_i < p`.
pub fn sample(g: &UnderlyingGraph, p: f64, seed: u64) -> Result<RealizedGraph<'_>> {
    check_probability(p)?;
    let mut rng = CounterRng::new(seed, 0);
    let present = (0..g.decorating_edges().len() as u64)
        .map(|i| rng.uniform(i) < p)
        .collect();
    Ok(RealizedGraph {
        base: g,
        present,
        p,
        seed,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSubset {
    pub present: Vec<bool>,
    pub weight: f64,
}

/// Iterator over all `2^|E''|` decoration subsets with their exact
/// probabilities `p^|s| (1-p)^(|E''|-|s|)`. Subset `s` corresponds to the
/// binary expansion of its index (bit `i` ↔ decorating edge `i`).
#[derive(Clone, Debug)]
pub struct WeightedSubsets {
    n: usize,
    next: u64,
    end: u64,
    pow_p: Vec<f64>,
    pow_q: Vec<f64>,
}

impl Iterator for WeightedSubsets {
    type Item = WeightedSubset;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.end {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        let ones = mask.count_ones() as usize;
        Some(WeightedSubset {
            present: (0..self.n).map(|i| mask >> i & 1 == 1).collect(),
            weight: self.pow_p[ones] * self.pow_q[self.n - ones],
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for WeightedSubsets {}

pub fn enumerate_weighted(g: &UnderlyingGraph, p: f64) -> Result<WeightedSubsets> {
    enumerate_weighted_n(g.decorating_edges().len(), p)
}

pub(crate) fn enumerate_weighted_n(n: usize, p: f64) -> Result<WeightedSubsets> {
    check_probability(p)?;
    if n > ENUMERATION_CAP {
        return Err(capacity(format!(
            "{n} decorating edges exceed the enumeration cap of {ENUMERATION_CAP}"
        )));
    }
    // Powers by repeated multiplication are exact enough and underflow
    // gracefully to subnormals; 0^0 = 1 covers p ∈ {0, 1}.
    let powers = |b: f64| {
        let mut v = vec![1.0; n + 1];
        for i in 1..=n {
            v[i] = v[i - 1] * b;
        }
        v
    };
    Ok(WeightedSubsets {
        n,
        next: 0,
        end: 1u64 << n,
        pow_p: powers(p),
        pow_q: powers(1.0 - p),
    })
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::Sum<f64> for CompensatedSum {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::build;
    use crate::motif::MotifId;
    use proptest::prelude::*;

    #[test]
    fn degenerate_probabilities() {
        let g = build(MotifId::M1, 4).unwrap();
        assert_eq!(sample(&g, 0.0, 3).unwrap().present_count(), 0);
        assert_eq!(sample(&g, 1.0, 3).unwrap().present_count(), g.decorating_edges().len());
        assert!(sample(&g, 1.5, 3).is_err());
        assert!(sample(&g, -0.1, 3).is_err());
        assert!(sample(&g, f64::NAN, 3).is_err());
    }

    #[test]
    fn mean_present_count_m1_k3() {
        let g = build(MotifId::M1, 3).unwrap();
        let n = 10_000u64;
        let total: usize = (0..n).map(|i| sample(&g, 0.5, sample_seed(9, i)).unwrap().present_count()).sum();
        let mean = total as f64 / n as f64;
        // 12 decorations, binomial sd of the mean = sqrt(12 * 0.25 / n)
        let sigma = (12.0 * 0.25 / n as f64).sqrt();
        assert!((mean - 6.0).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn pairwise_independence() {
        let g = build(MotifId::M1, 2).unwrap();
        let n = 100_000u64;
        let p = 0.3;
        let mut ones = [0f64; 3];
        let mut both = [[0f64; 3]; 3];
        for i in 0..n {
            let r = sample(&g, p, sample_seed(1, i)).unwrap();
            for a in 0..3 {
                if r.present[a] {
                    ones[a] += 1.0;
                    for b in 0..3 {
                        if r.present[b] {
                            both[a][b] += 1.0;
                        }
                    }
                }
            }
        }
        let nf = n as f64;
        // sd of the covariance estimator under independence ≈ p(1-p)/sqrt(n)
        let sd = p * (1.0 - p) / nf.sqrt();
        for a in 0..3 {
            for b in (a + 1)..3 {
                let cov = both[a][b] / nf - (ones[a] / nf) * (ones[b] / nf);
                assert!(cov.abs() < 3.0 * sd, "cov({a},{b}) = {cov}");
            }
        }
    }

    #[test]
    fn enumeration_sizes_and_normalisation() {
        let g2 = build(MotifId::M1, 2).unwrap();
        assert_eq!(enumerate_weighted(&g2, 0.3).unwrap().count(), 8);
        let g3 = build(MotifId::M1, 3).unwrap();
        let subsets = enumerate_weighted(&g3, 0.37).unwrap();
        assert_eq!(subsets.len(), 4096);
        let total: CompensatedSum = subsets.map(|s| s.weight).sum();
        assert!((total.value() - 1.0).abs() < 1e-12);
        let g4 = build(MotifId::M5, 4).unwrap();
        assert!(matches!(enumerate_weighted(&g4, 0.5), Err(crate::Error::Capacity(_))));
    }

    #[test]
    fn weights_at_degenerate_p() {
        let g = build(MotifId::M1, 2).unwrap();
        let w: Vec<_> = enumerate_weighted(&g, 0.0).unwrap().map(|s| s.weight).collect();
        assert_eq!(w[0], 1.0);
        assert!(w[1..].iter().all(|&x| x == 0.0));
        let w: Vec<_> = enumerate_weighted(&g, 1.0).unwrap().map(|s| s.weight).collect();
        assert_eq!(w[7], 1.0);
    }

    proptest! {
        #[test]
        fn sampling_is_deterministic_and_order_free(seed in any::<u64>(), p in 0.0f64..=1.0) {
            let g = build(MotifId::M2, 3).unwrap();
            let a = sample(&g, p, seed).unwrap();
            let b = sample(&g, p, seed).unwrap();
            prop_assert_eq!(&a.present, &b.present);
            // random-access draws in reverse order reproduce the same mask
            let mut rng = CounterRng::new(seed, 0);
            let n = g.decorating_edges().len();
            for i in (0..n).rev() {
                prop_assert_eq!(rng.uniform(i as u64) < p, a.present[i]);
            }
        }

        #[test]
        fn enumeration_weights_sum_to_one(p in 0.0f64..=1.0, k in 1u32..=3) {
            let g = build(MotifId::M1, k).unwrap();
            let total: CompensatedSum = enumerate_weighted(&g, p).unwrap().map(|s| s.weight).sum();
            prop_assert!((total.value() - 1.0).abs() < 1e-12);
        }
    }
}
