//! Exact unweighted diameters.
//!
//! Graphs up to [`ALL_PAIRS_LIMIT`] nodes use one BFS per node. Larger graphs
//! use eccentricity bounding: every BFS tightens lower and upper bounds on
//! all eccentricities, and nodes whose bounds can no longer change the
//! answer are dropped. The result is exact either way.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{capacity, Error, Result};
use crate::hierarchy::Adjacency;

pub const ALL_PAIRS_LIMIT: usize = 10_000;
pub const MAX_NODES: usize = 1_000_000;

const UNSEEN: u32 = u32::MAX;

/// BFS distances from `src` into `dist`; returns (eccentricity, reached).
fn bfs(adj: &Adjacency, src: usize, dist: &mut [u32], queue: &mut VecDeque<u32>) -> (u32, usize) {
    dist.fill(UNSEEN);
    queue.clear();
    dist[src] = 0;
    queue.push_back(src as u32);
    let (mut ecc, mut reached) = (0, 1);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        for &w in adj.neighbors(u as usize) {
            if dist[w as usize] == UNSEEN {
                dist[w as usize] = du + 1;
                ecc = du + 1;
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    (ecc, reached)
}

pub fn eccentricity(adj: &Adjacency, src: usize) -> u32 {
    let mut dist = vec![UNSEEN; adj.num_nodes()];
    bfs(adj, src, &mut dist, &mut VecDeque::new()).0
}

/// Fails with the first two components found when `adj` is disconnected.
pub fn check_connected(adj: &Adjacency) -> Result<()> {
    let n = adj.num_nodes();
    if n == 0 {
        return Ok(());
    }
    let mut dist = vec![UNSEEN; n];
    let mut queue = VecDeque::new();
    let (_, reached) = bfs(adj, 0, &mut dist, &mut queue);
    if reached == n {
        return Ok(());
    }
    let other = dist.iter().position(|&d| d == UNSEEN).unwrap();
    let (_, other_size) = bfs(adj, other, &mut dist, &mut queue);
    Err(Error::Disconnected {
        first: 0,
        first_size: reached,
        second: other,
        second_size: other_size,
    })
}

pub fn diameter(adj: &Adjacency) -> Result<u32> {
    let n = adj.num_nodes();
    if n > MAX_NODES {
        return Err(capacity(format!("diameter limited to {MAX_NODES} nodes, graph has {n}")));
    }
    check_connected(adj)?;
    if n <= ALL_PAIRS_LIMIT {
        Ok(diameter_all_pairs(adj))
    } else {
        Ok(diameter_bounding(adj))
    }
}

/// Maximum eccentricity over all nodes; assumes a connected graph.
pub fn diameter_all_pairs(adj: &Adjacency) -> u32 {
    let n = adj.num_nodes();
    (0..n)
        .into_par_iter()
        .map_init(
            || (vec![UNSEEN; n], VecDeque::new()),
            |(dist, queue), s| bfs(adj, s, dist, queue).0,
        )
        .max()
        .unwrap_or(0)
}

/// Exact diameter by eccentricity bounding; assumes a connected graph.
pub fn diameter_bounding(adj: &Adjacency) -> u32 {
    let n = adj.num_nodes();
    if n <= 1 {
        return 0;
    }
    let mut lower = vec![0u32; n];
    let mut upper = vec![u32::MAX; n];
    let mut active: Vec<usize> = (0..n).collect();
    let mut dist = vec![UNSEEN; n];
    let mut queue = VecDeque::new();
    let (mut best_lower, mut best_upper) = (0u32, u32::MAX);
    let mut pick_high = true;

    while best_lower < best_upper && !active.is_empty() {
        let v = if pick_high {
            *active
                .iter()
                .max_by_key(|&&w| (upper[w], adj.degree(w), std::cmp::Reverse(w)))
                .unwrap()
        } else {
            *active
                .iter()
                .min_by_key(|&&w| (lower[w], std::cmp::Reverse(adj.degree(w)), w))
                .unwrap()
        };
        pick_high = !pick_high;

        let (ecc, _) = bfs(adj, v, &mut dist, &mut queue);
        best_lower = best_lower.max(ecc);
        best_upper = best_upper.min(2 * ecc);
        lower[v] = ecc;
        upper[v] = ecc;

        for &w in &active {
            let d = dist[w];
            lower[w] = lower[w].max(d.max(ecc - d));
            upper[w] = upper[w].min(ecc + d);
        }
        best_upper = best_upper.min(active.iter().map(|&w| upper[w]).max().unwrap_or(0));
        best_lower = best_lower.max(active.iter().map(|&w| lower[w]).max().unwrap_or(0));
        active.retain(|&w| {
            lower[w] != upper[w] && !(upper[w] <= best_lower && 2 * lower[w] >= best_upper)
        });
    }
    best_lower
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::build;
    use crate::motif::MotifId;

    fn path(n: u32) -> Adjacency {
        Adjacency::from_edges(n as usize, (0..n - 1).map(|i| (i, i + 1)))
    }

    #[test]
    fn path_and_cycle() {
        assert_eq!(diameter(&path(10)).unwrap(), 9);
        let cycle = Adjacency::from_edges(11, (0..11u32).map(|i| (i.min((i + 1) % 11), i.max((i + 1) % 11))));
        assert_eq!(diameter(&cycle).unwrap(), 5);
        assert_eq!(diameter_bounding(&path(300)), 299);
    }

    #[test]
    fn disconnected_reports_components() {
        let adj = Adjacency::from_edges(5, [(0u32, 1u32), (2, 3), (3, 4)].into_iter());
        match diameter(&adj) {
            Err(Error::Disconnected { first, first_size, second, second_size }) => {
                assert_eq!((first, first_size, second, second_size), (0, 2, 2, 3));
            }
            other => panic!("expected disconnected error, got {other:?}"),
        }
    }

    #[test]
    fn bounding_agrees_with_all_pairs() {
        for m in MotifId::ALL {
            for k in 1..=5 {
                let g = build(m, k).unwrap();
                for adj in [g.bare_adjacency(), g.full_adjacency()] {
                    assert_eq!(diameter_bounding(&adj), diameter_all_pairs(&adj), "{m} k={k}");
                }
            }
        }
    }

    #[test]
    fn bare_m1_is_power_of_two() {
        for k in 1..=7 {
            let g = build(MotifId::M1, k).unwrap();
            assert_eq!(diameter(&g.bare_adjacency()).unwrap(), 1 << (k - 1));
        }
    }
}
