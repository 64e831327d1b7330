//! Brute-force pattern counting: the number of distinct subgraphs of a graph
//! that are copies of a motif (not necessarily induced). Each copy is hit by
//! exactly `|Aut(motif)|` embeddings, so embeddings are counted and divided.

use crate::error::{capacity, Result};
use crate::hierarchy::Adjacency;
use crate::motif::{automorphisms, get_motif, Motif, MotifId};
use crate::sampler::RealizedGraph;

pub const MAX_NODES: usize = 5000;

pub fn count_pattern_embeddings(g: &RealizedGraph<'_>, motif: MotifId) -> Result<u64> {
    count_in_adjacency(&g.adjacency(), motif)
}

pub fn count_in_adjacency(adj: &Adjacency, motif: MotifId) -> Result<u64> {
    if adj.num_nodes() > MAX_NODES {
        return Err(capacity(format!(
            "pattern counting limited to {MAX_NODES} nodes, graph has {}",
            adj.num_nodes()
        )));
    }
    let m = get_motif(motif);
    let auts = automorphisms(&m).len() as u64;
    let embeddings = count_embeddings(adj, &m);
    debug_assert_eq!(embeddings % auts, 0);
    Ok(embeddings / auts)
}

/// Injective maps of motif nodes to graph nodes carrying every motif edge
/// onto a graph edge.
pub fn count_embeddings(adj: &Adjacency, m: &Motif) -> u64 {
    // Each motif node after the first has an earlier neighbour (all motifs
    // are connected under the canonical labeling); candidates come from the
    // image of that anchor.
    let anchor: Vec<Option<usize>> = (0..m.q)
        .map(|i| (0..i).find(|&j| m.has_edge(i, j)))
        .collect();
    let mut image = vec![0u32; m.q];
    let mut total = 0;
    for v in 0..adj.num_nodes() {
        image[0] = v as u32;
        extend(adj, m, &anchor, &mut image, 1, &mut total);
    }
    total
}

fn extend(adj: &Adjacency, m: &Motif, anchor: &[Option<usize>], image: &mut [u32], depth: usize, total: &mut u64) {
    if depth == m.q {
        *total += 1;
        return;
    }
    let a = anchor[depth].expect("motif is connected");
    let candidates = adj.neighbors(image[a] as usize);
    'next: for &c in candidates {
        for j in 0..depth {
            if image[j] == c {
                continue 'next;
            }
            if m.has_edge(depth, j) && !adj.has_edge(c as usize, image[j] as usize) {
                continue 'next;
            }
        }
        image[depth] = c;
        extend(adj, m, anchor, image, depth + 1, total);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::build;

    #[test]
    fn motif_contains_itself_once() {
        for id in MotifId::ALL {
            let g = build(id, 1).unwrap();
            assert_eq!(count_in_adjacency(&g.bare_adjacency(), id).unwrap(), 1);
        }
    }

    #[test]
    fn k4_subpatterns() {
        let k4 = build(MotifId::M5, 1).unwrap().bare_adjacency();
        assert_eq!(count_in_adjacency(&k4, MotifId::M1).unwrap(), 4);
        assert_eq!(count_in_adjacency(&k4, MotifId::M3).unwrap(), 3);
        assert_eq!(count_in_adjacency(&k4, MotifId::M4).unwrap(), 6);
        assert_eq!(count_in_adjacency(&k4, MotifId::M2).unwrap(), 12);
    }

    #[test]
    fn m1_level_two_counts() {
        let g = build(MotifId::M1, 2).unwrap();
        assert_eq!(count_pattern_embeddings(&RealizedGraph::bare(&g), MotifId::M1).unwrap(), 4);
        assert_eq!(count_pattern_embeddings(&RealizedGraph::fully_decorated(&g), MotifId::M1).unwrap(), 8);
    }

    #[test]
    fn capacity_limit() {
        let g = build(MotifId::M1, 9).unwrap();
        assert!(count_pattern_embeddings(&RealizedGraph::bare(&g), MotifId::M1).is_err());
    }
}
