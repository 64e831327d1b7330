//! Deterministic construction of the underlying graph `Λ_k`.
//!
//! `Λ_1` is the motif itself with every bond basic. `Λ_k` is assembled from
//! `q` copies of `Λ_{k-1}`: external node `j` of copy `i` is identified with
//! external node `i` of copy `j`, external node `i` of copy `i` becomes
//! external node `i` of `Λ_k`, and the motif's edge pattern is laid over the
//! new externals as decorating bonds.
//!
//! Node ids are assigned copy by copy (copy `0` first) in the order of the
//! previous level's ids; a glued node takes the id allocated when its lower
//! copy index is laid out. Edge lists are kept sorted.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{capacity, invalid, Result};
use crate::metrics::formulas;
use crate::motif::{get_motif, MotifId};

pub type Edge = (u32, u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: u32,
    pub level: u32,
    pub is_external: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnderlyingGraph {
    pub motif: MotifId,
    pub k: u32,
    levels: Vec<u32>,
    basic_edges: Vec<Edge>,
    decorating_edges: Vec<Edge>,
    external: Vec<u32>,
}

impl UnderlyingGraph {
    pub fn num_nodes(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, node: u32) -> u32 {
        self.levels[node as usize]
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeRecord> + '_ {
        let k = self.k;
        self.levels.iter().enumerate().map(move |(id, &level)| NodeRecord {
            id: id as u32,
            level,
            is_external: level == k,
        })
    }

    /// Basic bonds (`E'_k`), sorted ascending with `u < v`.
    pub fn basic_edges(&self) -> &[Edge] {
        &self.basic_edges
    }

    /// Decorating bonds (`E''_k`), sorted ascending with `u < v`.
    pub fn decorating_edges(&self) -> &[Edge] {
        &self.decorating_edges
    }

    /// External nodes in motif label order.
    pub fn external(&self) -> &[u32] {
        &self.external
    }

    pub fn internal_nodes(&self) -> impl Iterator<Item = u32> + '_ {
        let k = self.k;
        self.levels
            .iter()
            .enumerate()
            .filter(move |(_, &l)| l != k)
            .map(|(i, _)| i as u32)
    }

    /// Adjacency of the bare graph (basic bonds only).
    pub fn bare_adjacency(&self) -> Adjacency {
        Adjacency::from_edges(self.num_nodes(), self.basic_edges.iter().copied())
    }

    /// Adjacency of the fully decorated graph.
    pub fn full_adjacency(&self) -> Adjacency {
        Adjacency::from_edges(
            self.num_nodes(),
            self.basic_edges.iter().chain(&self.decorating_edges).copied(),
        )
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            motif: self.motif,
            k: self.k,
            num_nodes: self.num_nodes(),
            externals: self.external.clone(),
            nodes: self
                .nodes()
                .map(|n| NodeLevel {
                    id: n.id,
                    level: n.level,
                })
                .collect(),
            basic_edges: self.basic_edges.iter().map(|&(u, v)| [u, v]).collect(),
            decorating_edges: self.decorating_edges.iter().map(|&(u, v)| [u, v]).collect(),
            p: None,
            seed: None,
        }
    }
}

/// JSON interchange form of a graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub motif: MotifId,
    pub k: u32,
    pub num_nodes: usize,
    pub externals: Vec<u32>,
    pub nodes: Vec<NodeLevel>,
    pub basic_edges: Vec<[u32; 2]>,
    pub decorating_edges: Vec<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeLevel {
    pub id: u32,
    pub level: u32,
}

/// Compressed adjacency lists; neighbour lists are sorted.
#[derive(Clone, Debug)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Adjacency {
    pub fn from_edges(n: usize, edges: impl Iterator<Item = Edge> + Clone) -> Self {
        let mut deg = vec![0usize; n + 1];
        for (u, v) in edges.clone() {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + deg[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; offsets[n]];
        for (u, v) in edges {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
            targets[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for i in 0..n {
            targets[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        Self { offsets, targets }
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }
}

/// Build `Λ_k` for `motif`.
pub fn build(motif: MotifId, k: u32) -> Result<UnderlyingGraph> {
    if k < 1 {
        return Err(invalid(format!("level k must be >= 1, got {k}")));
    }
    let n = formulas::node_count_checked(motif, k)
        .filter(|&n| n <= u32::MAX as u64)
        .ok_or_else(|| capacity(format!("|V_k| for {motif} at k={k} overflows the 32-bit node index")))?;
    let e = formulas::edge_count_checked(motif, k)
        .filter(|&e| e <= u32::MAX as u64)
        .ok_or_else(|| capacity(format!("|E_k| for {motif} at k={k} overflows the 32-bit edge index")))?;
    // Guard against usize overflow on 32-bit hosts.
    usize::try_from(n.max(e)).map_err(|_| capacity("graph too large for this platform"))?;

    let m = get_motif(motif);
    let q = m.q;
    let mut levels = vec![1u32; q];
    let mut basic: Vec<Edge> = m.edges.iter().map(|&(u, v)| (u as u32, v as u32)).collect();
    let mut decorating: Vec<Edge> = Vec::new();
    let mut external: Vec<u32> = (0..q as u32).collect();

    for level in 2..=k {
        let prev_n = levels.len();
        let mut new_levels = Vec::with_capacity(q * prev_n);
        // glued[i][j] (i < j): id of node shared by copies i and j
        let mut glued = [[u32::MAX; 4]; 4];
        let mut maps: Vec<Vec<u32>> = Vec::with_capacity(q);
        for i in 0..q {
            let mut map = vec![0u32; prev_n];
            for v in 0..prev_n {
                let ext_label = external.iter().position(|&x| x as usize == v);
                match ext_label {
                    Some(j) if j != i => {
                        let (a, b) = (i.min(j), i.max(j));
                        if glued[a][b] == u32::MAX {
                            glued[a][b] = new_levels.len() as u32;
                            new_levels.push(level - 1);
                        }
                        map[v] = glued[a][b];
                    }
                    _ => {
                        map[v] = new_levels.len() as u32;
                        new_levels.push(levels[v]);
                    }
                }
            }
            maps.push(map);
        }
        let new_external: Vec<u32> = (0..q).map(|i| maps[i][external[i] as usize]).collect();
        for &x in &new_external {
            new_levels[x as usize] = level;
        }
        let relabel = |edges: &[Edge], out: &mut Vec<Edge>| {
            for map in &maps {
                out.extend(edges.iter().map(|&(u, v)| ordered(map[u as usize], map[v as usize])));
            }
        };
        let mut new_basic = Vec::with_capacity(basic.len() * q);
        relabel(&basic, &mut new_basic);
        let mut new_decorating = Vec::with_capacity(decorating.len() * q + m.r());
        relabel(&decorating, &mut new_decorating);
        new_decorating.extend(
            m.edges
                .iter()
                .map(|&(u, v)| ordered(new_external[u], new_external[v])),
        );
        levels = new_levels;
        basic = new_basic;
        decorating = new_decorating;
        external = new_external;
    }

    basic.sort_unstable();
    decorating.sort_unstable();
    Ok(UnderlyingGraph {
        motif,
        k,
        levels,
        basic_edges: basic,
        decorating_edges: decorating,
        external,
    })
}

fn ordered(u: u32, v: u32) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Number of nodes per level `l = 1..=k`.
pub fn level_census(g: &UnderlyingGraph) -> BTreeMap<u32, usize> {
    let mut census = BTreeMap::new();
    for &l in g.levels() {
        *census.entry(l).or_insert(0) += 1;
    }
    census
}

/// Inner-boundary fraction `q / |V_k|` of the node set of `Λ_k`.
pub fn boundary_ratio(motif: MotifId, k: u32) -> Result<Ratio<u64>> {
    if k < 1 {
        return Err(invalid(format!("level k must be >= 1, got {k}")));
    }
    let n = formulas::node_count_checked(motif, k)
        .ok_or_else(|| capacity(format!("|V_k| overflows u64 for {motif} at k={k}")))?;
    Ok(Ratio::new(motif.q() as u64, n))
}

/// Plain-text edge list: one `u v B|D` line per edge, basic edges first.
pub fn write_edgelist<'a>(
    out: &mut impl std::io::Write,
    basic: impl IntoIterator<Item = &'a Edge>,
    decorating: impl IntoIterator<Item = &'a Edge>,
) -> std::io::Result<()> {
    for &(u, v) in basic {
        writeln!(out, "{u} {v} B")?;
    }
    for &(u, v) in decorating {
        writeln!(out, "{u} {v} D")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn m1_level_two() {
        let g = build(MotifId::M1, 2).unwrap();
        assert_eq!(g.num_nodes(), 6);
        assert_eq!(g.basic_edges().len(), 9);
        assert_eq!(g.decorating_edges().len(), 3);
        assert_eq!(g.external().len(), 3);
        let ext: HashSet<_> = g.external().iter().copied().collect();
        for &(u, v) in g.decorating_edges() {
            assert!(ext.contains(&u) && ext.contains(&v));
        }
    }

    #[test]
    fn base_case_is_the_motif() {
        let g = build(MotifId::M1, 1).unwrap();
        assert_eq!(g.num_nodes(), 3);
        assert_eq!(g.basic_edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert!(g.decorating_edges().is_empty());
        assert_eq!(g.external(), &[0, 1, 2]);
    }

    #[test]
    fn m3_level_two() {
        let g = build(MotifId::M3, 2).unwrap();
        assert_eq!((g.num_nodes(), g.basic_edges().len(), g.decorating_edges().len()), (10, 16, 4));
    }

    #[test]
    fn census_examples() {
        let c = |m, k| level_census(&build(m, k).unwrap()).into_iter().collect::<Vec<_>>();
        assert_eq!(c(MotifId::M1, 2), vec![(1, 3), (2, 3)]);
        assert_eq!(c(MotifId::M1, 3), vec![(1, 9), (2, 3), (3, 3)]);
        assert_eq!(c(MotifId::M5, 1), vec![(1, 4)]);
    }

    #[test]
    fn census_matches_closed_form() {
        for m in MotifId::ALL {
            let q = m.q() as u64;
            for k in 1..=7u32 {
                let census = level_census(&build(m, k).unwrap());
                for l in 1..=k {
                    let expect = if l == k {
                        q
                    } else {
                        q.pow(k - l) * (q - 1) / 2
                    };
                    assert_eq!(census[&l] as u64, expect, "{m} k={k} l={l}");
                }
            }
        }
    }

    #[test]
    fn boundary_ratio_examples() {
        assert_eq!(boundary_ratio(MotifId::M1, 2).unwrap(), Ratio::new(1, 2));
        assert_eq!(boundary_ratio(MotifId::M1, 5).unwrap(), Ratio::new(3, 123));
        let r = boundary_ratio(MotifId::M4, 20).unwrap();
        assert!((*r.numer() as f64 / *r.denom() as f64) < 1e-10);
    }

    #[test]
    fn invalid_level_and_capacity() {
        assert!(matches!(build(MotifId::M1, 0), Err(crate::Error::InvalidArgument(_))));
        assert!(matches!(build(MotifId::M5, 40), Err(crate::Error::Capacity(_))));
    }

    #[test]
    fn graph_is_simple_and_disjoint() {
        for m in MotifId::ALL {
            let g = build(m, 5).unwrap();
            let mut all: Vec<_> = g.basic_edges().iter().chain(g.decorating_edges()).collect();
            assert!(all.iter().all(|(u, v)| u < v));
            let len = all.len();
            all.sort();
            all.dedup();
            assert_eq!(all.len(), len, "{m}: duplicate or shared edge");
            for &(u, v) in g.decorating_edges() {
                assert!(g.level(u) >= 2 && g.level(v) >= 2);
            }
        }
    }

    #[test]
    fn level_one_bare_degrees() {
        let expected: [(MotifId, &[usize]); 5] = [
            (MotifId::M1, &[4]),
            (MotifId::M2, &[3, 4, 5]),
            (MotifId::M3, &[4]),
            (MotifId::M4, &[4, 5, 6]),
            (MotifId::M5, &[6]),
        ];
        for (m, allowed) in expected {
            let g = build(m, 4).unwrap();
            let adj = g.bare_adjacency();
            let mut seen = HashSet::new();
            for node in g.nodes().filter(|n| n.level == 1) {
                seen.insert(adj.degree(node.id as usize));
            }
            let mut seen: Vec<_> = seen.into_iter().collect();
            seen.sort();
            assert_eq!(seen, allowed, "{m}");
        }
    }

    #[test]
    fn copies_share_exactly_one_node_per_pair() {
        // Externals of Λ_{k-1} copies inside Λ_k are the level-(k-1) and
        // level-k nodes; each level-(k-1) node is shared by exactly two copies.
        for m in MotifId::ALL {
            let q = m.q();
            let g = build(m, 3).unwrap();
            let census = level_census(&g);
            assert_eq!(census[&2], q * (q - 1) / 2);
        }
    }

    #[test]
    fn deterministic() {
        for m in MotifId::ALL {
            assert_eq!(build(m, 4).unwrap(), build(m, 4).unwrap());
        }
    }

    #[test]
    fn edgelist_format() {
        let g = build(MotifId::M1, 2).unwrap();
        let mut buf = Vec::new();
        write_edgelist(&mut buf, g.basic_edges(), g.decorating_edges()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 12);
        assert_eq!(text.lines().filter(|l| l.ends_with(" D")).count(), 3);
    }
}
