//! The five three- and four-node motifs used as basic patterns.
//!
//! Node labels `a, b, c, d` map to indices `0, 1, 2, 3`. The gluing rules of
//! the hierarchy are index arithmetic over this fixed labeling, so it must
//! not change.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MotifId {
    M1,
    M2,
    M3,
    M4,
    M5,
}

impl MotifId {
    pub const ALL: [MotifId; 5] = [MotifId::M1, MotifId::M2, MotifId::M3, MotifId::M4, MotifId::M5];

    pub fn motif(self) -> Motif {
        get_motif(self)
    }

    /// Number of motif nodes.
    pub fn q(self) -> usize {
        match self {
            MotifId::M1 => 3,
            _ => 4,
        }
    }

    /// Number of motif edges.
    pub fn r(self) -> usize {
        match self {
            MotifId::M1 => 3,
            MotifId::M2 | MotifId::M3 => 4,
            MotifId::M4 => 5,
            MotifId::M5 => 6,
        }
    }
}

impl fmt::Display for MotifId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MotifId::M1 => "M1",
            MotifId::M2 => "M2",
            MotifId::M3 => "M3",
            MotifId::M4 => "M4",
            MotifId::M5 => "M5",
        };
        f.write_str(s)
    }
}

impl FromStr for MotifId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "M1" => Ok(MotifId::M1),
            "M2" => Ok(MotifId::M2),
            "M3" => Ok(MotifId::M3),
            "M4" => Ok(MotifId::M4),
            "M5" => Ok(MotifId::M5),
            other => Err(invalid(format!("unknown motif `{other}` (expected M1..M5)"))),
        }
    }
}

/// A labeled motif: `q` nodes, simple undirected edges over `0..q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Motif {
    pub id: MotifId,
    pub q: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Motif {
    pub fn r(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let e = (u.min(v), u.max(v));
        self.edges.contains(&e)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.q).map(|v| self.degree(v)).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.r() == self.q * (self.q - 1) / 2
    }
}

/// Canonical labeled motif. M4's diagonal is `{0, 2}`.
pub fn get_motif(id: MotifId) -> Motif {
    let edges: &[(usize, usize)] = match id {
        MotifId::M1 => &[(0, 1), (0, 2), (1, 2)],
        MotifId::M2 => &[(0, 1), (0, 2), (1, 2), (2, 3)],
        MotifId::M3 => &[(0, 1), (1, 2), (2, 3), (0, 3)],
        MotifId::M4 => &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)],
        MotifId::M5 => &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
    };
    Motif {
        id,
        q: id.q(),
        edges: edges.to_vec(),
    }
}

/// All node permutations preserving the edge set, by exhaustive search.
pub fn automorphisms(m: &Motif) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..m.q).collect();
    permute(&mut perm, 0, &mut |p| {
        if m.edges.iter().all(|&(u, v)| m.has_edge(p[u], p[v])) {
            out.push(p.to_vec());
        }
    });
    out
}

// Swap-based recursive permutation generator.
fn permute(perm: &mut Vec<usize>, start: usize, visit: &mut impl FnMut(&[usize])) {
    if start == perm.len() {
        visit(perm);
        return;
    }
    for i in start..perm.len() {
        perm.swap(start, i);
        permute(perm, start + 1, visit);
        perm.swap(start, i);
    }
}
