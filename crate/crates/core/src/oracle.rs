//! Brute-force ground truth for the Ising recursion.
//!
//! Conditional partition functions are summed over every internal spin
//! assignment, and annealed averages over every decoration subset. The
//! field term follows the copy-by-copy Hamiltonian that the recursion
//! composes: each elementary motif copy contributes `h` per node, so a node
//! shared by two copies carries `2h` ([`FieldWeighting::PerCopy`]). The
//! literal once-per-node field is available as [`FieldWeighting::PerNode`];
//! the two agree at `h = 0`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{capacity, invalid, Result};
use crate::hierarchy::{build, UnderlyingGraph};
use crate::ising::{initial_state, map_step_log, IsingParams, LogTriple};
use crate::motif::MotifId;
use crate::sampler::{enumerate_weighted, CompensatedSum, RealizedGraph};

pub const MAX_INTERNAL: usize = 24;
pub const MAX_DECORATIONS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BoundaryConfig {
    spins: Vec<i8>,
}

impl BoundaryConfig {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if spins.iter().any(|&s| s != 1 && s != -1) {
            return Err(invalid("boundary spins must be +1 or -1"));
        }
        Ok(Self { spins })
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    /// All `2^q` configurations, bit `i` set meaning spin `i` is `-1`.
    pub fn all(q: usize) -> Vec<BoundaryConfig> {
        (0..1u32 << q)
            .map(|m| BoundaryConfig {
                spins: (0..q).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect(),
            })
            .collect()
    }

    pub fn flipped(&self) -> Self {
        Self {
            spins: self.spins.iter().map(|s| -s).collect(),
        }
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            spins: perm.iter().map(|&i| self.spins[i]).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum FieldWeighting {
    /// `h` once per elementary motif copy containing the node.
    #[default]
    PerCopy,
    /// `h` once per node.
    PerNode,
}

/// Field multiplicity of each node: externals of `Λ_k` lie in one motif
/// copy, every other node in two.
fn field_weights(g: &UnderlyingGraph, w: FieldWeighting) -> Vec<f64> {
    (0..g.num_nodes())
        .map(|v| match w {
            FieldWeighting::PerNode => 1.0,
            FieldWeighting::PerCopy if g.level(v as u32) == g.k => 1.0,
            FieldWeighting::PerCopy => 2.0,
        })
        .collect()
}

/// Boltzmann weights `exp(h Σ c_i σ_i + K Σ_{E'} σσ)` summed over internal
/// spins, grouped by the sign pattern `σ_u σ_v` on the decorating bonds
/// (bit `i` set means bond `i` is antiparallel).
struct SpinTable {
    groups: BTreeMap<u64, f64>,
}

fn spin_table(g: &UnderlyingGraph, params: &IsingParams, b: &BoundaryConfig, w: FieldWeighting) -> Result<SpinTable> {
    let q = g.external().len();
    if b.spins.len() != q {
        return Err(invalid(format!("boundary has {} spins, graph has {q} external nodes", b.spins.len())));
    }
    let internal: Vec<u32> = g.internal_nodes().collect();
    if internal.len() > MAX_INTERNAL {
        return Err(capacity(format!(
            "{} internal nodes exceed the spin enumeration cap of {MAX_INTERNAL}",
            internal.len()
        )));
    }
    let decorations = g.decorating_edges();
    if decorations.len() > 64 {
        return Err(capacity("more than 64 decorating bonds"));
    }
    let weights = field_weights(g, w);
    let mut spin = vec![0i8; g.num_nodes()];
    for (&v, &s) in g.external().iter().zip(&b.spins) {
        spin[v as usize] = s;
    }
    let mut groups: BTreeMap<u64, CompensatedSum> = BTreeMap::new();
    for mask in 0..1u64 << internal.len() {
        for (i, &v) in internal.iter().enumerate() {
            spin[v as usize] = if mask >> i & 1 == 1 { -1 } else { 1 };
        }
        let field: f64 = spin.iter().zip(&weights).map(|(&s, &c)| c * s as f64).sum();
        let bonds: i64 = g
            .basic_edges()
            .iter()
            .map(|&(u, v)| (spin[u as usize] * spin[v as usize]) as i64)
            .sum();
        let signs = decorations
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| spin[u as usize] != spin[v as usize])
            .fold(0u64, |acc, (i, _)| acc | 1 << i);
        groups
            .entry(signs)
            .or_default()
            .add((params.h * field + params.k * bonds as f64).exp());
    }
    Ok(SpinTable {
        groups: groups.into_iter().map(|(k, s)| (k, s.value())).collect(),
    })
}

impl SpinTable {
    fn partition(&self, present: &[bool], l: f64) -> f64 {
        let mut acc = CompensatedSum::default();
        for (&signs, &w) in &self.groups {
            let e: i64 = present
                .iter()
                .enumerate()
                .filter(|(_, &on)| on)
                .map(|(i, _)| if signs >> i & 1 == 1 { -1 } else { 1 })
                .sum();
            acc.add(w * (l * e as f64).exp());
        }
        acc.value()
    }
}

/// Conditional partition function of one realization, summed over internal
/// spins term by term.
pub fn partition_conditional(g: &RealizedGraph<'_>, params: &IsingParams, b: &BoundaryConfig) -> Result<f64> {
    partition_conditional_with(g, params, b, FieldWeighting::PerCopy)
}

pub fn partition_conditional_with(
    g: &RealizedGraph<'_>,
    params: &IsingParams,
    b: &BoundaryConfig,
    w: FieldWeighting,
) -> Result<f64> {
    let base = g.base;
    let q = base.external().len();
    if b.spins.len() != q {
        return Err(invalid(format!("boundary has {} spins, graph has {q} external nodes", b.spins.len())));
    }
    let internal: Vec<u32> = base.internal_nodes().collect();
    if internal.len() > MAX_INTERNAL {
        return Err(capacity(format!(
            "{} internal nodes exceed the spin enumeration cap of {MAX_INTERNAL}",
            internal.len()
        )));
    }
    let weights = field_weights(base, w);
    let decorations: Vec<_> = g.present_decorations().copied().collect();
    let mut spin = vec![0i8; base.num_nodes()];
    for (&v, &s) in base.external().iter().zip(&b.spins) {
        spin[v as usize] = s;
    }
    let pair = |spin: &[i8], edges: &[(u32, u32)]| -> f64 {
        edges
            .iter()
            .map(|&(u, v)| (spin[u as usize] * spin[v as usize]) as f64)
            .sum()
    };
    let mut acc = CompensatedSum::default();
    for mask in 0..1u64 << internal.len() {
        for (i, &v) in internal.iter().enumerate() {
            spin[v as usize] = if mask >> i & 1 == 1 { -1 } else { 1 };
        }
        let field: f64 = spin.iter().zip(&weights).map(|(&s, &c)| c * s as f64).sum();
        let energy = params.h * field + params.k * pair(&spin, base.basic_edges()) + params.l * pair(&spin, &decorations);
        acc.add(energy.exp());
    }
    Ok(acc.value())
}

/// Annealed partition function `⟨Z_k⟩`: every decoration subset weighted by
/// its probability.
pub fn annealed_partition(g: &UnderlyingGraph, params: &IsingParams, b: &BoundaryConfig) -> Result<f64> {
    annealed_partition_with(g, params, b, FieldWeighting::PerCopy)
}

pub fn annealed_partition_with(
    g: &UnderlyingGraph,
    params: &IsingParams,
    b: &BoundaryConfig,
    w: FieldWeighting,
) -> Result<f64> {
    let n = g.decorating_edges().len();
    if n > MAX_DECORATIONS {
        return Err(capacity(format!(
            "{n} decorating bonds exceed the subset enumeration cap of {MAX_DECORATIONS}"
        )));
    }
    let table = spin_table(g, params, b, w)?;
    let mut acc = CompensatedSum::default();
    for s in enumerate_weighted(g, params.p)? {
        if s.weight > 0.0 {
            acc.add(s.weight * table.partition(&s.present, params.l));
        }
    }
    Ok(acc.value())
}

/// `⟨Z_k(σ)⟩` for all eight boundary configurations of M1's `Λ_k`, by
/// iterating the averaged gluing recursion from `Z_1`.
pub fn recursion_values(k: u32, params: &IsingParams) -> Result<BTreeMap<BoundaryConfig, f64>> {
    if k < 1 {
        return Err(invalid("k must be >= 1"));
    }
    let idx = |a: i8| usize::from(a < 0);
    let spin = |i: usize| if i == 0 { 1i8 } else { -1 };
    let mut z = [[[0.0f64; 2]; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                let (sa, sb, sc) = (spin(a) as f64, spin(b) as f64, spin(c) as f64);
                z[a][b][c] = (params.k * (sa * sb + sa * sc + sb * sc) + params.h * (sa + sb + sc)).exp();
            }
        }
    }
    let bond = |s: f64| params.p * (params.l * s).exp() + 1.0 - params.p;
    for _ in 2..=k {
        let mut next = [[[0.0f64; 2]; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let (sa, sb, sc) = (spin(a) as f64, spin(b) as f64, spin(c) as f64);
                    let r = bond(sa * sb) * bond(sa * sc) * bond(sb * sc);
                    let mut acc = CompensatedSum::default();
                    for al in 0..2 {
                        for be in 0..2 {
                            for ga in 0..2 {
                                acc.add(z[a][ga][be] * z[ga][b][al] * z[be][al][c]);
                            }
                        }
                    }
                    next[a][b][c] = r * acc.value();
                }
            }
        }
        z = next;
    }
    Ok(BoundaryConfig::all(3)
        .into_iter()
        .map(|cfg| {
            let s = cfg.spins();
            let v = z[idx(s[0])][idx(s[1])][idx(s[2])];
            (cfg, v)
        })
        .collect())
}

fn check_m1_level(k: u32) -> Result<()> {
    if !(2..=3).contains(&k) {
        return Err(invalid(format!("recursion check supports k in {{2, 3}}, got {k}")));
    }
    Ok(())
}

/// Largest relative gap between the brute-force `⟨Z_k⟩` and the recursion
/// over all eight boundary configurations.
pub fn recursion_check(k: u32, params: &IsingParams) -> Result<f64> {
    check_m1_level(k)?;
    let g = build(MotifId::M1, k)?;
    let rec = recursion_values(k, params)?;
    rec.iter()
        .map(|(cfg, &r)| {
            annealed_partition(&g, params, cfg).map(|exact| ((exact - r) / r).abs())
        })
        .try_fold(0.0f64, |m, e| e.map(|e| m.max(e)))
}

/// The same comparison over many parameter points in parallel; returns the
/// worst gap and where it occurred.
pub fn recursion_check_grid(k: u32, grid: &[IsingParams]) -> Result<(f64, Option<IsingParams>)> {
    check_m1_level(k)?;
    let gaps: Vec<(f64, IsingParams)> = grid
        .par_iter()
        .map(|p| recursion_check(k, p).map(|e| (e, *p)))
        .collect::<Result<_>>()?;
    Ok(gaps
        .into_iter()
        .fold((0.0, None), |(m, at), (e, p)| if e > m { (e, Some(p)) } else { (m, at) }))
}

/// Ratios `x_k = A_k/C_k`, `y_k = B_k/C_k`, `z_k = D_k/C_k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioRow {
    pub k: u32,
    /// From the reduced map (log coordinates internally).
    pub log_x: f64,
    pub log_y: f64,
    pub log_z: f64,
    /// From exact enumeration, when `k ≤ 3`.
    pub exact: Option<(f64, f64, f64)>,
}

impl RatioRow {
    pub fn x(&self) -> f64 {
        self.log_x.exp()
    }

    pub fn y(&self) -> f64 {
        self.log_y.exp()
    }

    pub fn z(&self) -> f64 {
        self.log_z.exp()
    }

    /// Largest relative gap between exact and reduced-map ratios.
    pub fn exact_gap(&self) -> Option<f64> {
        self.exact.map(|(x, y, z)| {
            [(x, self.log_x), (y, self.log_y), (z, self.log_z)]
                .iter()
                .map(|&(e, l)| (e.ln() - l).abs())
                .fold(0.0, f64::max)
        })
    }
}

fn exact_ratios(k: u32, params: &IsingParams) -> Result<(f64, f64, f64)> {
    let g = build(MotifId::M1, k)?;
    let z = |s: [i8; 3]| annealed_partition(&g, params, &BoundaryConfig { spins: s.to_vec() });
    let a = z([1, 1, 1])?;
    let b = z([1, 1, -1])?;
    let c = z([-1, -1, 1])?;
    let d = z([-1, -1, -1])?;
    Ok((a / c, b / c, d / c))
}

pub fn ratio_probe(params: &IsingParams, k_max: u32) -> Result<Vec<RatioRow>> {
    let p = IsingParams::new(params.k, params.l, params.h, params.p)?;
    if k_max < 1 {
        return Err(invalid("k_max must be >= 1"));
    }
    let log_t = p.t().ln();
    let mut s: LogTriple = initial_state(p.k, p.h).ln();
    let mut rows = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        if k > 1 {
            s = map_step_log(s, log_t);
        }
        let exact = if k <= 3 { Some(exact_ratios(k, &p)?) } else { None };
        rows.push(RatioRow {
            k,
            log_x: s.x,
            log_y: s.y,
            log_z: s.z,
            exact,
        });
    }
    Ok(rows)
}
