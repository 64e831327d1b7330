//! Closed-form structural characteristics of `Λ_k`.

use crate::motif::MotifId;

/// `q^e` with overflow check.
fn pow(q: u64, e: u32) -> Option<u64> {
    q.checked_pow(e)
}

/// `|V_k| = (q^k + q) / 2`.
pub fn node_count_checked(motif: MotifId, k: u32) -> Option<u64> {
    let q = motif.q() as u64;
    pow(q, k)?.checked_add(q).map(|s| s / 2)
}

pub fn node_count(motif: MotifId, k: u32) -> u64 {
    node_count_checked(motif, k).expect("node count overflows u64")
}

/// `|E'_k| = r q^{k-1}`.
pub fn basic_edge_count(motif: MotifId, k: u32) -> u64 {
    motif.r() as u64 * pow(motif.q() as u64, k - 1).expect("overflow")
}

/// `|E''_k| = r (q^{k-1} - 1) / (q - 1)`.
pub fn decorating_edge_count(motif: MotifId, k: u32) -> u64 {
    let q = motif.q() as u64;
    motif.r() as u64 * (pow(q, k - 1).expect("overflow") - 1) / (q - 1)
}

pub(crate) fn edge_count_checked(motif: MotifId, k: u32) -> Option<u64> {
    let q = motif.q() as u64;
    let r = motif.r() as u64;
    let qk1 = pow(q, k.checked_sub(1)?)?;
    r.checked_mul(qk1)?.checked_add(r.checked_mul((qk1 - 1) / (q - 1))?)
}

/// Expected edge count `r q^{k-1} + r p (q^{k-1} - 1)/(q - 1)`.
pub fn edge_count_expected(motif: MotifId, k: u32, p: f64) -> f64 {
    basic_edge_count(motif, k) as f64 + p * decorating_edge_count(motif, k) as f64
}

/// Expected average degree `2|E_k| / |V_k|`.
pub fn avg_degree(motif: MotifId, k: u32, p: f64) -> f64 {
    2.0 * edge_count_expected(motif, k, p) / node_count(motif, k) as f64
}

/// The same quantity in the two-term form
/// `4r/(q(q-1)) (q-1+p) - 4r/(q(q-1)) (q-1+2p)/(q^{k-1}+1)`.
pub fn avg_degree_two_term(motif: MotifId, k: u32, p: f64) -> f64 {
    let q = motif.q() as f64;
    let c = 4.0 * motif.r() as f64 / (q * (q - 1.0));
    c * (q - 1.0 + p) - c * (q - 1.0 + 2.0 * p) / (q.powi(k as i32 - 1) + 1.0)
}

/// `lim_{k→∞} ⟨n_k⟩ = 4r (q-1+p) / (q(q-1))`.
pub fn avg_degree_limit(motif: MotifId, p: f64) -> f64 {
    let q = motif.q() as f64;
    4.0 * motif.r() as f64 * (q - 1.0 + p) / (q * (q - 1.0))
}

/// Number of copies of the basic pattern in the bare `Λ_k` as tabulated
/// for the hierarchy.
pub fn motif_count_bare(motif: MotifId, k: u32) -> u64 {
    assert!(k >= 1);
    let q = motif.q() as u64;
    if k == 1 {
        return 1;
    }
    match motif {
        MotifId::M1 | MotifId::M5 => (q + 1) * q.pow(k - 2),
        MotifId::M3 => 2 * 4u64.pow(k - 1),
        MotifId::M4 => 4u64.pow(k - 1),
        MotifId::M2 => (26 * 4u64.pow(k - 1) - 17) / 3,
    }
}

/// Tabulated pattern count in the fully decorated `Λ_k`; none for M2.
pub fn motif_count_decorated(motif: MotifId, k: u32) -> Option<f64> {
    let q = motif.q() as f64;
    let k = k as i32;
    match motif {
        MotifId::M1 | MotifId::M5 => {
            Some((2.0 * q + 1.0) / (q - 1.0) * q.powi(k - 1) + (q + 2.0) / (q - 1.0))
        }
        MotifId::M3 => Some(2.0 / 3.0 * 4f64.powi(k) - 5.0 / 3.0),
        MotifId::M4 => Some((4f64.powi(k) - 1.0) / 3.0),
        MotifId::M2 => None,
    }
}

/// Tabulated diameter of the bare (`full == false`) or fully decorated
/// `Λ_k`.
pub fn diameter_formula(motif: MotifId, k: u32, full: bool) -> u64 {
    let k = k as u64;
    if !full {
        return match motif {
            MotifId::M1 | MotifId::M5 => 1 << (k - 1),
            _ => 1 << k,
        };
    }
    match motif {
        MotifId::M1 | MotifId::M4 | MotifId::M5 => k,
        MotifId::M2 => k + 1,
        MotifId::M3 => 2 * (k.saturating_sub(1)),
    }
}

/// Tabulated small-world constant `C` for the fully decorated family.
pub fn small_world_constant(motif: MotifId) -> f64 {
    let log = |base: f64, x: f64| x.ln() / base.ln();
    match motif {
        MotifId::M1 => 1.0 / log(6.0, 3.0),
        MotifId::M2 => 1.0 / log(6.0, 4.0),
        MotifId::M3 => 2.0 / log(6.0, 4.0),
        MotifId::M4 => 1.0 / log(7.0, 4.0),
        MotifId::M5 => 1.0 / log(8.0, 4.0),
    }
}
