//! Brute-force annealed partition functions against the recursion, and the
//! exact boundary ratios against the reduced map.

use hiergraph::ising::IsingParams;
use hiergraph::oracle::{annealed_partition, ratio_probe, recursion_check, BoundaryConfig};
use hiergraph::{build, MotifId};

fn main() -> hiergraph::Result<()> {
    let params = IsingParams::new(0.3, 0.2, 0.1, 0.7)?;
    let g = build(MotifId::M1, 3)?;
    for cfg in BoundaryConfig::all(3) {
        println!("<Z_3{:?}> = {:.10e}", cfg.spins(), annealed_partition(&g, &params, &cfg)?);
    }
    for k in [2, 3] {
        println!("k={k}: max relative gap to the recursion {:.2e}", recursion_check(k, &params)?);
    }
    for row in ratio_probe(&params, 6)? {
        let gap = row.exact_gap().map(|g| format!("{g:.1e}")).unwrap_or_else(|| "-".into());
        println!("k={} x={:.6} y={:.6} z={:.6} exact gap {gap}", row.k, row.x(), row.y(), row.z());
    }
    Ok(())
}
