//! Average clustering of bare and fully decorated graphs against the
//! infinite-level constants.

use hiergraph::metrics::{clustering_avg, clustering_limit, sample_stats, ClusteringMode};
use hiergraph::{build, MotifId};

fn main() -> hiergraph::Result<()> {
    for (m, k) in [(MotifId::M1, 9), (MotifId::M3, 6), (MotifId::M5, 6)] {
        let g = build(m, k)?;
        for (mode, adj) in [
            (ClusteringMode::Bare, g.bare_adjacency()),
            (ClusteringMode::FullyDecorated, g.full_adjacency()),
        ] {
            let limit = clustering_limit(m, mode)?;
            println!("{m} k={k} {mode:?}: {:.6} (limit {limit:.6})", clustering_avg(&adj));
        }
    }

    let g = build(MotifId::M1, 6)?;
    for p in [0.25, 0.5, 0.75] {
        let s = sample_stats(&g, p, 200, 3, |r| clustering_avg(&r.adjacency()))?;
        println!("M1 k=6 p={p}: {:.5} ± {:.5}", s.mean, s.stderr);
    }
    Ok(())
}
