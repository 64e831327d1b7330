//! Node and edge counts, mean degree and bare pattern counts for every motif,
//! next to their closed forms.

use hiergraph::metrics::{formulas, patterns, sample_stats, mean_degree};
use hiergraph::{build, MotifId, RealizedGraph};

fn main() -> hiergraph::Result<()> {
    let (k, p, samples) = (5, 0.5, 500);
    println!("motif  |V_k|  |E'|  |E''|  <n_k> formula  <n_k> sampled (±se)");
    for m in MotifId::ALL {
        let g = build(m, k)?;
        let s = sample_stats(&g, p, samples, 1, mean_degree)?;
        println!(
            "{m:<5} {:>6} {:>5} {:>5} {:>14.6} {:>14.6} ({:.1e})",
            g.num_nodes(),
            g.basic_edges().len(),
            g.decorating_edges().len(),
            formulas::avg_degree(m, k, p),
            s.mean,
            s.stderr
        );
    }

    println!("\nbare pattern counts, measured / tabulated");
    for m in MotifId::ALL {
        let row: Vec<String> = (1..=3)
            .map(|k| {
                let g = build(m, k)?;
                let c = patterns::count_pattern_embeddings(&RealizedGraph::bare(&g), m)?;
                Ok(format!("k={k}: {c}/{}", formulas::motif_count_bare(m, k)))
            })
            .collect::<hiergraph::Result<_>>()?;
        println!("{m}  {}", row.join("  "));
    }
    Ok(())
}
