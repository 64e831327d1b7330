//! Build `Λ_k`, sample a realization and print it as JSON and as an edge list.
//!
//! ```bash
//! cargo run --example generate_graph -- M3 2 0.5 7
//! ```

use hiergraph::hierarchy::{level_census, write_edgelist};
use hiergraph::{build, sample, MotifId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let motif: MotifId = args.first().map(String::as_str).unwrap_or("M1").parse()?;
    let k: u32 = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(3);
    let p: f64 = args.get(2).map(|s| s.parse()).transpose()?.unwrap_or(0.5);
    let seed: u64 = args.get(3).map(|s| s.parse()).transpose()?.unwrap_or(0);

    let g = build(motif, k)?;
    println!(
        "{motif} k={k}: {} nodes, {} basic bonds, {} decorating bonds",
        g.num_nodes(),
        g.basic_edges().len(),
        g.decorating_edges().len()
    );
    for (level, count) in level_census(&g) {
        println!("  level {level}: {count} nodes");
    }

    let r = sample(&g, p, seed)?;
    println!("realized {} of {} decorations at p={p}", r.present_count(), g.decorating_edges().len());
    println!("{}", serde_json::to_string(&r.to_document())?);

    let mut out = std::io::stdout().lock();
    write_edgelist(&mut out, g.basic_edges(), r.present_decorations())?;
    Ok(())
}
