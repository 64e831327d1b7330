//! Diameters of bare and fully decorated graphs and the small-world bound.

use hiergraph::metrics::{diameter, formulas, small_world_check};
use hiergraph::{build, MotifId};

fn main() -> hiergraph::Result<()> {
    println!("motif  k  bare (table)  full (table)");
    for m in MotifId::ALL {
        for k in 1..=6 {
            let g = build(m, k)?;
            println!(
                "{m:<5} {k:>2}  {:>4} ({:>3})  {:>4} ({:>3})",
                diameter(&g.bare_adjacency())?,
                formulas::diameter_formula(m, k, false),
                diameter(&g.full_adjacency())?,
                formulas::diameter_formula(m, k, true),
            );
        }
    }

    for (p, k) in [(1.0, 8), (0.0, 8)] {
        let c = small_world_check(MotifId::M1, p, k)?;
        println!(
            "M1 p={p} k={k}: diameter {} vs C log|V|/log<n> = {:.3} -> {}",
            c.diameter,
            c.bound,
            if c.satisfied { "small world" } else { "not small world" }
        );
    }
    Ok(())
}
