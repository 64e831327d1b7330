//! Sweep `(L, p)` and print the critical coupling and regime of each cell.

use hiergraph::ising::{l_star, linspace, phase_diagram, psi};

fn main() -> hiergraph::Result<()> {
    println!("L* = {:.6}, psi(2 L*) = {:.6}", l_star(), psi(2.0 * l_star())?);
    let rows = phase_diagram(&linspace(0.05, 0.3, 6), &linspace(0.1, 1.0, 4))?;
    println!("{:>6} {:>5} {:>9} {:>9} {:>9}  regime", "L", "p", "t", "psi", "K*");
    for r in rows {
        println!(
            "{:>6.3} {:>5.2} {:>9.5} {:>9.5} {:>9}  {}",
            r.l,
            r.p,
            r.t,
            r.psi.unwrap_or(f64::NAN),
            r.k_star.map(|k| format!("{k:.5}")).unwrap_or_else(|| "-".into()),
            r.regime
        );
    }
    Ok(())
}
