//! Exact degree mixture of the M1 graph against a sampled histogram, with a
//! chi-square goodness-of-fit test and the characteristic function.

use hiergraph::metrics::{
    char_function, char_function_limit, chi_square_gof, degree_mixture_m1, sampled_node_degrees,
};
use hiergraph::{build, MotifId};

fn main() -> hiergraph::Result<()> {
    let (k, p, samples) = (6, 0.5, 10_000);
    let mixture = degree_mixture_m1(k, p)?;
    let pmf = mixture.pmf();
    println!("mean degree {:.6}, max degree {}", mixture.mean(), mixture.max_degree());

    let g = build(MotifId::M1, k)?;
    let degrees = sampled_node_degrees(&g, p, samples, 42)?;
    let mut observed = vec![0u64; pmf.len()];
    for d in degrees {
        observed[d] += 1;
    }
    println!("degree  exact     observed");
    for (d, (&e, &o)) in pmf.iter().zip(&observed).enumerate().filter(|(_, (&e, _))| e > 0.0) {
        println!("{d:>6}  {e:.5}  {:.5}", o as f64 / samples as f64);
    }
    let gof = chi_square_gof(&observed, &pmf, 0.999, 5.0);
    println!(
        "chi2 = {:.2} on {} dof, critical {:.2}: {}",
        gof.statistic,
        gof.dof,
        gof.critical,
        if gof.passes() { "consistent" } else { "rejected" }
    );

    for t in [0.5, 1.0, 2.0] {
        let fk = char_function(15, 0.3, t);
        let f = char_function_limit(0.3, t);
        println!("phi_15({t}) = {fk:.6}, limit {f:.6}, gap {:.2e}", (fk - f).norm());
    }
    Ok(())
}
