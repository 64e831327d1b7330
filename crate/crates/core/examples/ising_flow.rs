//! Iterate the renormalization map on either side of the critical coupling.

use hiergraph::ising::{classify_flow, fixed_points, k_star, l_star, t_of, FlowOptions, IsingParams};

fn main() -> hiergraph::Result<()> {
    let (l, p) = (l_star() / 2.0, 0.6);
    let t = t_of(l, p);
    let ks = k_star(l, p)?.expect("t lies in (1, 9/5]");
    println!("L={l:.5} p={p}: t={t:.6}, fixed points {:?}, K*={ks:.6}", fixed_points(t));

    for dk in [-0.1, -0.01, 0.0, 0.01, 0.1] {
        let params = IsingParams::new(ks + dk, l, 0.0, p)?;
        let flow = classify_flow(&params, &FlowOptions::default())?;
        let last = flow.last();
        println!(
            "K = K* {dk:+.2}: {:<20} after {:>4} steps, last (x, y, z) = ({:.4e}, {:.4}, {:.4e})",
            flow.classification.to_string(),
            flow.trajectory.len() - 1,
            last.x,
            last.y,
            last.z
        );
    }

    let frustrated = IsingParams::new(0.8, -0.3, 0.0, 0.5)?;
    let flow = classify_flow(&frustrated, &FlowOptions::default())?;
    println!("L<0: {} to x = {:.9}", flow.classification, flow.last().x);
    Ok(())
}
