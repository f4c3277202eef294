//! The entanglement growth bound as a function of time: the optimal ribbon
//! radius, which constraint binds, and the logarithmic envelope.

use llc_lab::bounds::{theorem1_curve, Theorem1Inputs};

fn main() -> llc_lab::Result<()> {
    let inputs = Theorem1Inputs {
        boundary: 2.0,
        xi: 1.0,
        alpha: 1.0,
        c1: 1e-3,
        j: 1.0,
        r_min: 1.0,
        r_max: 12.0,
        cap: Some(12.0 * std::f64::consts::LN_2),
    };
    let times: Vec<f64> = (0..=12).map(|k| 10f64.powf(k as f64 / 2.0)).collect();
    let curve = theorem1_curve(&inputs, &times)?;
    println!("t          bound (nats)  r*       binding");
    for k in 0..times.len() {
        println!(
            "{:<10.3e} {:<13.5} {:<8.3} {}",
            curve.times[k],
            curve.bounds[k],
            curve.r_star[k],
            curve.diagnostics[k].name()
        );
    }
    Ok(())
}
