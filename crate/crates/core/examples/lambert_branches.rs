//! Evaluate both real branches of the Lambert W function and report the
//! defining-equation residual near the branch point and far from it.

use llc_lab::bounds::{lambert_residual, lambert_w, Branch, BRANCH_POINT};

fn main() -> llc_lab::Result<()> {
    println!("branch  x                 W(x)                   residual");
    for x in [BRANCH_POINT, -0.3, -0.1, -1e-6, 0.0, 1.0, 1e3, 1e300] {
        let w0 = lambert_w(Branch::Principal, x)?;
        println!(" 0      {x:<16.9e}  {w0:<21.15}  {:.1e}", lambert_residual(w0, x));
        if x < 0.0 {
            let wm = lambert_w(Branch::Lower, x)?;
            println!("-1      {x:<16.9e}  {wm:<21.15}  {:.1e}", lambert_residual(wm, x));
        }
    }
    match lambert_w(Branch::Lower, 0.5) {
        Ok(w) => println!("unexpected value {w}"),
        Err(e) => println!("W_-1(0.5): {e}"),
    }
    Ok(())
}
