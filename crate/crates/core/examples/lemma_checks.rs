//! Random-instance checks of the small-incremental-entangling rate and the
//! small-total-entangling bound.

use llc_lab::lemmas::{sie_check, ste_check, SIE_CONSTANT};

fn main() -> llc_lab::Result<()> {
    let sie = sie_check(200, 1)?;
    println!(
        "entangling rate: {} trials, largest |Gamma| / (ln2 ||H|| min(a,b)) = {:.3} (bound {SIE_CONSTANT}), {} violations",
        sie.trials, sie.empirical_max, sie.violations
    );
    println!("  finite-difference failures {}, largest error {:.2e}", sie.fd_failures, sie.max_fd_error);
    for (a, b) in [(1, 1), (2, 2), (1, 3)] {
        let ste = ste_check(200, a, b, 2)?;
        println!(
            "total entangling a={a} b={b}: max dS = {:.4} bits of {} allowed, {} violations",
            ste.max_delta_bits, ste.bound_bits, ste.violations
        );
    }
    Ok(())
}
