//! Infinite-temperature OTOCs of a localized and an ergodic chain, with the
//! butterfly velocity of each front.

use llc_lab::evolve::{time_grid, Propagator, Spacing};
use llc_lab::lattice::Lattice;
use llc_lab::models::{build_hamiltonian, LbitSpec, ModelSpec};
use llc_lab::probes::{contour_extract, front_fit, otoc_grid};
use llc_lab::Pauli;

fn front(name: &str, spec: &ModelSpec, times: &[f64]) -> llc_lab::Result<()> {
    let lattice = Lattice::chain(8);
    let h = build_hamiltonian(spec, &lattice, 5)?;
    let prop = Propagator::new(&h)?;
    let distances: Vec<usize> = (1..=7).collect();
    let grid = otoc_grid(&prop, &lattice, 0.0, 0, Pauli::Z, Pauli::Z, times, &distances)?;
    let fit = front_fit(&contour_extract(&grid, 0.01)?)?;
    println!(
        "{name:<8} max C = {:.3}, front {:?}, v_B = {:.4} [{:.4}, {:.4}]",
        grid.max_value(),
        fit.selected,
        fit.v_b,
        fit.v_b_ci.0,
        fit.v_b_ci.1
    );
    Ok(())
}

fn main() -> llc_lab::Result<()> {
    let lbit = ModelSpec::Lbit(LbitSpec { angle: 1.5, range: 8, ..LbitSpec::default() });
    front("l-bit", &lbit, &time_grid(1.0, 1e3, 12, Spacing::Log)?)?;
    let xxz = ModelSpec::DisorderedXxz { j: 1.0, jz: 1.0, disorder: 0.5 };
    front("ergodic", &xxz, &time_grid(0.25, 2.5, 10, Spacing::Linear)?)?;
    Ok(())
}
