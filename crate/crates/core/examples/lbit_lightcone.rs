//! Commutator light cone of an l-bit chain: the contour `||[X_0(t), X_r]|| = theta`
//! spreads logarithmically, and `c t e^{-r/(2 xi')}` bounds every cell.

use llc_lab::bounds::fit_lbit_prefactor;
use llc_lab::evolve::{time_grid, Spacing};
use llc_lab::lattice::Lattice;
use llc_lab::models::{build_hamiltonian, LbitSpec, ModelSpec};
use llc_lab::probes::{commutator_grid, contour_extract, front_fit};
use llc_lab::Pauli;

fn main() -> llc_lab::Result<()> {
    let lattice = Lattice::chain(8);
    let spec = LbitSpec { angle: 1.5, range: 8, ..LbitSpec::default() };
    let h = build_hamiltonian(&ModelSpec::Lbit(spec.clone()), &lattice, 11)?;
    let times = time_grid(1.0, 1e3, 12, Spacing::Log)?;
    let distances: Vec<usize> = (1..=6).collect();
    let grid = commutator_grid(&h, &lattice, 0, Pauli::Z, Pauli::Z, &times, &distances)?;

    println!("t          {}", distances.iter().map(|r| format!("r={r:<7}")).collect::<String>());
    for (t, row) in grid.times.iter().zip(&grid.values) {
        println!("{t:<10.3e} {}", row.iter().map(|v| format!("{v:<9.2e}")).collect::<String>());
    }
    let contour = contour_extract(&grid, 0.01)?;
    let fit = front_fit(&contour)?;
    println!("theta=0.01: {} contour points, selected {:?}", contour.rows.len(), fit.selected);
    println!("AIC linear {:.2}, logarithmic {:.2}", fit.linear.aic, fit.logarithmic.aic);
    let cells: Vec<(f64, f64, f64)> = grid.cells().map(|(t, r, v)| (t, r as f64, v)).collect();
    println!("smallest c with c t exp(-r/(2 xi')) above every cell: {:.3}", fit_lbit_prefactor(&cells, spec.xi)?);
    Ok(())
}
