//! Half-chain entanglement after a Neel quench: logarithmic growth in an
//! l-bit chain, fast saturation in an ergodic one.

use llc_lab::evolve::{time_grid, Engine, Spacing};
use llc_lab::lattice::Lattice;
use llc_lab::models::{build_hamiltonian, LbitSpec, ModelSpec};
use llc_lab::probes::{entropy_trace, growth_fit};
use llc_lab::{SiteSet, StateVector};

fn main() -> llc_lab::Result<()> {
    let n = 8;
    let lattice = Lattice::chain(n);
    let times = time_grid(1.0, 1e3, 16, Spacing::Log)?;
    let models = [
        ("l-bit", ModelSpec::Lbit(LbitSpec { angle: 1.5, range: n, ..LbitSpec::default() })),
        ("ergodic", ModelSpec::DisorderedXxz { j: 1.0, jz: 1.0, disorder: 0.5 }),
    ];
    for (name, spec) in models {
        let h = build_hamiltonian(&spec, &lattice, 2)?;
        let trace = entropy_trace(&h, &StateVector::neel(n), &times, &SiteSet::range(0, n / 2), Engine::Exact, 30)?;
        println!("{name}: {} boundary terms", trace.boundary_size);
        for (t, s) in trace.times.iter().zip(&trace.delta_bits).step_by(3) {
            println!("  t = {t:<9.3e} dS = {s:.4} bits");
        }
        let late: Vec<(f64, f64)> =
            trace.times.iter().copied().zip(trace.delta_bits.iter().copied()).filter(|p| p.0 >= 10.0).collect();
        let fit = growth_fit(&late)?;
        println!("  on [10, 1e3]: AIC linear {:.2}, log {:.2}, selected {:?}", fit.linear.aic, fit.logarithmic.aic, fit.selected);
    }
    Ok(())
}
