//! Logical memory of a repetition code under a localized and an ergodic
//! perturbation: logical-operator deviations and lifetimes per seed.

use llc_lab::evolve::{time_grid, Spacing};
use llc_lab::memory::{compare_variants, CodeKind, PerturbationKind, QuenchSpec};

fn main() -> llc_lab::Result<()> {
    let times = time_grid(1.0, 1e3, 10, Spacing::Log)?;
    let base = QuenchSpec::new(CodeKind::Repetition { length: 5 }, 0.1, PerturbationKind::LbitLike, times);
    let seeds: Vec<u64> = (0..5).collect();
    let cmp = compare_variants(&base, &seeds)?;
    println!("seed  lbit-like dev  ergodic dev  ratio   t_est lbit / ergodic");
    for (k, (l, e)) in cmp.lbit_like.iter().zip(&cmp.ergodic).enumerate() {
        println!(
            "{:<5} {:<14.3e} {:<12.3e} {:<7.2} {:.3e} / {:.3e}",
            seeds[k],
            l.final_max_deviation(),
            e.final_max_deviation(),
            cmp.ratios[k],
            l.t_est,
            e.t_est
        );
    }
    println!("median ratio {:.2}, ordering holds: {}", cmp.median_ratio, cmp.ordering_holds);
    Ok(())
}
