//! Invariants that must hold for every input, checked on random instances.

use llc_lab::bounds::{lambert_residual, lambert_w, theorem1_rhs, Branch, Theorem1Inputs, BRANCH_POINT};
use llc_lab::evolve::{time_grid, Propagator, Spacing};
use llc_lab::harness::{format_float, Artifact, CsvTable, Welford};
use llc_lab::lattice::Lattice;
use llc_lab::models::{build_hamiltonian, ModelSpec};
use llc_lab::operators::random::random_state;
use llc_lab::probes::entanglement_entropy;
use llc_lab::seeding::{derive_seed, rng_from_seed};
use llc_lab::{Boundary, Pauli, PauliString, SiteSet, StateVector};
use proptest::prelude::*;

fn pauli() -> impl Strategy<Value = Pauli> {
    prop_oneof![Just(Pauli::X), Just(Pauli::Y), Just(Pauli::Z)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lambert_solves_its_defining_equation(u in 1e-12f64..1.0, x0 in 0.0f64..1e6) {
        let x = BRANCH_POINT * (1.0 - u);
        for b in [Branch::Principal, Branch::Lower] {
            let w = lambert_w(b, x).unwrap();
            prop_assert!(lambert_residual(w, x) <= 1e-12, "{b:?} at {x}");
            let on_branch = if b == Branch::Principal { w >= -1.0 } else { w <= -1.0 };
            prop_assert!(on_branch);
        }
        let w = lambert_w(Branch::Principal, x0).unwrap();
        prop_assert!(lambert_residual(w, x0) <= 1e-12);
    }

    #[test]
    fn floats_round_trip_through_artifacts(xs in prop::collection::vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), 1..20)) {
        let rows: Vec<Vec<_>> = xs.iter().map(|&x| vec![x.into()]).collect();
        let table = CsvTable::parse(Artifact::csv("x.csv", &["value"], &rows).unwrap().text()).unwrap();
        for (k, &x) in xs.iter().enumerate() {
            prop_assert_eq!(table.number(k, 0).unwrap(), x);
            prop_assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn welford_is_shift_equivariant(xs in prop::collection::vec(-1e3f64..1e3, 1..50), shift in -1e3f64..1e3) {
        let a: Welford = xs.iter().copied().collect();
        let b: Welford = xs.iter().map(|x| x + shift).collect();
        prop_assert!((b.mean() - a.mean() - shift).abs() < 1e-9);
        prop_assert!((b.std_error() - a.std_error()).abs() < 1e-8);
        prop_assert!(a.std_error() >= 0.0);
    }

    #[test]
    fn time_grids_are_increasing_with_exact_endpoints(t0 in 1e-3f64..10.0, span in 1.0f64..1e4, n in 2usize..40, log in any::<bool>()) {
        let spacing = if log { Spacing::Log } else { Spacing::Linear };
        let g = time_grid(t0, t0 * span + 1e-9, n, spacing).unwrap();
        prop_assert_eq!(g.len(), n);
        prop_assert_eq!(g[0], t0);
        prop_assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn lattice_distance_is_a_metric(size in 2usize..6, periodic in any::<bool>(), i in 0usize..36, j in 0usize..36, k in 0usize..36) {
        let boundary = if periodic { Boundary::Periodic } else { Boundary::Open };
        let lat = Lattice::new(2, size, boundary).unwrap();
        let n = lat.num_sites();
        let (i, j, k) = (i % n, j % n, k % n);
        prop_assert_eq!(lat.site_distance(i, j), lat.site_distance(j, i));
        prop_assert_eq!(lat.site_distance(i, i), 0);
        prop_assert!(lat.site_distance(i, k) <= lat.site_distance(i, j) + lat.site_distance(j, k));
        prop_assert!(lat.site_distance(i, j) <= lat.diameter());
    }

    #[test]
    fn pauli_commutation_agrees_with_matrices(a in prop::collection::vec(pauli(), 3), b in prop::collection::vec(pauli(), 3), sa in 0usize..8, sb in 0usize..8) {
        let word = |ops: &[Pauli], mask: usize| PauliString::from_ops((0..3).filter(|k| mask >> k & 1 == 1).map(|k| (k, ops[k])));
        let (p, q) = (word(&a, sa), word(&b, sb));
        let (pm, qm) = (p.embed(3).unwrap(), q.embed(3).unwrap());
        let comm = pm.commutator(&qm).unwrap();
        let vanishes = llc_lab::linalg::max_abs_entry(comm.matrix()) < 1e-12;
        prop_assert_eq!(p.commutes_with(&q), vanishes);
    }

    #[test]
    fn entropy_is_symmetric_and_bounded(seed in any::<u64>(), mask in 1usize..31) {
        let n = 5;
        let psi = StateVector::new(random_state(1 << n, &mut rng_from_seed(seed))).unwrap();
        let a = SiteSet::new((0..n).filter(|k| mask >> k & 1 == 1));
        let b = SiteSet::range(0, n).difference(&a);
        let sa = entanglement_entropy(&psi, &a).unwrap();
        let sb = entanglement_entropy(&psi, &b).unwrap();
        prop_assert!((sa - sb).abs() < 1e-9);
        prop_assert!(sa >= 0.0 && sa <= a.len().min(b.len()) as f64 + 1e-9);
    }

    #[test]
    fn entanglement_bound_grows_with_time(c1 in 1e-4f64..1.0, xi in 0.3f64..3.0, t in 1e-2f64..1e4, factor in 1.0f64..100.0) {
        let inp = Theorem1Inputs { boundary: 2.0, xi, alpha: 1.0, c1, j: 1.0, r_min: 1.0, r_max: 20.0, cap: None };
        let early = theorem1_rhs(&inp, t).unwrap();
        let late = theorem1_rhs(&inp, t * factor).unwrap();
        prop_assert!(late.bound >= early.bound * (1.0 - 1e-12));
        prop_assert!(early.r_star >= inp.r_min && early.r_star <= inp.r_max);
    }

    #[test]
    fn derived_seeds_are_distinct(master in any::<u64>()) {
        let seeds: std::collections::BTreeSet<u64> = (0..64).map(|k| derive_seed(master, k)).collect();
        prop_assert_eq!(seeds.len(), 64);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn evolution_is_unitary(seed in any::<u64>(), t in 0.0f64..50.0) {
        let h = build_hamiltonian(&ModelSpec::DisorderedXxz { j: 1.0, jz: 1.0, disorder: 2.0 }, &Lattice::chain(5), seed).unwrap();
        let prop = Propagator::new(&h).unwrap();
        let psi = prop.evolve_state(&StateVector::neel(5), t).unwrap();
        prop_assert!((psi.norm() - 1.0).abs() < 1e-12);
        let back = prop.evolve_state(&psi, -t).unwrap();
        prop_assert!(back.distance(&StateVector::neel(5)) < 1e-10);
    }
}
