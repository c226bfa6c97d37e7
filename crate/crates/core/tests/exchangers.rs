use qtherm::engines::{loglog_slope, logspace, MachineKind};
use qtherm::exchangers::{
    action, build_interactions, cycle_energetics_strong, embed, engine_limit_cycle, exchanger_csv, exchanger_sweep,
    fresh_environment, local_hamiltonians, reduced_engine_map, sector_difference, unitary_cycle, ExchangerSetup,
    ENGINE_DIM, EXCHANGER_COLUMNS, TOTAL_DIM,
};
use qtherm::hilbert::DensityMatrix;
use qtherm::linalg;
use qtherm::Error;

fn setup(tau: f64) -> ExchangerSetup {
    ExchangerSetup::resonant(2.0, 1.0, 0.2, 2.0, 1.0, tau)
}

fn engine_state() -> DensityMatrix {
    DensityMatrix::diagonal(&[0.6, 0.3, 0.1]).unwrap()
}

#[test]
fn cycle_operators_are_unitary() {
    for kind in MachineKind::ALL {
        let u = unitary_cycle(kind, &setup(0.8)).unwrap();
        let m = u.matrix();
        let defect = linalg::max_abs_diff(&(m.adjoint() * m), &linalg::identity(TOTAL_DIM));
        assert!(defect < 1e-12, "{kind:?}: {defect:e}");
    }
}

#[test]
fn resonant_swaps_conserve_local_energy() {
    let s = setup(1.0);
    let total = local_hamiltonians(&s).unwrap().total();
    let ints = build_interactions(&s).unwrap();
    for h in [&ints.h_oh, &ints.h_oc, &ints.h_ow] {
        assert!(linalg::max_abs(&total.commutator(h).unwrap()) < 1e-14);
    }
}

#[test]
fn interactions_act_within_single_excitation_doublets() {
    // Each swap only connects a product state to at most one partner.
    let ints = build_interactions(&setup(1.0)).unwrap();
    for h in [&ints.h_oh, &ints.h_oc, &ints.h_ow] {
        let m = h.matrix();
        for r in 0..TOTAL_DIM {
            let nonzero = (0..TOTAL_DIM).filter(|&c| m[(r, c)].norm() > 0.0).count();
            assert!(nonzero <= 1, "row {r} couples to {nonzero} states");
            assert_eq!(m[(r, r)].norm(), 0.0);
        }
    }
}

#[test]
fn zero_coupling_leaves_everything_alone() {
    let s = ExchangerSetup::resonant(2.0, 1.0, 0.2, 2.0, 0.0, 1.0);
    let ints = build_interactions(&s).unwrap();
    assert_eq!(linalg::max_abs(ints.total().matrix()), 0.0);
    for kind in MachineKind::ALL {
        let r = cycle_energetics_strong(kind, &s, &engine_state()).unwrap();
        assert!(r.work.abs() < 1e-15);
        assert!(r.heat_hot.abs() < 1e-15);
        assert!(linalg::max_abs_diff(r.rho_engine.matrix(), engine_state().matrix()) < 1e-15);
    }
    assert!(matches!(engine_limit_cycle(MachineKind::TwoStroke, &s), Err(Error::NonUniqueFixedPoint(_))));
}

#[test]
fn vanishing_cycle_time_is_the_identity() {
    for kind in MachineKind::ALL {
        let u = unitary_cycle(kind, &setup(0.0)).unwrap();
        assert!(linalg::max_abs_diff(u.matrix(), &linalg::identity(TOTAL_DIM)) < 1e-15);
        let small = unitary_cycle(kind, &setup(1e-6)).unwrap();
        assert!(linalg::max_abs_diff(small.matrix(), &linalg::identity(TOTAL_DIM)) < 1e-5);
    }
}

#[test]
fn energy_closes_over_one_cycle() {
    for kind in MachineKind::ALL {
        for tau in [0.1, 0.7, 2.0] {
            let r = cycle_energetics_strong(kind, &setup(tau), &engine_state()).unwrap();
            assert!(r.closure().abs() < 1e-12, "{kind:?} τ={tau}: {:e}", r.closure());
        }
    }
}

#[test]
fn limit_cycle_is_reproduced_and_closes_without_engine_change() {
    let s = setup(0.5);
    for kind in MachineKind::ALL {
        let rho = engine_limit_cycle(kind, &s).unwrap();
        let r = cycle_energetics_strong(kind, &s, &rho).unwrap();
        assert!(linalg::max_abs_diff(r.rho_engine.matrix(), rho.matrix()) < 1e-10);
        assert!(r.delta_engine.abs() < 1e-10);
        assert!((r.work + r.heat_hot + r.heat_cold).abs() < 1e-10);
    }
}

#[test]
fn reduced_map_preserves_trace() {
    let map = reduced_engine_map(MachineKind::FourStroke, &setup(0.9)).unwrap();
    assert!(map.trace_defect_map() < 1e-12);
}

#[test]
fn machines_agree_at_small_action() {
    let taus = logspace(0.003, 0.03, 5);
    let rows = exchanger_sweep(&setup(1.0), &taus).unwrap();
    let dw: Vec<f64> = rows.iter().map(|r| (r.w[1] - r.w[0]).abs()).collect();
    assert!((loglog_slope(&taus, &dw) - 4.0).abs() < 0.05);
    for r in &rows {
        assert!((r.s_bar - action(MachineKind::Continuous, &setup(r.tau_cyc)).unwrap()).abs() < 1e-15);
    }
}

#[test]
fn off_resonant_qubits_are_rejected() {
    let s = ExchangerSetup { gap_w: Some(1.1), ..setup(1.0) };
    assert!(matches!(build_interactions(&s), Err(Error::OffResonance(_))));
    assert!(matches!(unitary_cycle(MachineKind::TwoStroke, &s), Err(Error::OffResonance(_))));
    let ok = ExchangerSetup { gap_h: Some(2.0), ..setup(1.0) };
    assert!(ok.validate().is_ok());
}

#[test]
fn invalid_inputs() {
    let s = ExchangerSetup { omega_c: 3.0, ..setup(1.0) };
    assert!(matches!(s.validate(), Err(Error::InvalidInput(_))));
    let r = cycle_energetics_strong(MachineKind::Continuous, &setup(1.0), &DensityMatrix::maximally_mixed(2));
    assert!(matches!(r, Err(Error::DimensionMismatch(_))));
    let a = DensityMatrix::maximally_mixed(2);
    assert!(matches!(sector_difference(&a, &engine_state()), Err(Error::DimensionMismatch(_))));
}

#[test]
fn battery_starts_in_its_ground_state() {
    let env = fresh_environment(&setup(1.0)).unwrap();
    let p = env.populations();
    // Battery is the last factor: odd indices are its excited state.
    assert!(p.iter().skip(1).step_by(2).all(|&x| x == 0.0));
    let warm = ExchangerSetup { beta_w: Some(1.0), ..setup(1.0) };
    let p = fresh_environment(&warm).unwrap().populations();
    assert!(p.iter().skip(1).step_by(2).any(|&x| x > 0.0));
}

#[test]
fn embed_orders_the_factors() {
    let e = linalg::from_real_diagonal(&[1.0, 2.0, 3.0]);
    let q = linalg::identity(2);
    let m = embed(&e, &q, &q, &q);
    assert_eq!(m.nrows(), ENGINE_DIM * 8);
    assert_eq!(m[(8, 8)].re, 2.0);
}

#[test]
fn sector_norms_split_the_difference() {
    let a = DensityMatrix::maximally_mixed(3);
    let mut m = a.matrix().clone();
    m[(0, 1)] += linalg::C64::new(0.1, 0.0);
    m[(1, 0)] += linalg::C64::new(0.1, 0.0);
    let b = DensityMatrix::new(m).unwrap();
    let n = sector_difference(&a, &b).unwrap();
    assert_eq!(n.diagonal, 0.0);
    assert!((n.off_diagonal - 0.1 * 2f64.sqrt()).abs() < 1e-15);
}

#[test]
fn csv_layout() {
    let rows = exchanger_sweep(&setup(1.0), &[0.1, 0.2]).unwrap();
    let csv = exchanger_csv(&rows);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], EXCHANGER_COLUMNS.join(","));
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[1].split(',').count(), 11);
}
