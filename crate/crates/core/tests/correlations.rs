use std::f64::consts::{FRAC_PI_2, LN_2};

use proptest::prelude::*;
use qtherm::correlations::{
    anomalous_heat, best_anomalous_heat, clausius_slack, entanglement_witness, heat_exchange, mutual_information,
    partial_swap, perfectly_correlated_state, q_clas_bound, witness_csv, witness_sweep, ExchangeScenario, QubitPair,
    Verdict, WITNESS_COLUMNS,
};
use qtherm::hilbert::{random, BipartiteState, DensityMatrix, Operator, Subsystem};
use qtherm::linalg::{self, CVector, C64};
use qtherm::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PAIR: QubitPair = QubitPair { gap: 1.0, beta_a: 0.5, beta_b: 2.0 };

fn bell() -> BipartiteState {
    let r = 0.5f64.sqrt();
    let ket = CVector::from_vec(vec![C64::new(r, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(r, 0.0)]);
    BipartiteState::new((2, 2), DensityMatrix::pure(&ket).unwrap()).unwrap()
}

#[test]
fn mutual_information_examples() {
    let prod =
        BipartiteState::product(&DensityMatrix::diagonal(&[0.7, 0.3]).unwrap(), &DensityMatrix::maximally_mixed(3));
    assert!(mutual_information(&prod).abs() < 1e-14);
    assert!((mutual_information(&bell()) - 2.0 * LN_2).abs() < 1e-12);
    let id = linalg::identity(2);
    let corr = perfectly_correlated_state(2, &id, &id).unwrap();
    assert!((mutual_information(&corr) - LN_2).abs() < 1e-12);
    let three = perfectly_correlated_state(3, &linalg::identity(3), &linalg::identity(3)).unwrap();
    assert!((mutual_information(&three) - 3f64.ln()).abs() < 1e-12);
}

#[test]
fn perfectly_correlated_state_rejects_bad_bases() {
    let skew = linalg::from_real_diagonal(&[1.0, 2.0]);
    assert!(matches!(perfectly_correlated_state(2, &skew, &linalg::identity(2)), Err(Error::InvalidInput(_))));
    assert!(matches!(
        perfectly_correlated_state(2, &linalg::identity(3), &linalg::identity(2)),
        Err(Error::DimensionMismatch(_))
    ));
}

#[test]
fn partial_swap_limits() {
    let u0 = partial_swap(0.0, 1.0, 1.0).unwrap();
    assert_eq!(u0, linalg::identity(4));

    let a = DensityMatrix::diagonal(&[0.9, 0.1]).unwrap();
    let b = DensityMatrix::diagonal(&[0.6, 0.4]).unwrap();
    let swapped = BipartiteState::product(&a, &b).evolve(&partial_swap(FRAC_PI_2, 1.0, 1.0).unwrap()).unwrap();
    assert!(linalg::max_abs_diff(swapped.reduced(Subsystem::A).matrix(), b.matrix()) < 1e-15);
    assert!(linalg::max_abs_diff(swapped.reduced(Subsystem::B).matrix(), a.matrix()) < 1e-15);

    assert!(matches!(partial_swap(0.3, 1.0, 1.5), Err(Error::OffResonance(_))));
}

#[test]
fn classical_bound_examples() {
    assert!((q_clas_bound(2, 1.0, 2.0).unwrap() - LN_2).abs() < 1e-15);
    assert!((q_clas_bound(4, 2.0, 1.5).unwrap() - 4f64.ln() / 0.5).abs() < 1e-14);
    assert!(matches!(q_clas_bound(2, 1.0, 1.0), Err(Error::Divergence(_))));
    assert!(matches!(q_clas_bound(1, 1.0, 2.0), Err(Error::InvalidInput(_))));
}

#[test]
fn witness_examples() {
    let bound = q_clas_bound(2, 1.0, 2.0).unwrap();
    assert_eq!(entanglement_witness(0.0, 2, 1.0, 2.0).unwrap(), Verdict::Inconclusive);
    assert_eq!(entanglement_witness(bound, 2, 1.0, 2.0).unwrap(), Verdict::Inconclusive);
    assert_eq!(entanglement_witness(1.1 * bound, 2, 1.0, 2.0).unwrap(), Verdict::Entangled);
}

#[test]
fn product_state_heat_flows_from_hot_to_cold() {
    let sc = PAIR.scenario(PAIR.chi_state(0.0).unwrap(), 1.0).unwrap();
    let h = heat_exchange(&sc).unwrap();
    // A is the hotter qubit.
    assert!(h.q_a < 0.0);
    assert!(anomalous_heat(&sc, &h) < 0.0);
    assert!(clausius_slack(&sc, &h) > 0.0);
}

#[test]
fn correlations_reverse_the_flow_but_stay_below_the_bound() {
    let chi = 0.95 * PAIR.chi_max().unwrap();
    let sc = PAIR.scenario(PAIR.chi_state(chi).unwrap(), FRAC_PI_2 / 2.0).unwrap();
    let h = heat_exchange(&sc).unwrap();
    assert!(anomalous_heat(&sc, &h) > 0.0);
    assert!(anomalous_heat(&sc, &h) < PAIR.q_clas().unwrap());
    assert!(h.delta_i() < 0.0);
}

#[test]
fn chi_family_is_never_entangled() {
    assert_eq!(PAIR.chi_max().unwrap(), PAIR.chi_entanglement_threshold(0.0).unwrap());
    for k in 0..=10 {
        let chi = PAIR.chi_max().unwrap() * k as f64 / 10.0;
        assert!(!PAIR.x_state_entangled(0.0, chi).unwrap());
        assert!(!PAIR.x_state_entangled(0.0, -chi).unwrap());
    }
}

#[test]
fn shifted_family_reaches_entanglement() {
    let c = PAIR.max_shift().unwrap();
    let thr = PAIR.chi_entanglement_threshold(c).unwrap();
    let top = PAIR.chi_max_shifted(c).unwrap();
    assert!(thr < top);
    let chi = 0.5 * (thr + top);
    assert!(PAIR.x_state_entangled(c, chi).unwrap());
    assert!(PAIR.x_state(c, chi).unwrap().state().eigenvalues().iter().all(|&x| x >= -1e-15));
}

#[test]
fn zero_discord_heat_does_not_depend_on_the_shift() {
    let (lo, hi) = PAIR.zero_discord_range().unwrap();
    assert!(lo < 0.0 && hi > 0.0);
    let q = |c: f64| {
        let sc = PAIR.scenario(PAIR.zero_discord_state(c).unwrap(), 0.7).unwrap();
        heat_exchange(&sc).unwrap().q_a
    };
    let reference = q(0.0);
    for k in 0..=8 {
        let c = lo + (hi - lo) * k as f64 / 8.0;
        assert!((q(c) - reference).abs() < 1e-15, "c = {c}");
    }
}

#[test]
fn best_anomalous_heat_over_the_chi_family() {
    let chis: Vec<f64> = (0..=20).map(|k| PAIR.chi_max().unwrap() * k as f64 / 20.0).collect();
    let states: Vec<_> = chis.iter().map(|&c| PAIR.chi_state(c).unwrap()).collect();
    let thetas: Vec<f64> = (0..=16).map(|k| FRAC_PI_2 * k as f64 / 16.0).collect();
    let best = best_anomalous_heat(&PAIR, &states, &thetas).unwrap();
    assert!(best > 0.0 && best < PAIR.q_clas().unwrap());
}

#[test]
fn scenario_validation() {
    let h = PAIR.hamiltonian();
    let swap = partial_swap(0.4, 1.0, 1.0).unwrap();
    // Wrong marginal temperature.
    let r = ExchangeScenario::new(h.clone(), h.clone(), 1.0, 2.0, PAIR.chi_state(0.0).unwrap(), swap.clone());
    assert!(matches!(r, Err(Error::InvalidInput(_))));
    // A generic unitary does not conserve energy.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u = random::unitary(&mut rng, 4);
    let r = ExchangeScenario::new(h.clone(), h.clone(), 0.5, 2.0, PAIR.chi_state(0.0).unwrap(), u);
    assert!(matches!(r, Err(Error::InvalidInput(_))));
    let r = ExchangeScenario::new(h.clone(), Operator::identity(3), 0.5, 2.0, PAIR.chi_state(0.0).unwrap(), swap);
    assert!(matches!(r, Err(Error::DimensionMismatch(_))));
    assert!(QubitPair { beta_b: 0.5, ..PAIR }.validate().is_err());
}

#[test]
fn witness_sweep_layout() {
    let rows = witness_sweep(&PAIR, 0.0, &[0.0, 0.5, 1.0], &[0.0, -0.05]).unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[0].chi, 0.0);
    assert_eq!(rows[3].chi, -0.05);
    assert!(rows.iter().all(|r| r.verdict == Verdict::Inconclusive));
    let csv = witness_csv(&rows);
    assert_eq!(csv.lines().next().unwrap(), WITNESS_COLUMNS.join(","));
    assert!(csv.lines().nth(1).unwrap().ends_with(",inconclusive"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exchange_identities(chi_frac in -1.0f64..1.0, theta in 0.0f64..3.2, c_frac in 0.0f64..1.0) {
        let c = c_frac * PAIR.max_shift().unwrap();
        let chi = chi_frac * PAIR.chi_max_shifted(c).unwrap();
        let sc = PAIR.scenario(PAIR.x_state(c, chi).unwrap(), theta).unwrap();
        let h = heat_exchange(&sc).unwrap();
        prop_assert!((h.q_a + h.q_b).abs() < 1e-13);
        prop_assert!((h.delta_s_a + h.delta_s_b - h.delta_i()).abs() < 1e-10);
        prop_assert!(clausius_slack(&sc, &h) >= -1e-10);
    }
}
