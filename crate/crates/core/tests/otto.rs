use std::f64::consts::PI;

use proptest::prelude::*;
use qtherm::otto::{
    area_preserving_point, carnot_efficiency, check_carnot, classical_adiabatic_invariant_2d, classical_energy_after,
    classical_limit_box2d, cv_harmonic_closed_form, cv_quantum, cycle_heats, efficiency_homogeneous,
    efficiency_map_2dbox, efficiency_map_classical_limit, efficiency_map_ideal_gas, ideal_gas_otto, linspace,
    scaling_factor, work_via_cv, IdealGasParams, MachineMode, Map2dSpec, OttoCycleSpec, SpectrumFamily, Truncation,
};
use qtherm::Error;

fn harmonic_cycle(w_h: f64, w_c: f64, t_h: f64, t_c: f64) -> OttoCycleSpec {
    OttoCycleSpec::new(SpectrumFamily::harmonic(w_h), SpectrumFamily::harmonic(w_c), t_h, t_c)
}

/// Brute-force level sums over 200 oscillator levels.
fn oscillator_oracle(w_h: f64, w_c: f64, t_h: f64, t_c: f64) -> (f64, f64, f64) {
    let pops = |w: f64, t: f64| {
        let raw: Vec<f64> = (0..200).map(|n| (-(n as f64) * w / t).exp()).collect();
        let z: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / z).collect::<Vec<_>>()
    };
    let (ph, pc) = (pops(w_h, t_h), pops(w_c, t_c));
    let mut q_h = 0.0;
    let mut q_c = 0.0;
    for n in 0..200 {
        let e = n as f64 + 0.5;
        q_h += e * w_h * (ph[n] - pc[n]);
        q_c += e * w_c * (pc[n] - ph[n]);
    }
    (-(q_h + q_c), q_h, q_c)
}

#[test]
fn harmonic_cycle_matches_level_sums() {
    let r = cycle_heats(&harmonic_cycle(1.0, 0.6, 1.0, 0.5)).unwrap();
    let (w, qh, qc) = oscillator_oracle(1.0, 0.6, 1.0, 0.5);
    assert!((r.work - w).abs() < 1e-12);
    assert!((r.heat_hot - qh).abs() < 1e-12);
    assert!((r.heat_cold - qc).abs() < 1e-12);
    assert_eq!(r.mode, MachineMode::Engine);
    assert!((r.efficiency().unwrap() - 0.4).abs() < 1e-12);
}

#[test]
fn scaling_at_temperature_ratio_gives_no_work() {
    let r = cycle_heats(&harmonic_cycle(1.0, 0.5, 2.0, 1.0)).unwrap();
    assert!(r.work.abs() < 1e-14);
}

#[test]
fn identical_spectra_only_conduct_heat() {
    let r = cycle_heats(&harmonic_cycle(1.0, 1.0, 2.0, 1.0)).unwrap();
    assert!(r.work.abs() < 1e-14);
    assert!(r.heat_hot > 0.0);
    assert!((r.heat_hot + r.heat_cold).abs() < 1e-14);
}

#[test]
fn level_cap_too_small_is_a_truncation_error() {
    let mut spec = harmonic_cycle(1.0, 0.6, 100.0, 50.0);
    spec.truncation = Truncation { tail_tol: 1e-10, max_levels: 16 };
    assert!(matches!(cycle_heats(&spec), Err(Error::Truncation(_))));
}

#[test]
fn invalid_temperatures_are_rejected() {
    assert!(matches!(cycle_heats(&harmonic_cycle(1.0, 0.6, 0.5, 1.0)), Err(Error::InvalidInput(_))));
    assert!(matches!(cycle_heats(&harmonic_cycle(-1.0, 0.6, 2.0, 1.0)), Err(Error::InvalidInput(_))));
}

#[test]
fn scaling_factor_examples() {
    let q = scaling_factor(&SpectrumFamily::harmonic(2.0), &SpectrumFamily::harmonic(1.5)).unwrap();
    assert!((q - 0.75).abs() < 1e-12);
    let q = scaling_factor(&SpectrumFamily::box1d(1.0), &SpectrumFamily::box1d(1.25)).unwrap();
    assert!((q - 0.64).abs() < 1e-12);
    let spec = Map2dSpec::fig3(2);
    let (x, y) = area_preserving_point(&spec, 0.8);
    assert!(scaling_factor(&SpectrumFamily::box2d(x, y), &SpectrumFamily::box2d(spec.lx_c, spec.ly_c)).is_none());
    let (x, y) = area_preserving_point(&spec, 1.0);
    let q = scaling_factor(&SpectrumFamily::box2d(x, y), &SpectrumFamily::box2d(spec.lx_c, spec.ly_c)).unwrap();
    assert!((q - 1.0).abs() < 1e-12);
}

#[test]
fn heat_capacity_limits() {
    let ho = SpectrumFamily::Harmonic { omega: 1.0, n_osc: 3, hbar: 1.0 };
    assert!((cv_quantum(&ho, 50.0).unwrap() - 3.0).abs() < 1e-4);
    assert!(cv_quantum(&ho, 0.02).unwrap() < 1e-15);
    for t in [0.1, 0.5, 1.0, 4.0] {
        let got = cv_quantum(&ho, t).unwrap();
        assert!((got - cv_harmonic_closed_form(1.0, 3, t, 1.0)).abs() < 1e-10);
    }
}

#[test]
fn box_heat_capacity_crosses_half_above_the_ground_energy() {
    // Length with ground energy one. C_v is below ½ at T = E₁, crosses ½
    // between 1.26 and 1.27, and stays above ½ from there on.
    let bx = SpectrumFamily::box1d(PI / 2f64.sqrt());
    assert!(cv_quantum(&bx, 1.0).unwrap() < 0.5);
    assert!(cv_quantum(&bx, 1.26).unwrap() < 0.5);
    assert!(cv_quantum(&bx, 1.27).unwrap() > 0.5);
    for t in linspace(1.27, 10.0, 60) {
        assert!(cv_quantum(&bx, t).unwrap() > 0.5, "T = {t}");
    }
}

#[test]
fn heat_capacity_integral_examples() {
    let (w, qh, qc) = work_via_cv(&harmonic_cycle(1.0, 1.0, 2.0, 1.0)).unwrap();
    assert_eq!(w, 0.0);
    assert!((qh + qc).abs() < 1e-14);

    let spec = harmonic_cycle(1.0, 0.6, 1.0, 0.5);
    let direct = cycle_heats(&spec).unwrap();
    assert!((work_via_cv(&spec).unwrap().0 - direct.work).abs() < 1e-7 * direct.work.abs());

    // Outside (T_c/T_h, 1) nothing is extracted.
    for q in [0.2, 0.4, 1.3] {
        assert!(work_via_cv(&harmonic_cycle(1.0, q, 1.0, 0.5)).unwrap().0 >= 0.0);
    }

    let spec = Map2dSpec::fig3(2);
    let (x, y) = area_preserving_point(&spec, 0.8);
    assert!(matches!(work_via_cv(&spec.cycle(x, y)), Err(Error::Unsupported(_))));
}

#[test]
fn homogeneous_efficiency_examples() {
    assert_eq!(efficiency_homogeneous(0.5).unwrap(), (0.5, 1.0));
    let (eta, cop) = efficiency_homogeneous(0.6).unwrap();
    assert!((eta - 0.4).abs() < 1e-15 && (cop - 1.5).abs() < 1e-14);
    let (eta, _) = efficiency_homogeneous(0.25).unwrap();
    assert!((eta - carnot_efficiency(4.0, 1.0)).abs() < 1e-15);
    assert!(efficiency_homogeneous(1.0).is_err());
    assert!(check_carnot(0.76, 4.0, 1.0).is_err());
    assert!(check_carnot(0.75, 4.0, 1.0).is_ok());
}

#[test]
fn ideal_gas_examples() {
    let at = |r: f64| ideal_gas_otto(IdealGasParams { gamma: 2.0, r }, 2.0, 1.0).unwrap();
    let one = at(1.0);
    assert_eq!(one.eta, 0.0);
    assert_eq!(one.mode, None);
    let mid = at(1.5);
    assert!((mid.r_carnot - 2.0).abs() < 1e-15);
    assert!((mid.eta - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(mid.mode, Some(MachineMode::Engine));
    let car = at(2.0);
    assert!((car.eta - 0.5).abs() < 1e-15);
    assert_eq!(at(3.0).mode, Some(MachineMode::Refrigerator));
}

#[test]
fn classical_adiabatic_invariant() {
    let mu = classical_adiabatic_invariant_2d(1.0, 3.0, 2.0).unwrap();
    let j = 1.7;
    let mu2 = classical_adiabatic_invariant_2d(1.0, 3.0 / j, 2.0 * j).unwrap();
    assert!((mu - mu2).abs() < 1e-12 * mu);
    assert_eq!(classical_energy_after(3.0, 2.0, 2.0), 3.0);
    assert!(classical_adiabatic_invariant_2d(1.0, -1.0, 2.0).is_err());
}

#[test]
fn classical_limit_on_the_area_preserving_line_has_closed_form() {
    // Each axis gives ½(q_a − 1)(T_h − T_c/q_a). With q_x = j² and q_y = 1/j²
    // the sum is ½(T_h + T_c)(q − 1)²/q for q = j², never negative.
    let spec = Map2dSpec::fig3(2);
    for j in [0.6, 0.8, 1.0, 1.3] {
        let (x, y) = area_preserving_point(&spec, j);
        let r = classical_limit_box2d(x, y, spec.lx_c, spec.ly_c, spec.t_h, spec.t_c);
        let q: f64 = j * j;
        let expected = 0.5 * (spec.t_h + spec.t_c) * (q - 1.0).powi(2) / q;
        assert!((r.work - expected).abs() < 1e-12 * (1.0 + expected));
        assert!(r.work >= 0.0);
    }
}

#[test]
fn identity_deformation_is_idle() {
    let spec = Map2dSpec::fig3(2);
    let r = cycle_heats(&spec.cycle(spec.lx_c, spec.ly_c)).unwrap();
    assert!(r.work.abs() < 1e-12);
    assert_ne!(r.mode, MachineMode::Engine);
}

#[test]
fn maps_have_grid_shape_and_respect_carnot() {
    let spec = Map2dSpec::fig3(8);
    for map in [
        efficiency_map_2dbox(&spec).unwrap(),
        efficiency_map_classical_limit(&spec).unwrap(),
        efficiency_map_ideal_gas(&spec).unwrap(),
    ] {
        assert_eq!(map.cells.len(), 8);
        assert!(map.cells.iter().all(|row| row.len() == 8));
        if let Some(m) = map.max_ratio() {
            assert!(m <= 1.0 + 1e-9);
        }
        let csv = map.to_csv();
        assert_eq!(csv.lines().count(), 9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn first_and_second_law(w_c in 0.05f64..1.5, t_c in 0.1f64..2.0, ratio in 1.05f64..5.0, use_box in any::<bool>()) {
        let t_h = t_c * ratio;
        let spec = if use_box {
            OttoCycleSpec::new(SpectrumFamily::box1d(1.0), SpectrumFamily::box1d(1.0 / w_c.sqrt()), t_h, t_c)
        } else {
            harmonic_cycle(1.0, w_c, t_h, t_c)
        };
        let r = cycle_heats(&spec).unwrap();
        let scale = r.work.abs() + r.heat_hot.abs() + r.heat_cold.abs();
        prop_assert!((r.work + r.heat_hot + r.heat_cold).abs() <= 1e-10 * scale.max(1e-300));
        if let Some(eta) = r.efficiency() {
            prop_assert!(eta <= carnot_efficiency(t_h, t_c) + 1e-9);
        }
    }

    #[test]
    fn homogeneous_efficiency_is_spectrum_independent(q in 0.51f64..0.99) {
        let ho = cycle_heats(&harmonic_cycle(1.0, q, 1.0, 0.5)).unwrap();
        let bx = cycle_heats(&OttoCycleSpec::new(
            SpectrumFamily::box1d(1.0), SpectrumFamily::box1d(1.0 / q.sqrt()), 1.0, 0.5)).unwrap();
        prop_assert!((ho.efficiency().unwrap() - (1.0 - q)).abs() < 1e-9);
        prop_assert!((bx.efficiency().unwrap() - (1.0 - q)).abs() < 1e-9);
    }

    #[test]
    fn oscillator_heat_capacity_is_below_classical(t in 0.01f64..50.0, n in 1usize..4) {
        let ho = SpectrumFamily::Harmonic { omega: 1.0, n_osc: n, hbar: 1.0 };
        prop_assert!(cv_quantum(&ho, t).unwrap() <= n as f64 + 1e-12);
    }

    #[test]
    fn tighter_truncation_does_not_move_results(w_c in 0.2f64..1.0, t_c in 0.2f64..3.0) {
        let loose = harmonic_cycle(1.0, w_c, 2.0 * t_c, t_c);
        let mut tight = loose.clone();
        tight.truncation.tail_tol = 1e-15;
        let (a, b) = (cycle_heats(&loose).unwrap(), cycle_heats(&tight).unwrap());
        for (x, y) in [(a.work, b.work), (a.heat_hot, b.heat_hot), (a.heat_cold, b.heat_cold)] {
            prop_assert!((x - y).abs() <= 1e-8 * y.abs().max(1e-12));
        }
    }
}
