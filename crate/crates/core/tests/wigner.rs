use std::sync::Arc;

use proptest::prelude::*;
use qtherm::engines::loglog_slope;
use qtherm::quad::QuadOptions;
use qtherm::wigner::{
    analytic_powerlaw_correction, classical_energy, corrected_qh, corrected_work, e2_qc, harmonic_classical_marginal,
    harmonic_exact_energy, harmonic_quantum_marginal, p2_correction, p_classical, Domain, PotentialModel,
    PowerLawParams, ScalarField,
};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn exact_oscillator_work(w_h: f64, w_c: f64, t_h: f64, t_c: f64, hbar: f64) -> f64 {
    let q = w_c / w_h;
    let e = |w: f64, t: f64| harmonic_exact_energy(w, t, hbar);
    -(e(w_h, t_h) - e(w_h, t_c / q) + e(w_c, t_c) - e(w_c, q * t_h))
}

#[test]
fn flat_potential_gives_uniform_density_and_no_correction() {
    let pot = PotentialModel::constant(vec![1.0], 2.5, vec![(-1.0, 3.0)]).unwrap();
    let p = p_classical(&pot, 0.7).unwrap();
    let norm = p.integral(QuadOptions::default()).unwrap();
    for x in [-0.9, 0.0, 1.3, 2.9] {
        assert!((p.eval(&[x]) / norm - 0.25).abs() < 1e-12);
    }
    let c = p2_correction(&pot, 0.7).unwrap();
    assert_eq!(c.eval(&[0.4]), 0.0);
    assert!(e2_qc(&pot, 0.7).unwrap().abs() < 1e-14);
}

#[test]
fn oscillator_energy_coefficient() {
    for &(omega, t) in &[(1.0, 1.0), (2.0, 0.3), (0.5, 4.0)] {
        let pot = PotentialModel::harmonic(1.3, omega).unwrap();
        assert!((e2_qc(&pot, t).unwrap() - omega * omega / (12.0 * t)).abs() < 1e-8);
        assert!((classical_energy(&pot, t).unwrap() - t).abs() < 1e-9 * t);
    }
    let pot = PotentialModel::harmonic_nd(vec![1.0, 2.0], vec![1.0, 3.0]).unwrap();
    assert!((e2_qc(&pot, 2.0).unwrap() - 10.0 / 24.0).abs() < 1e-8);
}

#[test]
fn finite_differences_reproduce_the_analytic_correction() {
    let v: ScalarField = Arc::new(|x: &[f64]| 0.3 * x[0].powi(4));
    let pot = PotentialModel::custom(vec![1.0], v, Domain::Open(vec![(-2.0, 2.0)])).unwrap().with_finite_differences();
    let reference = PotentialModel::power_law(1.0, 0.3, 2).unwrap();
    let (a, b) = (e2_qc(&pot, 0.8).unwrap(), e2_qc(&reference, 0.8).unwrap());
    assert!(rel(a, b) < 1e-6, "{a} vs {b}");
}

#[test]
fn missing_derivatives_are_an_error() {
    let v: ScalarField = Arc::new(|x: &[f64]| x[0] * x[0]);
    let pot = PotentialModel::custom(vec![1.0], v, Domain::Open(vec![(-1.0, 1.0)])).unwrap();
    assert!(p2_correction(&pot, 1.0).is_err());
}

#[test]
fn zero_hbar_is_the_classical_cycle() {
    let p = PowerLawParams::with_q(2, 1.0, 1.0, 0.7);
    let r = corrected_work(&p.hot().unwrap(), &p.cold().unwrap(), p.q(), 1.0, 0.5, 0.0).unwrap();
    assert_eq!(r.correction, 0.0);
    assert_eq!(r.total, r.classical);
}

#[test]
fn analytic_correction_vanishes_at_the_idle_points() {
    let idle = PowerLawParams::with_q(1, 1.0, 1.0, 1.0);
    assert_eq!(analytic_powerlaw_correction(&idle, 1.0, 0.5, 1.0).unwrap(), 0.0);
    let carnot = PowerLawParams::with_q(2, 1.0, 1.0, 0.5);
    assert!(analytic_powerlaw_correction(&carnot, 1.0, 0.5, 1.0).unwrap().abs() < 1e-15);
}

#[test]
fn analytic_correction_matches_quadrature() {
    let p = PowerLawParams::with_q(1, 1.0, 1.0, 0.7);
    let quad = corrected_work(&p.hot().unwrap(), &p.cold().unwrap(), p.q(), 1.0, 0.5, 1.0).unwrap().correction;
    let ana = analytic_powerlaw_correction(&p, 1.0, 0.5, 1.0).unwrap();
    assert!(rel(quad, ana) < 1e-6);
}

#[test]
fn hot_heat_correction_for_the_oscillator() {
    // E₂ = ω²/12T, so the hot-side correction is ħ²ω_h²/12 · (1/T_h − q/T_c).
    let pot = PotentialModel::harmonic(1.0, 1.0).unwrap();
    let r = corrected_qh(&pot, 0.7, 1.0, 0.5, 0.1).unwrap();
    let expected = 0.01 / 12.0 * (1.0 / 1.0 - 0.7 / 0.5);
    assert!((r.correction - expected).abs() < 1e-10);
    assert!(r.correction.abs() < r.classical.abs());
}

#[test]
fn expansion_residual_is_quartic() {
    let (w_h, w_c, t_h, t_c) = (1.0, 0.6, 2.0, 1.0);
    let pot_h = PotentialModel::harmonic(1.0, w_h).unwrap();
    let pot_c = PotentialModel::harmonic(1.0, w_c).unwrap();
    let hbars = [0.1, 0.15, 0.2, 0.3, 0.4, 0.5];
    let resid: Vec<f64> = hbars
        .iter()
        .map(|&hb| {
            exact_oscillator_work(w_h, w_c, t_h, t_c, hb)
                - corrected_work(&pot_h, &pot_c, w_c / w_h, t_h, t_c, hb).unwrap().total
        })
        .collect();
    assert!((loglog_slope(&hbars, &resid) - 4.0).abs() < 0.3);

    // Least squares r = a ħ² + b ħ⁴: the ħ² coefficient must vanish.
    let (mut s44, mut s46, mut s66, mut r2, mut r4) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&h, &r) in hbars.iter().zip(&resid) {
        let (x2, x4) = (h * h, h.powi(4));
        s44 += x2 * x2;
        s46 += x2 * x4;
        s66 += x4 * x4;
        r2 += x2 * r;
        r4 += x4 * r;
    }
    let det = s44 * s66 - s46 * s46;
    let a = (r2 * s66 - r4 * s46) / det;
    let b = (s44 * r4 - s46 * r2) / det;
    assert!(a.abs() < 1e-3 * b.abs(), "a = {a:e}, b = {b:e}");
}

#[test]
fn marginals_agree_at_high_temperature() {
    let l1 = |t: f64| {
        let xs: Vec<f64> = (0..4001).map(|k| -40.0 + 80.0 * k as f64 / 4000.0).collect();
        let dx = xs[1] - xs[0];
        xs.iter()
            .map(|&x| {
                (harmonic_quantum_marginal(x, 1.0, 1.0, t, 1.0) - harmonic_classical_marginal(x, 1.0, 1.0, t)).abs()
            })
            .sum::<f64>()
            * dx
    };
    let d: Vec<f64> = [0.2, 1.0, 5.0, 25.0].iter().map(|&t| l1(t)).collect();
    assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
    assert!(d[3] < 1e-3);
}

#[test]
fn invalid_cycle_parameters_are_rejected() {
    let pot = PotentialModel::harmonic(1.0, 1.0).unwrap();
    assert!(corrected_work(&pot, &pot, 0.5, 0.5, 1.0, 1.0).is_err());
    assert!(corrected_work(&pot, &pot, -0.5, 2.0, 1.0, 1.0).is_err());
    assert!(PotentialModel::power_law(1.0, 1.0, 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn analytic_and_quadrature_corrections_agree(n in 1u32..4, q in 0.55f64..0.95, a_c in 0.3f64..3.0, t_c in 0.3f64..2.0) {
        let t_h = 2.0 * t_c;
        let p = PowerLawParams::with_q(n, a_c, 1.0, q);
        let quad = corrected_work(&p.hot().unwrap(), &p.cold().unwrap(), p.q(), t_h, t_c, 1.0).unwrap().correction;
        let ana = analytic_powerlaw_correction(&p, t_h, t_c, 1.0).unwrap();
        prop_assert!(rel(quad, ana) < 1e-6);
    }

    #[test]
    fn correction_scales_with_hbar_squared(hb in 0.05f64..2.0) {
        let p = PowerLawParams::with_q(2, 1.0, 1.0, 0.8);
        let one = analytic_powerlaw_correction(&p, 2.0, 1.0, 1.0).unwrap();
        let scaled = analytic_powerlaw_correction(&p, 2.0, 1.0, hb).unwrap();
        prop_assert!(rel(scaled, one * hb * hb) < 1e-12);
    }
}
