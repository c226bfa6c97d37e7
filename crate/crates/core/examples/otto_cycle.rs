//! Quantum Otto cycles on a few working media.
//!
//! Run with `cargo run --example otto_cycle`.

use qtherm::otto::{
    carnot_efficiency, cv_harmonic_closed_form, cv_quantum, cycle_heats, efficiency_homogeneous, scaling_factor,
    work_via_cv, OttoCycleSpec, SpectrumFamily,
};

fn main() -> qtherm::Result<()> {
    let (t_h, t_c) = (1.0, 0.5);

    // An oscillator whose frequency drops from 1 to 0.6 between the baths.
    let spec = OttoCycleSpec::new(SpectrumFamily::harmonic(1.0), SpectrumFamily::harmonic(0.6), t_h, t_c);
    let r = cycle_heats(&spec)?;
    println!("harmonic 1 -> 0.6 at T = {t_h}/{t_c}");
    println!("  W = {:+.6}  Q_h = {:+.6}  Q_c = {:+.6}  mode = {}", r.work, r.heat_hot, r.heat_cold, r.mode.as_str());
    if let Some(eta) = r.efficiency() {
        println!("  eta = {eta:.6}  (Carnot {:.6})", carnot_efficiency(t_h, t_c));
    }

    // Same cycle through heat capacities instead of level sums.
    let (w, q_h, q_c) = work_via_cv(&spec)?;
    println!("  via C_v: W = {w:+.6}  Q_h = {q_h:+.6}  Q_c = {q_c:+.6}");

    // A homogeneous compression has the same efficiency whatever the medium.
    let q = scaling_factor(&spec.spec_h, &spec.spec_c).expect("harmonic spectra scale");
    let (eta, _) = efficiency_homogeneous(q)?;
    println!("  homogeneous efficiency 1 - q with q = {q:.3}: {eta:.6}");

    println!();
    println!("particle in a box, L_h = 1, L_c = 1.25");
    let spec = OttoCycleSpec::new(SpectrumFamily::box1d(1.0), SpectrumFamily::box1d(1.25), 20.0, 5.0);
    let r = cycle_heats(&spec)?;
    println!("  W = {:+.6}  eta = {:?}", r.work, r.efficiency());

    println!();
    println!("heat capacity of a unit oscillator");
    for t in [0.1, 0.3, 1.0, 3.0] {
        let num = cv_quantum(&SpectrumFamily::harmonic(1.0), t)?;
        println!("  T = {t:>4}: C_v = {num:.6}  closed form {:.6}", cv_harmonic_closed_form(1.0, 1, t, 1.0));
    }
    Ok(())
}
