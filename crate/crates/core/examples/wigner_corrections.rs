//! Leading quantum corrections to a classical Otto cycle from the Wigner
//! expansion, for power-law traps `V = a x^{2n}`.

use qtherm::wigner::{
    analytic_powerlaw_correction, corrected_work, e2_qc, harmonic_exact_energy, PotentialModel, PowerLawParams,
};

fn main() -> qtherm::Result<()> {
    let (t_h, t_c) = (2.0, 1.0);

    // For the oscillator the correction is known: E = T + ħ²ω²/12T + O(ħ⁴).
    let osc = PotentialModel::harmonic(1.0, 1.0)?;
    for t in [0.5, 1.0, 4.0] {
        let e2 = e2_qc(&osc, t)?;
        let approx = t + e2;
        println!(
            "oscillator T = {t}: T + E2 = {approx:.6}  exact = {:.6}  E2 = {e2:.6} (1/12T = {:.6})",
            harmonic_exact_energy(1.0, t, 1.0),
            1.0 / (12.0 * t)
        );
    }

    println!();
    for n in [1u32, 2, 3] {
        let p = PowerLawParams::with_q(n, 1.0, 1.0, 0.7);
        let cycle = corrected_work(&p.hot()?, &p.cold()?, p.q(), t_h, t_c, 1.0)?;
        let analytic = analytic_powerlaw_correction(&p, t_h, t_c, 1.0)?;
        println!(
            "x^{}: W_clas = {:+.6}  ħ² term = {:+.6}  closed form {:+.6}",
            2 * n,
            cycle.classical,
            cycle.correction,
            analytic
        );
    }
    Ok(())
}
